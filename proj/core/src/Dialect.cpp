//===- Dialect.cpp - Dialect opcode tables and timing model ---------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "hjc/Dialect.h"
#include "hjc/IR.h"

#include <optional>
#include <set>

namespace hjc {

int operatorLatency(const std::string &kind) {
  if (kind == "mul")
    return 3;
  if (kind == "mem.read" || kind == "mem.write")
    return 1;
  return 0;
}

int FsmdDesign::DpOp::latency() const { return operatorLatency(kind); }

namespace ir {

const char *levelName(Level level) {
  switch (level) {
  case Level::Core:
    return "core";
  case Level::Handshake:
    return "handshake";
  case Level::Fsmd:
    return "fsmd";
  case Level::Netlist:
    return "netlist";
  }
  return "?";
}

std::optional<Level> levelFromName(const std::string &name) {
  if (name == "core")
    return Level::Core;
  if (name == "handshake")
    return Level::Handshake;
  if (name == "fsmd")
    return Level::Fsmd;
  if (name == "netlist")
    return Level::Netlist;
  return std::nullopt;
}

std::string_view opcodeDialect(std::string_view opcode) {
  auto dot = opcode.find('.');
  return dot == std::string_view::npos ? opcode : opcode.substr(0, dot);
}

bool isCoreOpcode(std::string_view opcode) {
  static const std::set<std::string, std::less<>> ops = {
      "core.const",      "core.add",        "core.sub",
      "core.mul",        "core.and",        "core.or",
      "core.xor",        "core.shl",        "core.shr",
      "core.neg",        "core.not",        "core.cmp.eq",
      "core.cmp.ne",     "core.cmp.lt",     "core.cmp.le",
      "core.cmp.gt",     "core.cmp.ge",     "core.select",
      "core.cast",       "core.array.alloc", "core.array.read",
      "core.array.write", "core.br",         "core.condbr",
      "core.return",     "core.call"};
  return ops.count(opcode) > 0;
}

bool isHandshakeOpcode(std::string_view opcode) {
  static const std::set<std::string, std::less<>> ops = {
      "handshake.entry",    "handshake.exit",     "handshake.fork",
      "handshake.join",     "handshake.merge",    "handshake.mux",
      "handshake.cbranch",  "handshake.buffer",   "handshake.constant",
      "handshake.sink",     "handshake.source",   "handshake.add",
      "handshake.sub",      "handshake.mul",      "handshake.and",
      "handshake.or",       "handshake.xor",      "handshake.shl",
      "handshake.shr",      "handshake.neg",      "handshake.not",
      "handshake.cmp.eq",   "handshake.cmp.ne",   "handshake.cmp.lt",
      "handshake.cmp.le",   "handshake.cmp.gt",   "handshake.cmp.ge",
      "handshake.select",   "handshake.cast",     "handshake.mem.read",
      "handshake.mem.write"};
  return ops.count(opcode) > 0;
}

bool isTerminator(std::string_view opcode) {
  return opcode == "core.br" || opcode == "core.condbr" ||
         opcode == "core.return";
}

bool hasSideEffects(std::string_view opcode) {
  return opcode == "core.array.write" || opcode == "core.call" ||
         isTerminator(opcode);
}

std::string coreOpToDatapathKind(std::string_view opcode) {
  if (opcode == "core.array.read")
    return "mem.read";
  if (opcode == "core.array.write")
    return "mem.write";
  static const std::set<std::string, std::less<>> direct = {
      "add", "sub",    "mul",    "and",    "or",     "xor",
      "shl", "shr",    "neg",    "not",    "select", "cast",
      "cmp.eq", "cmp.ne", "cmp.lt", "cmp.le", "cmp.gt", "cmp.ge"};
  if (opcode.substr(0, 5) == "core.") {
    std::string k(opcode.substr(5));
    if (direct.count(k))
      return k;
  }
  return {};
}

} // namespace ir
} // namespace hjc
