//===- Dialect.h - Dialect opcode tables and timing model -------*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef HJC_DIALECT_H
#define HJC_DIALECT_H

#include <string>
#include <string_view>

namespace hjc::ir {

/// Dialect prefix of an opcode ("core.add" -> "core").
std::string_view opcodeDialect(std::string_view opcode);

bool isCoreOpcode(std::string_view opcode);
bool isHandshakeOpcode(std::string_view opcode);

/// core.br / core.condbr / core.return.
bool isTerminator(std::string_view opcode);

/// Operations dce must keep even when unused: memory writes, calls,
/// terminators.
bool hasSideEffects(std::string_view opcode);

/// Maps a core opcode to the datapath operator kind used by the schedulers
/// and netlist lowerings ("core.add" -> "add", "core.array.read" ->
/// "mem.read"). Returns empty for non-datapath opcodes.
std::string coreOpToDatapathKind(std::string_view opcode);

} // namespace hjc::ir

#endif // HJC_DIALECT_H
