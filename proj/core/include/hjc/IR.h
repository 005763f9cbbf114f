//===- IR.h - Multi-level SSA IR container ----------------------*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// One IR container is shared by all four pipeline levels (core, handshake,
// fsmd, netlist) and carries a level tag; the verifier rejects modules that
// mix opcodes across levels. Core and handshake functions are block/op
// lists; fsmd and netlist functions carry structured payloads.
//
//===----------------------------------------------------------------------===//

#ifndef HJC_IR_H
#define HJC_IR_H

#include "hjc/Diagnostics.h"
#include "hjc/Fsmd.h"
#include "hjc/Netlist.h"
#include "hjc/Type.h"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hjc::ir {

enum class Level { Core, Handshake, Fsmd, Netlist };

const char *levelName(Level level);
std::optional<Level> levelFromName(const std::string &name);

/// Index into IrFunction::valueTypes. Each value has exactly one definition:
/// a block argument or one op result.
using ValueId = int32_t;
inline constexpr ValueId kInvalidValue = -1;

/// Attribute payload: integer constant, string, or a type.
class Attr {
public:
  enum class Kind { Int, String, Type };

  Attr() : kind_(Kind::Int), int_(0) {}
  Attr(int64_t v) : kind_(Kind::Int), int_(v) {}
  Attr(std::string s) : kind_(Kind::String), int_(0), str_(std::move(s)) {}
  Attr(HwType t) : kind_(Kind::Type), int_(0), type_(t) {}

  Kind kind() const { return kind_; }
  int64_t asInt() const { return int_; }
  const std::string &asString() const { return str_; }
  HwType asType() const { return type_; }

  bool operator==(const Attr &o) const {
    return kind_ == o.kind_ && int_ == o.int_ && str_ == o.str_ &&
           type_ == o.type_;
  }

private:
  Kind kind_;
  int64_t int_;
  std::string str_;
  HwType type_;
};

using AttrMap = std::map<std::string, Attr>; // ordered: printing determinism

/// A successor edge of a terminator, with the arguments passed to the
/// target block's arguments.
struct Successor {
  int block = -1;
  std::vector<ValueId> args;
};

struct Operation {
  std::string opcode; // dialect-qualified, e.g. "core.add"
  std::vector<ValueId> operands;
  std::vector<ValueId> results;
  std::vector<Successor> successors;
  AttrMap attrs;
  Span span;

  int64_t intAttr(const std::string &key, int64_t dflt = 0) const {
    auto it = attrs.find(key);
    return it != attrs.end() ? it->second.asInt() : dflt;
  }
  std::string strAttr(const std::string &key) const {
    auto it = attrs.find(key);
    return it != attrs.end() ? it->second.asString() : std::string();
  }
};

struct BasicBlock {
  std::vector<ValueId> args;
  std::vector<Operation> ops;
};

struct IrFunction {
  std::string name;
  std::vector<HwType> paramTypes;
  /// Source parameter names, used for port naming in the emitted design.
  /// Either empty or parallel to paramTypes.
  std::vector<std::string> paramNames;
  HwType returnType;

  /// Type of every value; ValueId indexes this table.
  std::vector<HwType> valueTypes;

  /// Body for core/handshake levels.
  std::vector<BasicBlock> blocks;

  /// Body for the fsmd / netlist levels.
  std::optional<FsmdDesign> fsmd;
  std::optional<Netlist> netlist;

  ValueId addValue(HwType t) {
    valueTypes.push_back(t);
    return (ValueId)(valueTypes.size() - 1);
  }
  HwType typeOf(ValueId v) const { return valueTypes.at((size_t)v); }
};

struct IrModule {
  Level level = Level::Core;
  std::vector<IrFunction> functions;

  IrFunction *find(const std::string &name) {
    for (auto &f : functions)
      if (f.name == name)
        return &f;
    return nullptr;
  }
  const IrFunction *find(const std::string &name) const {
    return const_cast<IrModule *>(this)->find(name);
  }
};

//===----------------------------------------------------------------------===//
// Textual IR (the standardized inter-stage interface)
//===----------------------------------------------------------------------===//

/// Byte-deterministic printer. Value names are positional (%0, %1, ...) in
/// definition order; blocks print as ^bbN.
std::string printIr(const IrModule &module);

/// Parses printed IR back. Throws CompileError with an IrSyntaxError
/// diagnostic (line/column) on malformed text or undefined value references.
IrModule parseIr(const std::string &text);

/// Structural equality modulo value numbering (realized as canonical-print
/// equality, which is exactly the normalized form).
bool structurallyEqual(const IrModule &a, const IrModule &b);

} // namespace hjc::ir

#endif // HJC_IR_H
