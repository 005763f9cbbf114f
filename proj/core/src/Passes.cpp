//===- Passes.cpp - Core-level rewrite passes -----------------------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "hjc/Passes.h"

#include "hjc/Dialect.h"
#include "hjc/Eval.h"
#include "hjc/LowerToCore.h"
#include "hjc/Verifier.h"

#include <map>
#include <set>

namespace hjc {

using namespace ir;

namespace {

bool foldFunction(IrFunction &fn) {
  // Constants are SSA values; defs from any block can feed any use they
  // dominate, so collect them function-wide first.
  std::map<ValueId, int64_t> consts;
  for (auto &b : fn.blocks)
    for (auto &op : b.ops)
      if (op.opcode == "core.const")
        consts[op.results[0]] = op.intAttr("value");

  bool changed = false;
  for (auto &b : fn.blocks)
    for (auto &op : b.ops) {
      if (op.opcode == "core.condbr") {
        auto it = consts.find(op.operands[0]);
        if (it == consts.end())
          continue;
        Successor taken = op.successors[it->second != 0 ? 0 : 1];
        op.opcode = "core.br";
        op.operands.clear();
        op.successors = {taken};
        changed = true;
        continue;
      }
      std::string kind = coreOpToDatapathKind(op.opcode);
      if (kind.empty() || kind == "mem.read" || kind == "mem.write")
        continue;
      std::vector<int64_t> args;
      std::vector<HwType> argTypes;
      bool allConst = true;
      for (ValueId o : op.operands) {
        auto it = consts.find(o);
        if (it == consts.end()) {
          allConst = false;
          break;
        }
        args.push_back(it->second);
        argTypes.push_back(fn.typeOf(o));
      }
      if (!allConst)
        continue;
      HwType resultType = fn.typeOf(op.results[0]);
      int64_t folded = evalOperator(kind, args, resultType, argTypes);
      op.opcode = "core.const";
      op.operands.clear();
      op.attrs.clear();
      op.attrs["value"] = Attr(folded);
      consts[op.results[0]] = folded;
      changed = true;
    }
  return changed;
}

bool dceFunction(IrFunction &fn) {
  std::set<ValueId> used;
  for (auto &b : fn.blocks)
    for (auto &op : b.ops) {
      for (ValueId o : op.operands)
        used.insert(o);
      for (auto &s : op.successors)
        for (ValueId a : s.args)
          used.insert(a);
    }

  bool changed = false;
  for (auto &b : fn.blocks) {
    std::vector<Operation> kept;
    kept.reserve(b.ops.size());
    for (auto &op : b.ops) {
      bool live = hasSideEffects(op.opcode);
      for (ValueId r : op.results)
        live = live || used.count(r);
      if (live)
        kept.push_back(std::move(op));
      else
        changed = true;
    }
    b.ops = std::move(kept);
  }
  return changed;
}

} // namespace

void constFold(ir::IrModule &module) {
  for (auto &fn : module.functions)
    while (foldFunction(fn))
      ;
}

void deadCodeElim(ir::IrModule &module) {
  for (auto &fn : module.functions)
    while (dceFunction(fn))
      ;
}

const std::vector<std::string> &knownPasses() {
  static const std::vector<std::string> names = {"constfold", "dce", "inline"};
  return names;
}

void runPipeline(ir::IrModule &module,
                 const std::vector<std::string> &passes) {
  for (const auto &name : passes) {
    if (name == "constfold")
      constFold(module);
    else if (name == "dce")
      deadCodeElim(module);
    else if (name == "inline")
      inlineAllCalls(module);
    else
      throw CompileError(
          errorDiag("unknown pass '" + name + "'", {}, "UnknownPassName"));

    auto diags = verify(module);
    if (!diags.empty()) {
      Diagnostic d = errorDiag("pass '" + name +
                                   "' produced invalid IR: " +
                                   diags.front().message,
                               diags.front().span, "PassError");
      throw CompileError(d);
    }
  }
}

} // namespace hjc
