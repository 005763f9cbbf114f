//===- Verifier.cpp - IR verification -------------------------------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "hjc/Verifier.h"
#include "hjc/Dialect.h"

#include <functional>
#include <map>
#include <set>

namespace hjc::ir {
namespace {

class Verifier {
public:
  explicit Verifier(const IrModule &m) : m_(m) {}

  std::vector<Diagnostic> run() {
    for (auto &f : m_.functions) {
      fn_ = &f;
      switch (m_.level) {
      case Level::Core:
        verifyBlockBody(f, /*requireTerminators=*/true);
        verifyCoreRules(f);
        break;
      case Level::Handshake:
        verifyBlockBody(f, /*requireTerminators=*/false);
        verifyHandshakeRules(f);
        break;
      case Level::Fsmd:
        if (!f.fsmd)
          error("fsmd.body", "fsmd-level function has no fsmd body");
        else
          verifyFsmd(f, *f.fsmd);
        break;
      case Level::Netlist:
        if (!f.netlist)
          error("nl.body", "netlist-level function has no netlist body");
        else
          verifyNetlist(*f.netlist);
        break;
      }
    }
    return std::move(diags_);
  }

private:
  const IrModule &m_;
  const IrFunction *fn_ = nullptr;
  std::vector<Diagnostic> diags_;

  void error(std::string rule, std::string msg, Span span = {}) {
    diags_.push_back(
        {Severity::Error,
         (fn_ ? "in @" + fn_->name + ": " : std::string()) + std::move(msg),
         std::move(span), std::move(rule)});
  }

  //===--------------------------------------------------------------------===//
  // Generic block-body rules (core + handshake)
  //===--------------------------------------------------------------------===//

  void verifyBlockBody(const IrFunction &f, bool requireTerminators) {
    // Level mixing: every opcode must belong to the module's level.
    for (auto &b : f.blocks)
      for (auto &op : b.ops) {
        bool ok = m_.level == Level::Core ? isCoreOpcode(op.opcode)
                                          : isHandshakeOpcode(op.opcode);
        if (!ok)
          error("ssa.level-mix",
                "operation '" + op.opcode + "' does not belong to level '" +
                    std::string(levelName(m_.level)) + "'",
                op.span);
      }

    // Single definition per value; all operand references defined.
    std::map<ValueId, int> defCount;
    for (auto &b : f.blocks) {
      for (ValueId a : b.args)
        ++defCount[a];
      for (auto &op : b.ops)
        for (ValueId r : op.results)
          ++defCount[r];
    }
    for (auto &[v, n] : defCount)
      if (n > 1)
        error("ssa.def", "value defined " + std::to_string(n) + " times");
    auto checkUse = [&](ValueId v, const Span &sp) {
      if (v < 0 || (size_t)v >= f.valueTypes.size() || !defCount.count(v))
        error("ssa.def", "use of undefined value", sp);
    };
    for (auto &b : f.blocks)
      for (auto &op : b.ops) {
        for (ValueId o : op.operands)
          checkUse(o, op.span);
        for (auto &s : op.successors) {
          if (s.block < 0 || (size_t)s.block >= f.blocks.size()) {
            error("ssa.succ", "successor references missing block", op.span);
            continue;
          }
          for (ValueId a : s.args)
            checkUse(a, op.span);
          // Successor argument arity/types.
          auto &targetArgs = f.blocks[(size_t)s.block].args;
          if (s.args.size() != targetArgs.size()) {
            error("ssa.succ-args",
                  "successor argument count mismatch for ^bb" +
                      std::to_string(s.block),
                  op.span);
          } else {
            for (size_t i = 0; i < s.args.size(); ++i)
              if (defCount.count(s.args[i]) &&
                  f.typeOf(s.args[i]) != f.typeOf(targetArgs[i]))
                error("ssa.succ-args",
                      "successor argument type mismatch for ^bb" +
                          std::to_string(s.block),
                      op.span);
          }
        }
      }

    if (!requireTerminators)
      return;

    // Exactly one terminator per block, at the end.
    for (size_t bi = 0; bi < f.blocks.size(); ++bi) {
      auto &b = f.blocks[bi];
      if (b.ops.empty() || !isTerminator(b.ops.back().opcode)) {
        error("ssa.terminator",
              "^bb" + std::to_string(bi) + " does not end with a terminator");
        continue;
      }
      for (size_t i = 0; i + 1 < b.ops.size(); ++i)
        if (isTerminator(b.ops[i].opcode))
          error("ssa.terminator",
                "terminator in the middle of ^bb" + std::to_string(bi),
                b.ops[i].span);
    }

    verifyDominance(f);
  }

  /// Dominator-based def-before-use check (core level only; handshake graphs
  /// are cyclic by design and use the one-consumer rule instead).
  void verifyDominance(const IrFunction &f) {
    size_t n = f.blocks.size();
    if (n == 0)
      return;

    // Immediate-dominator fixpoint over RPO (Cooper/Harvey/Kennedy).
    std::vector<std::vector<int>> preds(n);
    for (size_t b = 0; b < n; ++b)
      for (auto &op : f.blocks[b].ops)
        for (auto &s : op.successors)
          if (s.block >= 0 && (size_t)s.block < n)
            preds[(size_t)s.block].push_back((int)b);

    std::vector<int> rpo;
    std::vector<bool> seen(n, false);
    std::function<void(int)> dfs = [&](int b) {
      seen[(size_t)b] = true;
      for (auto &op : f.blocks[(size_t)b].ops)
        for (auto &s : op.successors)
          if (s.block >= 0 && (size_t)s.block < n && !seen[(size_t)s.block])
            dfs(s.block);
      rpo.push_back(b);
    };
    dfs(0);
    std::reverse(rpo.begin(), rpo.end());
    std::vector<int> rpoIndex(n, -1);
    for (size_t i = 0; i < rpo.size(); ++i)
      rpoIndex[(size_t)rpo[i]] = (int)i;

    std::vector<int> idom(n, -1);
    idom[0] = 0;
    auto intersect = [&](int a, int b) {
      while (a != b) {
        while (rpoIndex[(size_t)a] > rpoIndex[(size_t)b])
          a = idom[(size_t)a];
        while (rpoIndex[(size_t)b] > rpoIndex[(size_t)a])
          b = idom[(size_t)b];
      }
      return a;
    };
    bool changed = true;
    while (changed) {
      changed = false;
      for (int b : rpo) {
        if (b == 0)
          continue;
        int newIdom = -1;
        for (int p : preds[(size_t)b]) {
          if (idom[(size_t)p] == -1)
            continue;
          newIdom = newIdom == -1 ? p : intersect(newIdom, p);
        }
        if (newIdom != -1 && idom[(size_t)b] != newIdom) {
          idom[(size_t)b] = newIdom;
          changed = true;
        }
      }
    }

    auto dominates = [&](int a, int b) {
      // Unreachable blocks are exempt.
      if (idom[(size_t)b] == -1 || rpoIndex[(size_t)b] == -1)
        return true;
      while (true) {
        if (a == b)
          return true;
        if (b == 0)
          return false;
        b = idom[(size_t)b];
        if (b == -1)
          return true;
      }
    };

    // Definition site of every value.
    struct DefSite {
      int block = -1;
      int opIndex = -1; // -1 = block argument
    };
    std::map<ValueId, DefSite> defs;
    for (size_t b = 0; b < n; ++b) {
      for (ValueId a : f.blocks[b].args)
        defs[a] = {(int)b, -1};
      for (size_t oi = 0; oi < f.blocks[b].ops.size(); ++oi)
        for (ValueId r : f.blocks[b].ops[oi].results)
          defs[r] = {(int)b, (int)oi};
    }

    auto checkDom = [&](ValueId v, int useBlock, int useOp, const Span &sp) {
      auto it = defs.find(v);
      if (it == defs.end())
        return; // reported by ssa.def
      auto &d = it->second;
      bool ok;
      if (d.block == useBlock)
        ok = d.opIndex < useOp;
      else
        ok = dominates(d.block, useBlock);
      if (!ok)
        error("ssa.dominance",
              "operand does not dominate its use in ^bb" +
                  std::to_string(useBlock),
              sp);
    };

    for (size_t b = 0; b < n; ++b)
      for (size_t oi = 0; oi < f.blocks[b].ops.size(); ++oi) {
        auto &op = f.blocks[b].ops[oi];
        for (ValueId o : op.operands)
          checkDom(o, (int)b, (int)oi, op.span);
        for (auto &s : op.successors)
          for (ValueId a : s.args)
            checkDom(a, (int)b, (int)oi, op.span);
      }
  }

  //===--------------------------------------------------------------------===//
  // core dialect rules
  //===--------------------------------------------------------------------===//

  void verifyCoreRules(const IrFunction &f) {
    // Which values come from array.alloc?
    std::set<ValueId> allocs;
    for (auto &b : f.blocks)
      for (auto &op : b.ops)
        if (op.opcode == "core.array.alloc" && !op.results.empty())
          allocs.insert(op.results[0]);

    auto t = [&](ValueId v) { return f.typeOf(v); };

    for (auto &b : f.blocks)
      for (auto &op : b.ops) {
        auto &oc = op.opcode;
        auto arity = [&](size_t nOperands, size_t nResults) {
          if (op.operands.size() != nOperands ||
              op.results.size() != nResults) {
            error("core.arity", "'" + oc + "' has wrong operand/result count",
                  op.span);
            return false;
          }
          for (ValueId o : op.operands)
            if (o < 0 || (size_t)o >= f.valueTypes.size())
              return false;
          return true;
        };

        if (oc == "core.add" || oc == "core.sub" || oc == "core.mul" ||
            oc == "core.and" || oc == "core.or" || oc == "core.xor") {
          if (arity(2, 1) && (t(op.operands[0]) != t(op.operands[1]) ||
                              t(op.results[0]) != t(op.operands[0])))
            error("core.width", "'" + oc + "' operand/result types must match",
                  op.span);
        } else if (oc == "core.shl" || oc == "core.shr") {
          if (arity(2, 1)) {
            if (!t(op.operands[0]).isInt() || !t(op.operands[1]).isInt())
              error("core.width", "shift operands must be integers", op.span);
            else if (t(op.results[0]) != t(op.operands[0]))
              error("core.width", "shift result type must match operand",
                    op.span);
          }
        } else if (oc == "core.neg" || oc == "core.not") {
          if (arity(1, 1) && t(op.results[0]) != t(op.operands[0]))
            error("core.width", "'" + oc + "' result type must match operand",
                  op.span);
        } else if (oc.substr(0, 9) == "core.cmp.") {
          if (arity(2, 1)) {
            if (t(op.operands[0]) != t(op.operands[1]))
              error("core.width", "comparison operand types must match",
                    op.span);
            if (!(t(op.results[0]) == HwType::u1()))
              error("core.width", "comparison result must be u1", op.span);
          }
        } else if (oc == "core.select") {
          if (arity(3, 1)) {
            if (!(t(op.operands[0]) == HwType::u1()))
              error("core.width", "select condition must be u1", op.span);
            if (t(op.operands[1]) != t(op.operands[2]) ||
                t(op.results[0]) != t(op.operands[1]))
              error("core.width", "select arm/result types must match",
                    op.span);
          }
        } else if (oc == "core.cast") {
          if (arity(1, 1) &&
              (!t(op.operands[0]).isInt() || !t(op.results[0]).isInt()))
            error("core.width", "cast operates on integer types", op.span);
        } else if (oc == "core.const") {
          if (arity(0, 1) && !op.attrs.count("value"))
            error("core.attr", "core.const requires a 'value' attribute",
                  op.span);
        } else if (oc == "core.array.alloc") {
          if (arity(0, 1) && !t(op.results[0]).isArray())
            error("core.width", "array.alloc result must be an array type",
                  op.span);
        } else if (oc == "core.array.read") {
          if (arity(2, 1)) {
            checkArrayRef(op, op.operands[0], allocs, t);
            if (t(op.operands[1]).isSigned() || !t(op.operands[1]).isInt())
              error("core.index", "array index must be unsigned", op.span);
            if (t(op.operands[0]).isArray() &&
                t(op.results[0]) != t(op.operands[0]).elementType())
              error("core.width", "array.read result must be element type",
                    op.span);
          }
        } else if (oc == "core.array.write") {
          if (arity(3, 0)) {
            checkArrayRef(op, op.operands[0], allocs, t);
            if (t(op.operands[1]).isSigned() || !t(op.operands[1]).isInt())
              error("core.index", "array index must be unsigned", op.span);
            if (t(op.operands[0]).isArray() &&
                t(op.operands[2]) != t(op.operands[0]).elementType())
              error("core.width", "array.write value must be element type",
                    op.span);
          }
        } else if (oc == "core.br") {
          if (op.successors.size() != 1)
            error("core.arity", "core.br requires one successor", op.span);
        } else if (oc == "core.condbr") {
          if (op.successors.size() != 2 || op.operands.size() != 1)
            error("core.arity",
                  "core.condbr requires a condition and two successors",
                  op.span);
          else if (!(t(op.operands[0]) == HwType::u1()))
            error("core.width", "condbr condition must be u1", op.span);
        } else if (oc == "core.return") {
          if (op.operands.size() != 1)
            error("core.arity", "core.return requires one operand", op.span);
          else if (t(op.operands[0]) != f.returnType)
            error("core.width", "return operand must match function type",
                  op.span);
        }
      }
  }

  template <typename TypeOf>
  void checkArrayRef(const Operation &op, ValueId arr,
                     const std::set<ValueId> &allocs, TypeOf t) {
    if (!t(arr).isArray())
      error("core.width", "array operand must have array type", op.span);
    else if (!allocs.count(arr))
      error("core.array-ref",
            "array operand must be defined by core.array.alloc in the same "
            "function",
            op.span);
  }

  //===--------------------------------------------------------------------===//
  // handshake dialect rules
  //===--------------------------------------------------------------------===//

  void verifyHandshakeRules(const IrFunction &f) {
    if (f.blocks.size() != 1) {
      error("hs.shape", "handshake function must have exactly one block");
      return;
    }
    const auto &ops = f.blocks[0].ops;

    int entries = 0, exits = 0;
    for (auto &op : ops) {
      if (op.opcode == "handshake.entry")
        ++entries;
      if (op.opcode == "handshake.exit")
        ++exits;
    }
    if (entries != 1 || exits != 1)
      error("hs.shape",
            "handshake function must contain exactly one entry and one exit");

    // Exactly one consumer per channel (fan-out only via fork).
    std::map<ValueId, int> uses;
    std::map<ValueId, int> producerOp;
    for (size_t oi = 0; oi < ops.size(); ++oi) {
      for (ValueId o : ops[oi].operands)
        ++uses[o];
      for (ValueId r : ops[oi].results)
        producerOp[r] = (int)oi;
    }
    for (auto &[v, oi] : producerOp) {
      int n = uses.count(v) ? uses[v] : 0;
      if (n != 1)
        error("hs.consume",
              "channel produced by '" + ops[(size_t)oi].opcode + "' has " +
                  std::to_string(n) + " consumers (must be 1)",
              ops[(size_t)oi].span);
    }

    // Component-local arity and attribute rules.
    for (auto &op : ops) {
      auto &oc = op.opcode;
      if (oc == "handshake.fork") {
        int n = (int)op.intAttr("n");
        if (n < 2 || (int)op.results.size() != n || op.operands.size() != 1)
          error("hs.arity", "fork(n) needs one input and n >= 2 outputs",
                op.span);
      } else if (oc == "handshake.join") {
        int n = (int)op.intAttr("n");
        if (n < 2 || (int)op.operands.size() != n || op.results.size() != 1)
          error("hs.arity", "join(n) needs n >= 2 inputs and one output",
                op.span);
      } else if (oc == "handshake.merge") {
        int n = (int)op.intAttr("n");
        if (n < 2 || (int)op.operands.size() != n || op.results.size() != 2)
          error("hs.arity",
                "merge(n) needs n >= 2 inputs, a data output and an index "
                "output",
                op.span);
      } else if (oc == "handshake.mux") {
        int n = (int)op.intAttr("n");
        if (n < 2 || (int)op.operands.size() != n + 1 ||
            op.results.size() != 1) {
          error("hs.arity", "mux(n) needs a select plus n inputs", op.span);
        } else {
          int want = 1;
          while ((1 << want) < n)
            ++want;
          if (f.typeOf(op.operands[0]).width() != want)
            error("hs.mux-select",
                  "mux(" + std::to_string(n) + ") select must be " +
                      std::to_string(want) + " bits wide",
                  op.span);
        }
      } else if (oc == "handshake.cbranch") {
        if (op.operands.size() != 2 || op.results.size() != 2)
          error("hs.arity", "cbranch needs (cond, data) and two outputs",
                op.span);
      } else if (oc == "handshake.buffer") {
        if (op.operands.size() != 1 || op.results.size() != 1)
          error("hs.arity", "buffer needs one input and one output", op.span);
      } else if (oc == "handshake.constant") {
        if (op.operands.size() != 1 || op.results.size() != 1 ||
            !op.attrs.count("value"))
          error("hs.arity", "constant needs a trigger token and a value attr",
                op.span);
      } else if (oc == "handshake.mem.read") {
        if (op.operands.size() != 2 || op.results.size() != 2 ||
            op.strAttr("array").empty())
          error("hs.arity",
                "mem.read needs (addr, token) -> (data, token) and an array "
                "attr",
                op.span);
      } else if (oc == "handshake.mem.write") {
        if (op.operands.size() != 3 || op.results.size() != 1 ||
            op.strAttr("array").empty())
          error("hs.arity",
                "mem.write needs (addr, data, token) -> token and an array "
                "attr",
                op.span);
      }
    }

    // Every cycle must contain an opaque buffer: drop opaque buffers from
    // the channel graph and look for remaining cycles.
    size_t n = ops.size();
    std::vector<std::vector<int>> adj(n);
    std::map<ValueId, int> consumerOp;
    for (size_t oi = 0; oi < n; ++oi)
      for (ValueId o : ops[oi].operands)
        consumerOp[o] = (int)oi;
    auto isOpaque = [&](size_t oi) {
      return ops[oi].opcode == "handshake.buffer" &&
             ops[oi].intAttr("opaque") != 0;
    };
    for (size_t oi = 0; oi < n; ++oi) {
      if (isOpaque(oi))
        continue;
      for (ValueId r : ops[oi].results) {
        auto it = consumerOp.find(r);
        if (it != consumerOp.end() && !isOpaque((size_t)it->second))
          adj[oi].push_back(it->second);
      }
    }
    // Tarjan SCC.
    std::vector<int> index(n, -1), low(n, 0), stackPos(n, 0);
    std::vector<int> stk;
    std::vector<bool> onStack(n, false);
    int counter = 0;
    std::function<void(int)> scc = [&](int v) {
      index[(size_t)v] = low[(size_t)v] = counter++;
      stk.push_back(v);
      onStack[(size_t)v] = true;
      for (int w : adj[(size_t)v]) {
        if (index[(size_t)w] == -1) {
          scc(w);
          low[(size_t)v] = std::min(low[(size_t)v], low[(size_t)w]);
        } else if (onStack[(size_t)w]) {
          low[(size_t)v] = std::min(low[(size_t)v], index[(size_t)w]);
        }
      }
      if (low[(size_t)v] == index[(size_t)v]) {
        std::vector<int> comp;
        while (true) {
          int w = stk.back();
          stk.pop_back();
          onStack[(size_t)w] = false;
          comp.push_back(w);
          if (w == v)
            break;
        }
        bool selfLoop =
            comp.size() == 1 &&
            std::find(adj[(size_t)v].begin(), adj[(size_t)v].end(), v) !=
                adj[(size_t)v].end();
        if (comp.size() > 1 || selfLoop) {
          std::string msg = "channel cycle without an opaque buffer through:";
          for (int w : comp)
            msg += " " + ops[(size_t)w].opcode;
          error("hs.buffer-cycle", msg, ops[(size_t)v].span);
        }
      }
    };
    for (size_t v = 0; v < n; ++v)
      if (index[v] == -1)
        scc((int)v);
  }

  //===--------------------------------------------------------------------===//
  // fsmd rules
  //===--------------------------------------------------------------------===//

  void verifyFsmd(const IrFunction &f, const FsmdDesign &d) {
    int ns = (int)d.states.size();
    auto stateOk = [&](int s) { return s >= 0 && s < ns; };

    if (!stateOk(d.entryState) || !stateOk(d.doneState))
      error("fsmd.ref", "entry/done state out of range");
    if (d.resultReg >= (int)d.regs.size())
      error("fsmd.ref", "result register out of range");

    auto checkSrc = [&](const FsmdDesign::Src &s) {
      switch (s.kind) {
      case FsmdDesign::SrcKind::Reg:
        if (s.index < 0 || s.index >= (int)d.regs.size())
          error("fsmd.ref", "register source out of range");
        break;
      case FsmdDesign::SrcKind::Arg:
        if (s.index < 0 || s.index >= (int)f.paramTypes.size())
          error("fsmd.ref", "argument source out of range");
        break;
      case FsmdDesign::SrcKind::Op:
        if (s.index < 0 || s.index >= (int)d.ops.size())
          error("fsmd.ref", "op source out of range");
        break;
      case FsmdDesign::SrcKind::MemData:
        if (s.index < 0 || s.index >= (int)d.mems.size())
          error("fsmd.ref", "memory source out of range");
        break;
      case FsmdDesign::SrcKind::Const:
        break;
      }
    };

    // Unit start-step uniqueness (pipelined units accept one op per step)
    // and memory-port exclusivity per state.
    std::set<std::tuple<std::string, int, int>> unitStarts;
    std::map<std::pair<int, int>, int> memReads, memWrites;
    for (auto &op : d.ops) {
      if (!stateOk(op.startState) || !stateOk(op.lastState()))
        error("fsmd.ref", "op step range out of range");
      for (auto &s : op.operands)
        checkSrc(s);
      std::string unitKind = op.kind == "mem.read" || op.kind == "mem.write"
                                 ? "mem" + std::to_string(op.mem)
                                 : op.kind;
      if (!unitStarts.insert({unitKind, op.unit, op.startState}).second)
        error("fsmd.resource",
              "unit '" + unitKind + "' #" + std::to_string(op.unit) +
                  " bound twice in state " +
                  (stateOk(op.startState) ? d.states[(size_t)op.startState].name
                                          : "?"));
      if (op.kind == "mem.read" || op.kind == "mem.write") {
        if (op.mem < 0 || op.mem >= (int)d.mems.size()) {
          error("fsmd.ref", "memory index out of range");
          continue;
        }
        auto &slot = (op.kind == "mem.read" ? memReads : memWrites);
        if (++slot[{op.mem, op.startState}] > 1)
          error("fsmd.memport",
                "memory '" + d.mems[(size_t)op.mem].name +
                    "' port bound twice in one state");
      }
    }

    // One write per (register, state).
    std::set<std::pair<int, int>> regWrites;
    for (auto &w : d.regWrites) {
      if (w.reg < 0 || w.reg >= (int)d.regs.size() || !stateOk(w.state)) {
        error("fsmd.ref", "register write out of range");
        continue;
      }
      checkSrc(w.src);
      if (!regWrites.insert({w.reg, w.state}).second)
        error("fsmd.regwrite",
              "register '" + d.regs[(size_t)w.reg].name +
                  "' written twice in state " + d.states[(size_t)w.state].name);
    }

    // FSM determinism: per state either one unconditional transition or a
    // complementary guarded pair; the done state may have none.
    std::map<int, std::vector<const FsmdDesign::Transition *>> byState;
    for (auto &t : d.transitions) {
      if (!stateOk(t.from) || !stateOk(t.to)) {
        error("fsmd.ref", "transition state out of range");
        continue;
      }
      if (t.guard)
        checkSrc(*t.guard);
      byState[t.from].push_back(&t);
    }
    for (int s = 0; s < ns; ++s) {
      auto &ts = byState[s];
      if (ts.empty()) {
        if (s != d.doneState)
          error("fsmd.fsm", "state '" + d.states[(size_t)s].name +
                                "' has no outgoing transition");
        continue;
      }
      if (ts.size() == 1) {
        if (ts[0]->guard)
          error("fsmd.fsm", "single transition from '" +
                                d.states[(size_t)s].name +
                                "' must be unconditional");
      } else if (ts.size() == 2) {
        bool complementary =
            ts[0]->guard && ts[1]->guard &&
            ts[0]->guard->kind == ts[1]->guard->kind &&
            ts[0]->guard->index == ts[1]->guard->index &&
            ts[0]->guard->constVal == ts[1]->guard->constVal &&
            ts[0]->negated != ts[1]->negated;
        if (!complementary)
          error("fsmd.fsm", "transitions from '" + d.states[(size_t)s].name +
                                "' are not exhaustive and exclusive");
      } else {
        error("fsmd.fsm", "more than two transitions from '" +
                              d.states[(size_t)s].name + "'");
      }
    }
  }

  //===--------------------------------------------------------------------===//
  // netlist rules
  //===--------------------------------------------------------------------===//

  void verifyNetlist(const Netlist &nl) {
    size_t nn = nl.nets.size();
    auto netOk = [&](NetId id) { return id >= 0 && (size_t)id < nn; };

    // Single driver per net.
    std::vector<int> drivers(nn, 0);
    auto drive = [&](NetId id) {
      if (netOk(id))
        ++drivers[(size_t)id];
    };
    for (auto &p : nl.ports)
      if (p.isInput)
        drive(p.net);
    for (auto &node : nl.nodes)
      drive(node.output);
    for (auto &r : nl.regs)
      drive(r.q);
    for (auto &m : nl.mems)
      drive(m.rdata);
    for (size_t i = 0; i < nn; ++i)
      if (drivers[i] != 1)
        error("nl.driver", "net '" + nl.nets[i].name + "' has " +
                               std::to_string(drivers[i]) +
                               " drivers (must be 1)");

    // Width checks.
    auto w = [&](NetId id) { return netOk(id) ? nl.width(id) : -1; };
    for (auto &node : nl.nodes) {
      if (!netOk(node.output)) {
        error("nl.ref", "node output net out of range");
        continue;
      }
      for (NetId in : node.inputs)
        if (!netOk(in))
          error("nl.ref", "node input net out of range");
      int wo = w(node.output);
      switch (node.kind) {
      case CombKind::Const:
        break;
      case CombKind::Add:
      case CombKind::Sub:
      case CombKind::Mul:
      case CombKind::And:
      case CombKind::Or:
      case CombKind::Xor:
      case CombKind::Shl:
      case CombKind::ShrL:
      case CombKind::ShrA:
        if (node.inputs.size() != 2 || w(node.inputs[0]) != wo)
          error("nl.width", "arithmetic node width mismatch on net '" +
                                nl.nets[(size_t)node.output].name + "'");
        break;
      case CombKind::Not:
      case CombKind::Neg:
        if (node.inputs.size() != 1 || w(node.inputs[0]) != wo)
          error("nl.width", "unary node width mismatch");
        break;
      case CombKind::Eq:
      case CombKind::Ne:
      case CombKind::LtS:
      case CombKind::LtU:
      case CombKind::LeS:
      case CombKind::LeU:
      case CombKind::GtS:
      case CombKind::GtU:
      case CombKind::GeS:
      case CombKind::GeU:
        if (node.inputs.size() != 2 || wo != 1 ||
            w(node.inputs[0]) != w(node.inputs[1]))
          error("nl.width", "comparator width mismatch");
        break;
      case CombKind::Mux:
        if (node.inputs.size() != 3 || w(node.inputs[0]) != 1 ||
            w(node.inputs[1]) != wo || w(node.inputs[2]) != wo)
          error("nl.width", "mux width mismatch");
        break;
      case CombKind::ZExt:
      case CombKind::SExt:
        if (node.inputs.size() != 1 || w(node.inputs[0]) > wo)
          error("nl.width", "extension must not narrow");
        break;
      case CombKind::Trunc:
        if (node.inputs.size() != 1 || w(node.inputs[0]) < wo)
          error("nl.width", "truncation must not widen");
        break;
      }
    }
    for (auto &r : nl.regs)
      if (!netOk(r.q) || !netOk(r.next) || w(r.q) != w(r.next) ||
          (r.enable != kNoNet && w(r.enable) != 1))
        error("nl.width", "register '" + r.name + "' width mismatch");
    for (auto &p : nl.ports)
      if (!netOk(p.net) || w(p.net) != p.width)
        error("nl.width", "port '" + p.name + "' width mismatch");

    // Combinational acyclicity: SCC over node->node edges through nets.
    size_t n = nl.nodes.size();
    std::vector<int> driverNode(nn, -1);
    for (size_t i = 0; i < n; ++i)
      if (netOk(nl.nodes[i].output))
        driverNode[(size_t)nl.nodes[i].output] = (int)i;
    std::vector<std::vector<int>> adj(n);
    for (size_t i = 0; i < n; ++i)
      for (NetId in : nl.nodes[i].inputs)
        if (netOk(in) && driverNode[(size_t)in] >= 0)
          adj[(size_t)driverNode[(size_t)in]].push_back((int)i);

    std::vector<int> color(n, 0);
    std::vector<int> cycle;
    std::function<bool(int)> dfs = [&](int v) {
      color[(size_t)v] = 1;
      for (int u : adj[(size_t)v]) {
        if (color[(size_t)u] == 1) {
          cycle.push_back(u);
          return true;
        }
        if (color[(size_t)u] == 0 && dfs(u)) {
          cycle.push_back(u);
          return true;
        }
      }
      color[(size_t)v] = 2;
      return false;
    };
    for (size_t v = 0; v < n; ++v)
      if (color[v] == 0 && dfs((int)v)) {
        std::string msg = "combinational cycle through nets:";
        for (int u : cycle)
          msg += " '" + nl.nets[(size_t)nl.nodes[(size_t)u].output].name + "'";
        error("nl.comb-cycle", msg);
        break;
      }
  }
};

} // namespace

std::vector<Diagnostic> verify(const IrModule &module) {
  return Verifier(module).run();
}

} // namespace hjc::ir
