//===- SchedDynamic.cpp - Elastic (handshake) circuit construction --------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Lowers core CFG functions to elastic dataflow graphs. Each basic block
// becomes a subgraph triggered by a control token; joins become a control
// merge plus one mux per block argument; conditional branches become one
// cbranch per distinct live-out value plus one for the control token. A
// pre-pass rewrites the CFG into block-argument-complete form so every
// cross-block value flows through explicit block arguments, which makes the
// dataflow construction purely local.
//
//===----------------------------------------------------------------------===//

#include "hjc/SchedDynamic.h"

#include "hjc/Diagnostics.h"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <string>
#include <vector>

using namespace hjc;
using namespace hjc::ir;

namespace {

[[noreturn]] void fail(const std::string &msg) {
  throw CompileError(errorDiag(msg, {}, "LoweringError"));
}

//===----------------------------------------------------------------------===//
// Core-level CFG pre-passes
//===----------------------------------------------------------------------===//

/// Drops blocks not reachable from the entry block.
/// Drops unreachable blocks and renumbers the survivors in reverse
/// post-order. Inlining appends callee bodies and continuation blocks at
/// the end of the function, so the list order stops matching control
/// order; later passes (memory token threading in particular) scan ops
/// in list order and rely on it agreeing with control order within any
/// acyclic branch chain.
void pruneUnreachable(IrFunction &fn) {
  size_t nb = fn.blocks.size();
  std::vector<int> state(nb, 0);
  std::vector<int> post;
  std::vector<std::pair<int, size_t>> stack{{0, 0}};
  state[0] = 1;
  while (!stack.empty()) {
    auto &[b, i] = stack.back();
    auto &succ = fn.blocks[(size_t)b].ops.back().successors;
    if (i < succ.size()) {
      int s = succ[i++].block;
      if (!state[(size_t)s]) {
        state[(size_t)s] = 1;
        stack.push_back({s, 0});
      }
    } else {
      post.push_back(b);
      stack.pop_back();
    }
  }
  std::vector<int> remap(nb, -1);
  std::vector<BasicBlock> kept(post.size());
  for (size_t k = 0; k < post.size(); ++k) {
    int b = post[post.size() - 1 - k];
    remap[(size_t)b] = (int)k;
    kept[k] = std::move(fn.blocks[(size_t)b]);
  }
  for (auto &b : kept)
    for (auto &op : b.ops)
      for (auto &s : op.successors)
        s.block = remap[(size_t)s.block];
  fn.blocks = std::move(kept);
}

/// Rewrites multiple core.return ops into branches to a single return block.
void canonicalizeSingleReturn(IrFunction &fn) {
  int returns = 0;
  for (auto &b : fn.blocks)
    for (auto &op : b.ops)
      if (op.opcode == "core.return")
        ++returns;
  if (returns <= 1)
    return;
  int rb = (int)fn.blocks.size();
  ValueId rv = fn.addValue(fn.returnType);
  for (auto &b : fn.blocks)
    for (auto &op : b.ops)
      if (op.opcode == "core.return") {
        Operation br;
        br.opcode = "core.br";
        br.successors.push_back({rb, {op.operands[0]}});
        br.span = op.span;
        op = std::move(br);
      }
  BasicBlock ret;
  ret.args.push_back(rv);
  Operation r;
  r.opcode = "core.return";
  r.operands.push_back(rv);
  ret.ops.push_back(std::move(r));
  fn.blocks.push_back(std::move(ret));
}

/// Makes every cross-block value an explicit block argument: classic live-in
/// dataflow over the CFG, then one fresh block argument per live-in value
/// with predecessors passing it along every edge. Array references are
/// resolved statically and therefore excluded.
void makeBlockArgsComplete(IrFunction &fn) {
  size_t nb = fn.blocks.size();
  auto routable = [&](ValueId v) { return !fn.typeOf(v).isArray(); };

  std::vector<std::set<ValueId>> defs(nb), uses(nb);
  for (size_t b = 0; b < nb; ++b) {
    for (ValueId a : fn.blocks[b].args)
      defs[b].insert(a);
    for (auto &op : fn.blocks[b].ops) {
      for (ValueId r : op.results)
        defs[b].insert(r);
      for (ValueId o : op.operands)
        if (routable(o))
          uses[b].insert(o);
      for (auto &s : op.successors)
        for (ValueId a : s.args)
          if (routable(a))
            uses[b].insert(a);
    }
  }

  std::vector<std::set<ValueId>> liveIn(nb);
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t bi = nb; bi-- > 0;) {
      std::set<ValueId> in = uses[bi];
      for (auto &s : fn.blocks[bi].ops.back().successors)
        for (ValueId v : liveIn[(size_t)s.block])
          in.insert(v);
      for (ValueId v : defs[bi])
        in.erase(v);
      if (in != liveIn[bi]) {
        liveIn[bi] = std::move(in);
        changed = true;
      }
    }
  }
  if (!liveIn[0].empty())
    fail("in @" + fn.name + ": value live into the entry block");

  std::vector<std::map<ValueId, ValueId>> local(nb);
  for (size_t b = 1; b < nb; ++b)
    for (ValueId v : liveIn[b]) {
      ValueId nv = fn.addValue(fn.typeOf(v));
      fn.blocks[b].args.push_back(nv);
      local[b][v] = nv;
    }
  auto lk = [&](size_t b, ValueId v) {
    auto it = local[b].find(v);
    return it == local[b].end() ? v : it->second;
  };
  for (size_t b = 0; b < nb; ++b)
    for (auto &op : fn.blocks[b].ops) {
      for (ValueId &o : op.operands)
        o = lk(b, o);
      for (auto &s : op.successors) {
        for (ValueId &a : s.args)
          a = lk(b, a);
        for (ValueId v : liveIn[(size_t)s.block])
          s.args.push_back(lk(b, v));
      }
    }
}

//===----------------------------------------------------------------------===//
// Fork / sink normalization
//===----------------------------------------------------------------------===//

/// Gives every multi-use channel a fork and every unconsumed channel a sink,
/// establishing the one-consumer-per-channel invariant.
void forkNormalize(IrFunction &fn) {
  auto &ops = fn.blocks[0].ops;
  std::map<ValueId, int> uses;
  for (auto &op : ops)
    for (ValueId o : op.operands)
      ++uses[o];

  struct Fanout {
    std::vector<ValueId> outs;
    size_t next = 0;
  };
  std::map<ValueId, Fanout> fan;
  std::vector<Operation> rebuilt;
  std::set<const Operation *> forkOps;
  std::vector<ValueId> unconsumed;
  for (auto &op : ops) {
    rebuilt.push_back(std::move(op));
    for (ValueId r : rebuilt.back().results) {
      int n = uses.count(r) ? uses[r] : 0;
      if (n == 0) {
        unconsumed.push_back(r);
      } else if (n >= 2) {
        Operation fork;
        fork.opcode = "handshake.fork";
        fork.operands.push_back(r);
        fork.attrs["n"] = Attr((int64_t)n);
        Fanout &f = fan[r];
        for (int i = 0; i < n; ++i)
          f.outs.push_back(fork.results.emplace_back(fn.addValue(fn.typeOf(r))));
        rebuilt.push_back(std::move(fork));
      }
    }
  }
  ops = std::move(rebuilt);
  for (auto &op : ops) {
    if (op.opcode == "handshake.fork" && fan.count(op.operands[0]))
      continue; // the fork itself keeps the original channel
    for (ValueId &o : op.operands) {
      auto it = fan.find(o);
      if (it != fan.end())
        o = it->second.outs[it->second.next++];
    }
  }
  for (auto &[v, f] : fan)
    assert(f.next == f.outs.size());
  for (ValueId v : unconsumed) {
    Operation sink;
    sink.opcode = "handshake.sink";
    sink.operands.push_back(v);
    ops.push_back(std::move(sink));
  }
}

/// Inverse of forkNormalize: dissolves forks (restoring multi-use channels)
/// and removes sinks.
void forkDenormalize(IrFunction &fn) {
  auto &ops = fn.blocks[0].ops;
  std::map<ValueId, ValueId> origin;
  for (auto &op : ops)
    if (op.opcode == "handshake.fork")
      for (ValueId r : op.results)
        origin[r] = op.operands[0];
  auto resolve = [&](ValueId v) {
    while (origin.count(v))
      v = origin[v];
    return v;
  };
  std::vector<Operation> kept;
  for (auto &op : ops) {
    if (op.opcode == "handshake.fork" || op.opcode == "handshake.sink")
      continue;
    for (ValueId &o : op.operands)
      o = resolve(o);
    kept.push_back(std::move(op));
  }
  ops = std::move(kept);
}

//===----------------------------------------------------------------------===//
// buildHandshake
//===----------------------------------------------------------------------===//

struct FnBuilder {
  IrFunction fn; // mutable working copy of the core function
  IrFunction out;
  std::vector<Operation> ops;
  std::map<ValueId, std::string> arrayName;
  // Channel placeholders per CFG edge (pred block, successor index).
  std::map<std::pair<int, int>, ValueId> tokPH;
  std::map<std::pair<int, int>, std::vector<ValueId>> argPH;
  std::set<std::pair<int, int>> backEdge;
  std::map<ValueId, ValueId> subst;
  std::vector<ValueId> vmap;
  std::vector<ValueId> ctl;

  explicit FnBuilder(const IrFunction &src) : fn(src) {}

  Operation &add(const std::string &opcode, std::vector<ValueId> operands,
                 std::vector<ValueId> results) {
    Operation op;
    op.opcode = opcode;
    op.operands = std::move(operands);
    op.results = std::move(results);
    ops.push_back(std::move(op));
    return ops.back();
  }

  void findBackEdges() {
    size_t nb = fn.blocks.size();
    std::vector<int> color(nb, 0); // 0 white, 1 grey, 2 black
    std::vector<std::pair<int, size_t>> stack{{0, 0}};
    color[0] = 1;
    // Iterative DFS; children visited in ascending target block order.
    std::vector<std::vector<std::pair<int, int>>> kids(nb); // (target, si)
    for (size_t b = 0; b < nb; ++b) {
      auto &succs = fn.blocks[b].ops.back().successors;
      for (size_t si = 0; si < succs.size(); ++si)
        kids[b].push_back({succs[si].block, (int)si});
      std::sort(kids[b].begin(), kids[b].end());
    }
    while (!stack.empty()) {
      auto &[b, i] = stack.back();
      if (i == kids[(size_t)b].size()) {
        color[(size_t)b] = 2;
        stack.pop_back();
        continue;
      }
      auto [t, si] = kids[(size_t)b][i++];
      if (color[(size_t)t] == 1)
        backEdge.insert({b, si});
      else if (color[(size_t)t] == 0) {
        color[(size_t)t] = 1;
        stack.push_back({t, 0});
      }
    }
  }

  void makeBlockInputs() {
    size_t nb = fn.blocks.size();
    // Incoming edges per block, in (pred, successor index) iteration order.
    std::vector<std::vector<std::pair<int, int>>> inEdges(nb);
    for (size_t p = 0; p < nb; ++p) {
      auto &succs = fn.blocks[p].ops.back().successors;
      for (size_t si = 0; si < succs.size(); ++si) {
        inEdges[(size_t)succs[si].block].push_back({(int)p, (int)si});
        tokPH[{(int)p, (int)si}] = out.addValue(HwType::token());
        auto &ph = argPH[{(int)p, (int)si}];
        for (ValueId a : fn.blocks[(size_t)succs[si].block].args)
          ph.push_back(out.addValue(fn.typeOf(a)));
      }
    }

    // Entry: one channel per parameter plus the activation token.
    Operation &entry = add("handshake.entry", {}, {});
    for (size_t i = 0; i < fn.paramTypes.size(); ++i) {
      ValueId v = out.addValue(fn.paramTypes[i]);
      entry.results.push_back(v);
      vmap[(size_t)fn.blocks[0].args[i]] = v;
    }
    ValueId tok = out.addValue(HwType::token());
    entry.results.push_back(tok);
    ctl[0] = tok;

    for (size_t b = 1; b < nb; ++b) {
      auto &es = inEdges[b];
      auto &args = fn.blocks[b].args;
      if (es.empty())
        fail("in @" + fn.name + ": unreachable block survived pruning");
      if (es.size() == 1) {
        ctl[b] = tokPH[es[0]];
        for (size_t j = 0; j < args.size(); ++j)
          vmap[(size_t)args[j]] = argPH[es[0]][j];
        continue;
      }
      // Left fold over the predecessors with binary merges and muxes, so
      // every select stays one bit wide.
      ValueId accTok = tokPH[es[0]];
      std::vector<ValueId> accArg = argPH[es[0]];
      bool accBack = backEdge.count(es[0]) != 0;
      for (size_t i = 1; i < es.size(); ++i) {
        bool rightBack = backEdge.count(es[i]) != 0;
        int64_t mask = (accBack && i == 1 ? 1 : 0) | (rightBack ? 2 : 0);
        ValueId newTok = out.addValue(HwType::token());
        ValueId idx = out.addValue(HwType::u1());
        Operation &m = add("handshake.merge", {accTok, tokPH[es[i]]},
                           {newTok, idx});
        m.attrs["n"] = Attr((int64_t)2);
        if (mask)
          m.attrs["backedges"] = Attr(mask);
        for (size_t j = 0; j < args.size(); ++j) {
          ValueId nv = out.addValue(fn.typeOf(args[j]));
          Operation &mx =
              add("handshake.mux", {idx, accArg[j], argPH[es[i]][j]}, {nv});
          mx.attrs["n"] = Attr((int64_t)2);
          if (mask)
            mx.attrs["backedges"] = Attr(mask);
          accArg[j] = nv;
        }
        accTok = newTok;
        accBack = false;
      }
      ctl[b] = accTok;
      for (size_t j = 0; j < args.size(); ++j)
        vmap[(size_t)args[j]] = accArg[j];
    }
  }

  void lowerBlockBody(size_t b) {
    for (auto &op : fn.blocks[b].ops) {
      if (op.opcode == "core.const") {
        ValueId r = out.addValue(fn.typeOf(op.results[0]));
        vmap[(size_t)op.results[0]] = r;
        Operation &c = add("handshake.constant", {ctl[b]}, {r});
        c.attrs["value"] = op.attrs.at("value");
      } else if (op.opcode == "core.array.alloc") {
        // Memories are static structures; nothing flows on a channel.
      } else if (op.opcode == "core.array.read") {
        ValueId data = out.addValue(fn.typeOf(op.results[0]));
        ValueId tok = out.addValue(HwType::token());
        vmap[(size_t)op.results[0]] = data;
        Operation &r = add("handshake.mem.read",
                           {vmap[(size_t)op.operands[1]], ctl[b]}, {data, tok});
        r.attrs["array"] = Attr(arrayName.at(op.operands[0]));
        r.attrs["depth"] =
            Attr((int64_t)fn.typeOf(op.operands[0]).arrayLength());
      } else if (op.opcode == "core.array.write") {
        ValueId tok = out.addValue(HwType::token());
        Operation &w =
            add("handshake.mem.write",
                {vmap[(size_t)op.operands[1]], vmap[(size_t)op.operands[2]],
                 ctl[b]},
                {tok});
        w.attrs["array"] = Attr(arrayName.at(op.operands[0]));
        w.attrs["depth"] =
            Attr((int64_t)fn.typeOf(op.operands[0]).arrayLength());
      } else if (op.opcode == "core.br") {
        subst[tokPH[{(int)b, 0}]] = ctl[b];
        auto &ph = argPH[{(int)b, 0}];
        for (size_t j = 0; j < op.successors[0].args.size(); ++j)
          subst[ph[j]] = vmap[(size_t)op.successors[0].args[j]];
      } else if (op.opcode == "core.condbr") {
        ValueId cond = vmap[(size_t)op.operands[0]];
        // One cbranch per distinct live-out value, in first-use order.
        std::vector<ValueId> liveOut;
        for (auto &s : op.successors)
          for (ValueId a : s.args)
            if (std::find(liveOut.begin(), liveOut.end(), a) == liveOut.end())
              liveOut.push_back(a);
        std::map<ValueId, std::pair<ValueId, ValueId>> routed;
        for (ValueId v : liveOut) {
          ValueId t = out.addValue(fn.typeOf(v));
          ValueId f = out.addValue(fn.typeOf(v));
          add("handshake.cbranch", {cond, vmap[(size_t)v]}, {t, f});
          routed[v] = {t, f};
        }
        ValueId ct = out.addValue(HwType::token());
        ValueId cf = out.addValue(HwType::token());
        Operation &cb = add("handshake.cbranch", {cond, ctl[b]}, {ct, cf});
        cb.attrs["ctl"] = Attr((int64_t)1);
        for (int si = 0; si < 2; ++si) {
          subst[tokPH[{(int)b, si}]] = si == 0 ? ct : cf;
          auto &ph = argPH[{(int)b, si}];
          auto &args = op.successors[(size_t)si].args;
          for (size_t j = 0; j < args.size(); ++j)
            subst[ph[j]] =
                si == 0 ? routed[args[j]].first : routed[args[j]].second;
        }
      } else if (op.opcode == "core.return") {
        add("handshake.exit", {vmap[(size_t)op.operands[0]], ctl[b]}, {});
      } else if (op.opcode == "core.call") {
        fail("in @" + fn.name +
             ": core.call must be inlined before the elastic lowering");
      } else {
        // Plain datapath op: same shape at the handshake level.
        std::vector<ValueId> operands;
        for (ValueId o : op.operands)
          operands.push_back(vmap[(size_t)o]);
        std::vector<ValueId> results;
        for (ValueId r : op.results) {
          ValueId nv = out.addValue(fn.typeOf(r));
          vmap[(size_t)r] = nv;
          results.push_back(nv);
        }
        add("handshake." + op.opcode.substr(5), std::move(operands),
            std::move(results));
      }
    }
  }

  IrFunction build() {
    pruneUnreachable(fn);
    canonicalizeSingleReturn(fn);
    makeBlockArgsComplete(fn);

    out.name = fn.name;
    out.paramTypes = fn.paramTypes;
    out.paramNames = fn.paramNames;
    out.returnType = fn.returnType;
    out.blocks.resize(1);
    vmap.assign(fn.valueTypes.size(), kInvalidValue);
    ctl.assign(fn.blocks.size(), kInvalidValue);

    int na = 0;
    for (auto &b : fn.blocks)
      for (auto &op : b.ops)
        if (op.opcode == "core.array.alloc")
          arrayName[op.results[0]] = "arr" + std::to_string(na++);

    findBackEdges();
    makeBlockInputs();
    for (size_t b = 0; b < fn.blocks.size(); ++b)
      lowerBlockBody(b);

    auto resolve = [&](ValueId v) {
      while (subst.count(v))
        v = subst[v];
      return v;
    };
    for (auto &op : ops)
      for (ValueId &o : op.operands)
        o = resolve(o);

    out.blocks[0].ops = std::move(ops);
    forkNormalize(out);
    return out;
  }
};

} // namespace

namespace hjc {

ir::IrModule buildHandshake(const ir::IrModule &module) {
  if (module.level != Level::Core)
    fail("buildHandshake expects a core-level module");
  IrModule out;
  out.level = Level::Handshake;
  for (auto &f : module.functions)
    out.functions.push_back(FnBuilder(f).build());
  return out;
}

void threadMemoryTokens(ir::IrModule &module) {
  if (module.level != Level::Handshake)
    fail("threadMemoryTokens expects a handshake-level module");
  for (auto &fn : module.functions) {
    forkDenormalize(fn);
    auto &ops = fn.blocks[0].ops;

    // Control regions, identified by the token value that triggers memory
    // ops, in first-appearance order.
    std::vector<ValueId> regions;
    std::set<ValueId> seen;
    for (auto &op : ops) {
      ValueId t = kInvalidValue;
      if (op.opcode == "handshake.mem.read")
        t = op.operands[1];
      else if (op.opcode == "handshake.mem.write")
        t = op.operands[2];
      if (t != kInvalidValue && seen.insert(t).second)
        regions.push_back(t);
    }

    std::vector<Operation> joins;
    for (ValueId c : regions) {
      // Chain accesses to each array in program order.
      std::map<std::string, ValueId> last;
      for (auto &op : ops) {
        if (op.opcode == "handshake.mem.read" && op.operands[1] == c) {
          auto it = last.find(op.strAttr("array"));
          if (it != last.end())
            op.operands[1] = it->second;
          last[op.strAttr("array")] = op.results[1];
        } else if (op.opcode == "handshake.mem.write" && op.operands[2] == c) {
          auto it = last.find(op.strAttr("array"));
          if (it != last.end())
            op.operands[2] = it->second;
          last[op.strAttr("array")] = op.results[0];
        }
      }
      if (last.empty())
        continue;

      // The region's outgoing control joins with the final token of every
      // array touched, so control cannot leave before the accesses retire.
      std::vector<std::pair<size_t, size_t>> sites; // (op index, operand)
      for (size_t oi = 0; oi < ops.size(); ++oi) {
        auto &op = ops[oi];
        if (op.opcode == "handshake.merge") {
          for (size_t k = 0; k < op.operands.size(); ++k)
            if (op.operands[k] == c)
              sites.push_back({oi, k});
        } else if (op.opcode == "handshake.cbranch" && op.intAttr("ctl")) {
          if (op.operands[1] == c)
            sites.push_back({oi, 1});
        } else if (op.opcode == "handshake.exit") {
          if (op.operands[1] == c)
            sites.push_back({oi, 1});
        }
      }
      if (sites.empty())
        continue;
      ValueId j = fn.addValue(HwType::token());
      Operation join;
      join.opcode = "handshake.join";
      for (auto &[name, tok] : last)
        join.operands.push_back(tok);
      join.operands.push_back(c);
      join.attrs["n"] = Attr((int64_t)join.operands.size());
      join.results.push_back(j);
      joins.push_back(std::move(join));
      for (auto &[oi, k] : sites)
        ops[oi].operands[k] = j;
    }
    for (auto &j : joins)
      ops.push_back(std::move(j));
    forkNormalize(fn);
  }
}

void insertBuffers(ir::IrModule &module) {
  if (module.level != Level::Handshake)
    fail("insertBuffers expects a handshake-level module");
  for (auto &fn : module.functions) {
    auto &ops = fn.blocks[0].ops;
    std::map<ValueId, const Operation *> producer;
    for (auto &op : ops)
      for (ValueId r : op.results)
        producer[r] = &op;
    auto isBuffer = [&](ValueId v, bool opaque) {
      auto it = producer.find(v);
      return it != producer.end() &&
             it->second->opcode == "handshake.buffer" &&
             (it->second->intAttr("opaque") != 0) == opaque;
    };

    std::vector<Operation> added;
    for (auto &op : ops) {
      int64_t mask = op.intAttr("backedges");
      if (!mask)
        continue;
      bool isMux = op.opcode == "handshake.mux";
      for (int bit = 0; bit < 2; ++bit) {
        if (!(mask & (1 << bit)))
          continue;
        size_t pos = (size_t)bit + (isMux ? 1 : 0);
        ValueId v = op.operands[pos];
        // Idempotence: skip channels already carrying the buffer pair.
        if (isBuffer(v, false) && isBuffer(producer[v]->operands[0], true))
          continue;
        HwType t = fn.typeOf(v);
        ValueId mid = fn.addValue(t);
        ValueId outV = fn.addValue(t);
        Operation ob;
        ob.opcode = "handshake.buffer";
        ob.operands.push_back(v);
        ob.results.push_back(mid);
        ob.attrs["opaque"] = Attr((int64_t)1);
        Operation tb;
        tb.opcode = "handshake.buffer";
        tb.operands.push_back(mid);
        tb.results.push_back(outV);
        tb.attrs["opaque"] = Attr((int64_t)0);
        added.push_back(std::move(ob));
        added.push_back(std::move(tb));
        op.operands[pos] = outV;
      }
    }
    for (auto &op : added)
      ops.push_back(std::move(op));
  }
}

ir::IrModule lowerToHandshake(const ir::IrModule &module) {
  IrModule out = buildHandshake(module);
  threadMemoryTokens(out);
  insertBuffers(out);
  return out;
}

} // namespace hjc
