//===- SchedStatic.cpp - List scheduling and FSMD construction ------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Timing conventions (one control step = one clock cycle):
//   * latency-0 op started in step s: result usable in step s (chained) or
//     registered at the end of s;
//   * mul started in step s: occupies s..s+2, the pipeline tap is readable
//     in step s+2 and registered there; consumers start at s+3 or later;
//   * mem.read started in step s: address presented in s, read data usable
//     in step s+1 (synchronous read);
//   * mem.write started in step s: memory updated at the end of s.
//
//===----------------------------------------------------------------------===//

#include "hjc/SchedStatic.h"

#include "hjc/Dialect.h"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace hjc {

using namespace ir;

namespace {

bool isComb(const std::string &kind) { return operatorLatency(kind) == 0; }

/// Step after which a consumer may start, for a producer started at `s`.
int consumerEarliest(const std::string &kind, int s, bool consumerIsComb) {
  if (isComb(kind))
    return consumerIsComb ? s : s + 1; // chaining only between latency-0 ops
  return s + operatorLatency(kind);    // mul: s+3; mem.read: s+1
}

/// Step in which the producer's value is tapped / written back.
int writebackStep(const std::string &kind, int s) {
  if (kind == "mul")
    return s + 2;
  if (kind == "mem.read")
    return s + 1;
  return s;
}

} // namespace

BlockSchedule scheduleBlock(const IrFunction &fn, const BasicBlock &block,
                            const ResourceSpec &spec) {
  (void)fn;
  size_t n = block.ops.size();
  BlockSchedule sched;
  sched.slots.resize(n);

  std::vector<std::string> kind(n);
  std::map<ValueId, int> defIdx; // producer op index of schedulable results
  for (size_t i = 0; i < n; ++i) {
    kind[i] = coreOpToDatapathKind(block.ops[i].opcode);
    if (!kind[i].empty())
      for (ValueId r : block.ops[i].results)
        defIdx[r] = (int)i;
  }

  // Program-order predecessor among accesses to the same array.
  std::vector<int> memPred(n, -1);
  {
    std::map<ValueId, int> lastAccess;
    for (size_t i = 0; i < n; ++i) {
      if (kind[i] != "mem.read" && kind[i] != "mem.write")
        continue;
      ValueId arr = block.ops[i].operands[0];
      auto it = lastAccess.find(arr);
      if (it != lastAccess.end())
        memPred[i] = it->second;
      lastAccess[arr] = (int)i;
    }
  }

  // Priority: longest latency path to the terminator. Dependences point
  // forward (SSA order), so a reverse sweep suffices.
  std::vector<int> prio(n, 0);
  for (size_t ri = n; ri-- > 0;) {
    if (kind[ri].empty())
      continue;
    int self = operatorLatency(kind[ri]);
    int best = 0;
    for (size_t j = ri + 1; j < n; ++j) {
      if (kind[j].empty())
        continue;
      bool consumes = false;
      for (ValueId o : block.ops[j].operands) {
        auto it = defIdx.find(o);
        if (it != defIdx.end() && it->second == (int)ri)
          consumes = true;
      }
      if (memPred[j] == (int)ri)
        consumes = true;
      if (consumes)
        best = std::max(best, prio[j]);
    }
    prio[ri] = self + best;
  }

  std::vector<int> pending;
  for (size_t i = 0; i < n; ++i)
    if (!kind[i].empty())
      pending.push_back((int)i);

  int step = 0;
  int maxWriteback = -1;
  while (!pending.empty()) {
    // Candidates at this step, best priority first, ties by ascending index.
    std::vector<int> order = pending;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return prio[a] > prio[b]; });

    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (int i : order) {
        if (sched.slots[(size_t)i].scheduled)
          continue;
        bool combOp = isComb(kind[(size_t)i]);

        // Dependence feasibility at `step`.
        bool ready = true;
        int chain = 1;
        for (ValueId o : block.ops[(size_t)i].operands) {
          auto it = defIdx.find(o);
          if (it == defIdx.end())
            continue; // constant, argument, or other-block value
          const OpSlot &p = sched.slots[(size_t)it->second];
          if (!p.scheduled) {
            ready = false;
            break;
          }
          int e = consumerEarliest(kind[(size_t)it->second], p.start, combOp);
          if (e > step) {
            ready = false;
            break;
          }
          if (combOp && isComb(kind[(size_t)it->second]) && p.start == step)
            chain = std::max(chain, p.chain + 1);
        }
        if (ready && memPred[(size_t)i] >= 0) {
          const OpSlot &p = sched.slots[(size_t)memPred[(size_t)i]];
          if (!p.scheduled || p.start + 1 > step)
            ready = false;
        }
        if (!ready || (combOp && chain > spec.chainDepth))
          continue;

        // Resource feasibility at `step`.
        int unit = 0;
        if (kind[(size_t)i] == "mul") {
          int used = 0;
          for (size_t j = 0; j < n; ++j)
            if (sched.slots[j].scheduled && kind[j] == "mul" &&
                sched.slots[j].start == step)
              ++used;
          if (used >= spec.mulLimit)
            continue;
          unit = used;
        } else if (kind[(size_t)i] == "mem.read" ||
                   kind[(size_t)i] == "mem.write") {
          ValueId arr = block.ops[(size_t)i].operands[0];
          bool busy = false;
          for (size_t j = 0; j < n; ++j)
            if (sched.slots[j].scheduled && kind[j] == kind[(size_t)i] &&
                sched.slots[j].start == step &&
                block.ops[j].operands[0] == arr)
              busy = true;
          if (busy)
            continue;
        }

        OpSlot &s = sched.slots[(size_t)i];
        s.scheduled = true;
        s.start = step;
        s.unit = unit;
        s.chain = combOp ? chain : 1;
        maxWriteback =
            std::max(maxWriteback, writebackStep(kind[(size_t)i], step));
        pending.erase(std::find(pending.begin(), pending.end(), i));
        progressed = true;
      }
    }
    ++step;
  }

  sched.numSteps = std::max(1, maxWriteback + 1);
  return sched;
}

//===----------------------------------------------------------------------===//
// FSMD construction
//===----------------------------------------------------------------------===//

namespace {

using Src = FsmdDesign::Src;
using SrcKind = FsmdDesign::SrcKind;

/// A condbr whose arms target the same block cannot be expressed as two
/// unconditional register-write sets; rewrite it to selects plus a br.
void splitSameTargetCondbr(IrFunction &fn) {
  for (auto &b : fn.blocks) {
    if (b.ops.empty())
      continue;
    Operation &t = b.ops.back();
    if (t.opcode != "core.condbr" ||
        t.successors[0].block != t.successors[1].block)
      continue;
    ValueId cond = t.operands[0];
    Successor merged = t.successors[0];
    std::vector<Operation> selects;
    for (size_t k = 0; k < merged.args.size(); ++k) {
      if (t.successors[0].args[k] == t.successors[1].args[k])
        continue;
      Operation sel;
      sel.opcode = "core.select";
      sel.operands = {cond, t.successors[0].args[k], t.successors[1].args[k]};
      sel.results = {fn.addValue(fn.typeOf(merged.args[k]))};
      sel.span = t.span;
      merged.args[k] = sel.results[0];
      selects.push_back(std::move(sel));
    }
    Operation br;
    br.opcode = "core.br";
    br.span = t.span;
    br.successors = {merged};
    b.ops.pop_back();
    for (auto &s : selects)
      b.ops.push_back(std::move(s));
    b.ops.push_back(std::move(br));
  }
}

class FsmdBuilder {
public:
  FsmdBuilder(const IrFunction &src, const ResourceSpec &spec)
      : src_(src), spec_(spec) {}

  IrFunction build() {
    IrFunction fn = src_; // copy; the working body is rewritten in place
    splitSameTargetCondbr(fn);
    fn_ = &fn;

    scheduleAll();
    classifyValues();
    collectUses();
    makeMemories();
    makeRegisters();
    makeOps();
    makeWritesAndTransitions();

    fn.fsmd = std::move(d_);
    fn.blocks.clear();
    fn.valueTypes.clear();
    return fn;
  }

private:
  const IrFunction &src_;
  const ResourceSpec &spec_;
  IrFunction *fn_ = nullptr;
  FsmdDesign d_;

  std::vector<BlockSchedule> scheds_;
  std::vector<int> stateBase_;

  enum class VK { Param, Const, BlockArg, OpResult, ArrayRef };
  struct VInfo {
    VK vk = VK::Const;
    int a = 0, b = 0;     // Param: index | BlockArg: block, argpos
                          // OpResult: block, op index | ArrayRef: mem index
    int64_t constVal = 0; // Const
    int readyState = 0;   // OpResult: state in which the tap is readable
    int reg = -1;         // register index, when one exists
  };
  std::map<ValueId, VInfo> info_;
  std::set<ValueId> needsReg_;
  std::map<std::pair<int, int>, int> dpIndex_; // (block, op) -> d_.ops index

  const std::string &opKind(int b, int i) const {
    static thread_local std::string k;
    k = coreOpToDatapathKind(fn_->blocks[(size_t)b].ops[(size_t)i].opcode);
    return k;
  }

  int lastState(int b) const {
    return stateBase_[(size_t)b] + scheds_[(size_t)b].numSteps - 1;
  }

  void scheduleAll() {
    for (size_t b = 0; b < fn_->blocks.size(); ++b) {
      scheds_.push_back(scheduleBlock(*fn_, fn_->blocks[b], spec_));
      stateBase_.push_back((int)d_.states.size());
      for (int t = 0; t < scheds_.back().numSteps; ++t)
        d_.states.push_back(
            {"s" + std::to_string(b) + "_" + std::to_string(t)});
    }
    d_.doneState = (int)d_.states.size();
    d_.states.push_back({"done"});
    d_.entryState = 0;
  }

  void classifyValues() {
    int memCount = 0;
    for (size_t b = 0; b < fn_->blocks.size(); ++b) {
      const auto &blk = fn_->blocks[b];
      for (size_t k = 0; k < blk.args.size(); ++k) {
        VInfo vi;
        if (b == 0) {
          vi.vk = VK::Param;
          vi.a = (int)k;
        } else {
          vi.vk = VK::BlockArg;
          vi.a = (int)b;
          vi.b = (int)k;
        }
        info_[blk.args[k]] = vi;
      }
      for (size_t i = 0; i < blk.ops.size(); ++i) {
        const Operation &op = blk.ops[i];
        if (op.results.empty())
          continue;
        VInfo vi;
        if (op.opcode == "core.const") {
          vi.vk = VK::Const;
          vi.constVal = fn_->typeOf(op.results[0]).wrap(op.intAttr("value"));
        } else if (op.opcode == "core.array.alloc") {
          vi.vk = VK::ArrayRef;
          vi.a = memCount++;
        } else if (op.opcode == "core.call") {
          throw std::logic_error("buildFsmd: calls must be inlined first");
        } else {
          vi.vk = VK::OpResult;
          vi.a = (int)b;
          vi.b = (int)i;
          const std::string k = coreOpToDatapathKind(op.opcode);
          vi.readyState = stateBase_[b] +
                          writebackStep(k, scheds_[b].slots[i].start);
        }
        info_[op.results[0]] = vi;
      }
    }
  }

  void use(ValueId v, int block, int readState) {
    const VInfo &vi = info_.at(v);
    if (vi.vk == VK::OpResult &&
        (vi.a != block || readState != vi.readyState))
      needsReg_.insert(v);
  }

  void collectUses() {
    for (size_t b = 0; b < fn_->blocks.size(); ++b) {
      const auto &blk = fn_->blocks[b];
      for (size_t i = 0; i < blk.ops.size(); ++i) {
        const Operation &op = blk.ops[i];
        std::string k = coreOpToDatapathKind(op.opcode);
        if (!k.empty()) {
          int g = stateBase_[b] + scheds_[b].slots[i].start;
          size_t first = (k == "mem.read" || k == "mem.write") ? 1 : 0;
          for (size_t oi = first; oi < op.operands.size(); ++oi)
            use(op.operands[oi], (int)b, g);
        } else if (isTerminator(op.opcode)) {
          int L = lastState((int)b);
          for (ValueId o : op.operands)
            use(o, (int)b, L);
          for (auto &s : op.successors)
            for (ValueId a : s.args)
              use(a, (int)b, L);
        }
      }
    }
  }

  void makeMemories() {
    for (auto &blk : fn_->blocks)
      for (auto &op : blk.ops)
        if (op.opcode == "core.array.alloc") {
          HwType t = fn_->typeOf(op.results[0]);
          d_.mems.push_back({"arr" + std::to_string(d_.mems.size()),
                             (int)t.arrayLength(), t.elementType()});
        }
  }

  void makeRegisters() {
    for (size_t b = 1; b < fn_->blocks.size(); ++b)
      for (size_t k = 0; k < fn_->blocks[b].args.size(); ++k) {
        info_[fn_->blocks[b].args[k]].reg = (int)d_.regs.size();
        d_.regs.push_back({"b" + std::to_string(b) + "_a" + std::to_string(k),
                           fn_->typeOf(fn_->blocks[b].args[k])});
      }
    for (auto &blk : fn_->blocks)
      for (auto &op : blk.ops)
        for (ValueId r : op.results)
          if (needsReg_.count(r)) {
            info_[r].reg = (int)d_.regs.size();
            d_.regs.push_back({"v" + std::to_string(r), fn_->typeOf(r)});
          }
    d_.resultReg = (int)d_.regs.size();
    d_.regs.push_back({"res", fn_->returnType});
  }

  /// The direct (unregistered) tap of an op's value, readable only in its
  /// ready state.
  Src tapSrc(ValueId v) const {
    const VInfo &vi = info_.at(v);
    Src s;
    s.type = fn_->typeOf(v);
    const std::string k = opKind(vi.a, vi.b);
    if (k == "mem.read") {
      s.kind = SrcKind::MemData;
      s.index = dpOf(vi.a, vi.b) >= 0
                    ? d_.ops[(size_t)dpOf(vi.a, vi.b)].mem
                    : 0;
    } else {
      s.kind = SrcKind::Op;
      s.index = dpOf(vi.a, vi.b);
    }
    return s;
  }

  int dpOf(int b, int i) const {
    auto it = dpIndex_.find({b, i});
    return it == dpIndex_.end() ? -1 : it->second;
  }

  Src srcAt(ValueId v, int block, int readState) const {
    const VInfo &vi = info_.at(v);
    Src s;
    s.type = fn_->typeOf(v);
    switch (vi.vk) {
    case VK::Const:
      s.kind = SrcKind::Const;
      s.constVal = vi.constVal;
      return s;
    case VK::Param:
      s.kind = SrcKind::Arg;
      s.index = vi.a;
      return s;
    case VK::BlockArg:
      s.kind = SrcKind::Reg;
      s.index = vi.reg;
      return s;
    case VK::OpResult:
      if (vi.a == block && readState == vi.readyState)
        return tapSrc(v);
      s.kind = SrcKind::Reg;
      s.index = vi.reg;
      return s;
    case VK::ArrayRef:
      throw std::logic_error("array reference used as datapath value");
    }
    return s;
  }

  void makeOps() {
    // First pass creates the ops so that taps can reference pipeline/memory
    // indices; operand Srcs only refer to earlier ops (SSA order), so a
    // single ordered pass suffices.
    std::map<ValueId, int> allocMem;
    {
      int m = 0;
      for (auto &blk : fn_->blocks)
        for (auto &op : blk.ops)
          if (op.opcode == "core.array.alloc")
            allocMem[op.results[0]] = m++;
    }
    for (size_t b = 0; b < fn_->blocks.size(); ++b) {
      const auto &blk = fn_->blocks[b];
      for (size_t i = 0; i < blk.ops.size(); ++i) {
        const Operation &op = blk.ops[i];
        std::string k = coreOpToDatapathKind(op.opcode);
        if (k.empty())
          continue;
        const OpSlot &slot = scheds_[b].slots[i];
        FsmdDesign::DpOp dp;
        dp.kind = k;
        // Combinational units are unlimited: one instance per op. Muls and
        // memory ports keep the scheduler's binding.
        dp.unit = (k == "mul" || k == "mem.read" || k == "mem.write")
                      ? slot.unit
                      : (int)d_.ops.size();
        dp.startState = stateBase_[b] + slot.start;
        int g = stateBase_[b] + slot.start;
        size_t first = 0;
        if (k == "mem.read" || k == "mem.write") {
          dp.mem = allocMem.at(op.operands[0]);
          first = 1;
        }
        for (size_t oi = first; oi < op.operands.size(); ++oi)
          dp.operands.push_back(srcAt(op.operands[oi], (int)b, g));
        dp.resultType = op.results.empty()
                            ? fn_->typeOf(op.operands.back())
                            : fn_->typeOf(op.results[0]);
        dpIndex_[{(int)b, (int)i}] = (int)d_.ops.size();
        d_.ops.push_back(std::move(dp));
      }
    }
  }

  void makeWritesAndTransitions() {
    // Write-backs for values that cross a step or block boundary.
    for (auto &blk : fn_->blocks)
      for (auto &op : blk.ops)
        for (ValueId r : op.results)
          if (needsReg_.count(r)) {
            const VInfo &vi = info_.at(r);
            d_.regWrites.push_back({vi.readyState, vi.reg, tapSrc(r)});
          }

    for (size_t b = 0; b < fn_->blocks.size(); ++b) {
      const Operation &t = fn_->blocks[b].ops.back();
      int L = lastState((int)b);

      // Step-to-step transitions within the block.
      for (int s = stateBase_[b]; s < L; ++s)
        d_.transitions.push_back({s, s + 1, std::nullopt, false});

      auto passArgs = [&](const Successor &succ) {
        for (size_t k = 0; k < succ.args.size(); ++k) {
          int reg = info_.at(fn_->blocks[(size_t)succ.block].args[k]).reg;
          d_.regWrites.push_back(
              {L, reg, srcAt(succ.args[k], (int)b, L)});
        }
      };

      if (t.opcode == "core.br") {
        passArgs(t.successors[0]);
        d_.transitions.push_back(
            {L, stateBase_[(size_t)t.successors[0].block], std::nullopt,
             false});
      } else if (t.opcode == "core.condbr") {
        Src guard = srcAt(t.operands[0], (int)b, L);
        passArgs(t.successors[0]);
        passArgs(t.successors[1]);
        d_.transitions.push_back(
            {L, stateBase_[(size_t)t.successors[0].block], guard, false});
        d_.transitions.push_back(
            {L, stateBase_[(size_t)t.successors[1].block], guard, true});
      } else if (t.opcode == "core.return") {
        d_.regWrites.push_back(
            {L, d_.resultReg, srcAt(t.operands[0], (int)b, L)});
        d_.transitions.push_back({L, d_.doneState, std::nullopt, false});
      }
    }
  }
};

} // namespace

IrModule buildFsmd(const IrModule &module, const ResourceSpec &spec) {
  IrModule out;
  out.level = Level::Fsmd;
  for (const auto &f : module.functions)
    out.functions.push_back(FsmdBuilder(f, spec).build());
  return out;
}

} // namespace hjc
