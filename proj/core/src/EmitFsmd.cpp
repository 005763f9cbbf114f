//===- EmitFsmd.cpp - fsmd-level to netlist-level lowering ----------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Static back-end netlist: a binary-encoded state register, per-state
// one-hot decode nets, shared 32-bit pipelined multipliers with state-
// selected input muxes, one 1R1W memory per array, and registers whose next
// values are per-state mux chains. The machine waits in the entry state
// until `start`; argument inputs are latched on the edge that leaves it.
//
//===----------------------------------------------------------------------===//

#include "hjc/Emit.h"

#include "hjc/Dialect.h"
#include "NetBuilder.h"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace hjc {

using namespace ir;

namespace {

int clog2(int n) {
  int w = 0;
  while ((1 << w) < n)
    ++w;
  return std::max(w, 1);
}

int roundPow2(int n) {
  int p = 1;
  while (p < n)
    p <<= 1;
  return p;
}

class FsmdLowering {
public:
  FsmdLowering(const IrFunction &fn) : fn_(fn), d_(*fn.fsmd), b_(nl_) {}

  IrFunction lower() {
    makePorts();
    makeStateDecode();
    makeArgLatches();
    makeRegQs();
    makeMemories();
    makeMulUnits();
    makeCombOps();
    wireMemories();
    wireRegisters();
    wireNextState();
    wireOutputs();

    IrFunction out;
    out.name = fn_.name;
    out.paramTypes = fn_.paramTypes;
    out.paramNames = fn_.paramNames;
    out.returnType = fn_.returnType;
    out.netlist = std::move(nl_);
    return out;
  }

private:
  const IrFunction &fn_;
  const FsmdDesign &d_;
  Netlist nl_;
  NetBuilder b_;

  int stateW_ = 1;
  NetId startNet_ = kNoNet;
  NetId stateQ_ = kNoNet;
  int stateRegIdx_ = -1;
  std::vector<NetId> st_;     // one-hot state decode
  std::vector<NetId> stCond_; // decode gated by start in the entry state
  std::vector<NetId> argNet_; // latched-or-live argument value
  std::vector<NetId> regQ_;   // fsmd register outputs
  std::vector<int> regIdx_;   // fsmd register -> nl_.regs index
  std::vector<NetId> combOut_; // per DpOp: comb output or mul tap

  void makePorts() {
    NetId clk = nl_.addNet("clk", 1);
    nl_.ports.push_back({"clk", true, 1, clk});
    NetId rst = nl_.addNet("rst", 1);
    nl_.ports.push_back({"rst", true, 1, rst});
    startNet_ = nl_.addNet("start", 1);
    nl_.ports.push_back({"start", true, 1, startNet_});
    for (size_t i = 0; i < fn_.paramTypes.size(); ++i) {
      std::string name = "arg_" + (i < fn_.paramNames.size()
                                       ? fn_.paramNames[i]
                                       : "a" + std::to_string(i));
      int w = fn_.paramTypes[i].width();
      NetId net = nl_.addNet(name, w);
      nl_.ports.push_back({name, true, w, net});
    }
  }

  NetId argPort(int i) const {
    return nl_.ports[(size_t)(3 + i)].net; // after clk, rst, start
  }

  void makeStateDecode() {
    int ns = (int)d_.states.size();
    stateW_ = clog2(ns);
    stateQ_ = b_.regLater("state", stateW_, &stateRegIdx_,
                          (int64_t)d_.entryState);
    for (int s = 0; s < ns; ++s) {
      NetId c = b_.constant(stateW_, s, "stc");
      st_.push_back(b_.binop(CombKind::Eq, stateQ_, c, 1,
                             "st_" + d_.states[(size_t)s].name));
    }
    for (int s = 0; s < ns; ++s)
      stCond_.push_back(s == d_.entryState
                            ? b_.andOp(st_[(size_t)s], startNet_, "go")
                            : st_[(size_t)s]);
  }

  void makeArgLatches() {
    for (size_t i = 0; i < fn_.paramTypes.size(); ++i) {
      int w = fn_.paramTypes[i].width();
      NetId q = b_.reg("argl" + std::to_string(i), w, argPort((int)i),
                       stCond_[(size_t)d_.entryState]);
      argNet_.push_back(
          b_.mux(st_[(size_t)d_.entryState], argPort((int)i), q, "argv"));
    }
  }

  void makeRegQs() {
    for (auto &r : d_.regs) {
      int idx = -1;
      regQ_.push_back(b_.regLater(r.name, r.type.width(), &idx));
      regIdx_.push_back(idx);
    }
  }

  void makeMemories() {
    for (auto &m : d_.mems) {
      NlMemory mem;
      mem.name = m.name;
      mem.depth = roundPow2(m.depth);
      mem.width = m.elemType.width();
      mem.rdata = b_.fresh(m.name + "_rdata", mem.width);
      nl_.mems.push_back(mem);
    }
  }

  NetId srcNet(const FsmdDesign::Src &s) {
    switch (s.kind) {
    case FsmdDesign::SrcKind::Reg:
      return regQ_.at((size_t)s.index);
    case FsmdDesign::SrcKind::Arg:
      return argNet_.at((size_t)s.index);
    case FsmdDesign::SrcKind::Const:
      return b_.constant(s.type.width(), s.constVal);
    case FsmdDesign::SrcKind::Op:
      return combOut_.at((size_t)s.index);
    case FsmdDesign::SrcKind::MemData:
      return nl_.mems.at((size_t)s.index).rdata;
    }
    throw std::logic_error("bad src");
  }

  void makeMulUnits() {
    combOut_.assign(d_.ops.size(), kNoNet);
    // Group mul ops by unit instance; all units compute in 32 bits so that
    // mixed operand widths can share one multiplier (low product bits are
    // width-independent).
    std::map<int, std::vector<int>> byUnit;
    for (size_t i = 0; i < d_.ops.size(); ++i)
      if (d_.ops[i].kind == "mul")
        byUnit[d_.ops[i].unit].push_back((int)i);

    for (auto &[unit, opIdx] : byUnit) {
      std::vector<int> order = opIdx;
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return d_.ops[(size_t)a].startState < d_.ops[(size_t)b].startState;
      });
      NetId aMux = kNoNet, bMux = kNoNet;
      for (int i : order) {
        const auto &op = d_.ops[(size_t)i];
        NetId a = b_.resize(srcNet(op.operands[0]), 32, false, "mula");
        NetId bn = b_.resize(srcNet(op.operands[1]), 32, false, "mulb");
        if (aMux == kNoNet) {
          aMux = a;
          bMux = bn;
        } else {
          aMux = b_.mux(st_[(size_t)op.startState], a, aMux, "mulamux");
          bMux = b_.mux(st_[(size_t)op.startState], bn, bMux, "mulbmux");
        }
      }
      NetId prod = b_.binop(CombKind::Mul, aMux, bMux, 32,
                            "mul" + std::to_string(unit) + "_p");
      NetId d1 = b_.reg("mul" + std::to_string(unit) + "_d1", 32, prod,
                        kNoNet);
      NetId d2 = b_.reg("mul" + std::to_string(unit) + "_d2", 32, d1,
                        kNoNet);
      for (int i : order) {
        int w = d_.ops[(size_t)i].resultType.width();
        combOut_[(size_t)i] =
            w == 32 ? d2 : b_.unop(CombKind::Trunc, d2, w, "multap");
      }
    }
  }

  void makeCombOps() {
    for (size_t i = 0; i < d_.ops.size(); ++i) {
      const auto &op = d_.ops[i];
      const std::string &k = op.kind;
      if (k == "mul" || k == "mem.read" || k == "mem.write")
        continue;
      int w = op.resultType.width();
      auto in = [&](int j) { return srcNet(op.operands[(size_t)j]); };

      if (k == "add" || k == "sub" || k == "and" || k == "or" || k == "xor") {
        CombKind ck = k == "add"   ? CombKind::Add
                      : k == "sub" ? CombKind::Sub
                      : k == "and" ? CombKind::And
                      : k == "or"  ? CombKind::Or
                                   : CombKind::Xor;
        combOut_[i] = b_.binop(ck, in(0), in(1), w, k);
      } else if (k == "neg" || k == "not") {
        combOut_[i] = b_.unop(k == "neg" ? CombKind::Neg : CombKind::Not,
                              in(0), w, k);
      } else if (k == "shl" || k == "shr") {
        NetId amt = b_.binop(CombKind::And, in(1),
                             b_.constant(w, w - 1, "shm"), w, "sha");
        CombKind ck = k == "shl" ? CombKind::Shl
                      : op.operands[0].type.isSigned() ? CombKind::ShrA
                                                       : CombKind::ShrL;
        combOut_[i] = b_.binop(ck, in(0), amt, w, k);
      } else if (k.rfind("cmp.", 0) == 0) {
        bool sg = op.operands[0].type.isSigned();
        CombKind ck;
        std::string c = k.substr(4);
        if (c == "eq")
          ck = CombKind::Eq;
        else if (c == "ne")
          ck = CombKind::Ne;
        else if (c == "lt")
          ck = sg ? CombKind::LtS : CombKind::LtU;
        else if (c == "le")
          ck = sg ? CombKind::LeS : CombKind::LeU;
        else if (c == "gt")
          ck = sg ? CombKind::GtS : CombKind::GtU;
        else
          ck = sg ? CombKind::GeS : CombKind::GeU;
        combOut_[i] = b_.binop(ck, in(0), in(1), 1, k);
      } else if (k == "select") {
        combOut_[i] = b_.mux(in(0), in(1), in(2), "sel");
      } else if (k == "cast") {
        combOut_[i] = castNet(in(0), op.operands[0].type, w);
      } else {
        throw std::logic_error("unknown datapath kind '" + k + "'");
      }
    }
  }

  NetId castNet(NetId src, HwType from, int toW) {
    int fromW = from.width();
    if (toW > fromW)
      return b_.unop(from.isSigned() ? CombKind::SExt : CombKind::ZExt, src,
                     toW, "cast");
    return b_.unop(CombKind::Trunc, src, toW, "cast"); // also same-width
  }

  void wireMemories() {
    for (size_t m = 0; m < nl_.mems.size(); ++m) {
      NlMemory &mem = nl_.mems[m];
      int addrW = clog2(mem.depth);
      NetId raddr = kNoNet, ren = kNoNet;
      NetId waddr = kNoNet, wdata = kNoNet, wen = kNoNet;
      for (size_t i = 0; i < d_.ops.size(); ++i) {
        const auto &op = d_.ops[i];
        if (op.mem != (int)m)
          continue;
        NetId sel = stCond_[(size_t)op.startState];
        if (op.kind == "mem.read") {
          NetId a = b_.resize(srcNet(op.operands[0]), addrW, false, "raddr");
          raddr = raddr == kNoNet ? a : b_.mux(sel, a, raddr, "raddrmux");
          ren = ren == kNoNet ? sel : b_.orOp(ren, sel, "ren");
        } else if (op.kind == "mem.write") {
          NetId a = b_.resize(srcNet(op.operands[0]), addrW, false, "waddr");
          NetId v = srcNet(op.operands[1]);
          waddr = waddr == kNoNet ? a : b_.mux(sel, a, waddr, "waddrmux");
          wdata = wdata == kNoNet ? v : b_.mux(sel, v, wdata, "wdatamux");
          wen = wen == kNoNet ? sel : b_.orOp(wen, sel, "wen");
        }
      }
      mem.raddr = raddr != kNoNet ? raddr : b_.constant(addrW, 0, "raddr0");
      mem.ren = ren != kNoNet ? ren : b_.constant(1, 0, "ren0");
      mem.waddr = waddr != kNoNet ? waddr : b_.constant(addrW, 0, "waddr0");
      mem.wdata = wdata != kNoNet ? wdata
                                  : b_.constant(mem.width, 0, "wdata0");
      mem.wen = wen != kNoNet ? wen : b_.constant(1, 0, "wen0");
    }
  }

  void wireRegisters() {
    for (size_t r = 0; r < d_.regs.size(); ++r) {
      std::vector<const FsmdDesign::RegWrite *> writes;
      for (auto &w : d_.regWrites)
        if (w.reg == (int)r)
          writes.push_back(&w);
      std::sort(writes.begin(), writes.end(),
                [](auto *a, auto *b) { return a->state < b->state; });
      NetId next = regQ_[r];
      for (auto *w : writes)
        next = b_.mux(stCond_[(size_t)w->state], srcNet(w->src), next,
                      d_.regs[r].name + "_nx");
      nl_.regs[(size_t)regIdx_[r]].next = next;
    }
  }

  void wireNextState() {
    NetId next = stateQ_;
    for (auto &t : d_.transitions) {
      NetId cond = stCond_[(size_t)t.from];
      if (t.guard) {
        NetId g = srcNet(*t.guard);
        if (t.negated)
          g = b_.notOp(g, "gn");
        cond = b_.andOp(cond, g, "tc");
      }
      next = b_.mux(cond, b_.constant(stateW_, t.to, "ts"), next, "nsx");
    }
    nl_.regs[(size_t)stateRegIdx_].next = next;
  }

  void wireOutputs() {
    nl_.ports.push_back({"done", false, 1, st_[(size_t)d_.doneState]});
    int w = fn_.returnType.width();
    nl_.ports.push_back(
        {"result", false, w, regQ_.at((size_t)d_.resultReg)});
  }
};

} // namespace

IrModule lowerFsmdToNetlist(const IrModule &module) {
  IrModule out;
  out.level = Level::Netlist;
  for (const auto &f : module.functions) {
    if (!f.fsmd)
      throw std::logic_error("lowerFsmdToNetlist: function lacks fsmd body");
    out.functions.push_back(FsmdLowering(f).lower());
  }
  return out;
}

} // namespace hjc
