//===- EmitHandshake.cpp - Handshake graph to elastic netlist -------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Every handshake channel becomes a (data, valid, ready) net triple; every
// component becomes a small template over those nets. Valid propagates
// forward, ready backward; opaque buffers register both directions, which is
// what makes buffered cycles implementable.
//
//===----------------------------------------------------------------------===//

#include "hjc/Emit.h"

#include "NetBuilder.h"
#include "hjc/Dialect.h"

#include <cassert>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

using namespace hjc;
using namespace hjc::ir;

namespace {

int clog2(int n) {
  int w = 0;
  while ((1 << w) < n)
    ++w;
  return w < 1 ? 1 : w;
}

int roundPow2(int n) {
  int p = 1;
  while (p < n)
    p *= 2;
  return p;
}

/// One elastic channel: data (absent for tokens), valid, ready.
struct Chan {
  NetId d = kNoNet;
  NetId v = kNoNet;
  NetId r = kNoNet;
};

class HsLowering {
public:
  explicit HsLowering(const IrFunction &src) : src_(src), b_(nl_) {}

  IrFunction lower() {
    makePorts();
    makeChannels();
    collectArrays();
    for (auto &op : src_.blocks[0].ops)
      lowerOp(op);
    wireMemoryPorts();

    IrFunction out;
    out.name = src_.name;
    out.paramTypes = src_.paramTypes;
    out.paramNames = src_.paramNames;
    out.returnType = src_.returnType;
    out.netlist = std::move(nl_);
    return out;
  }

private:
  const IrFunction &src_;
  Netlist nl_;
  NetBuilder b_;

  std::map<ValueId, Chan> chan_;
  std::vector<NetId> argData_, argValid_, argReady_;
  NetId resData_ = kNoNet, resValid_ = kNoNet, resReady_ = kNoNet;

  struct ArrayInfo {
    int mem = -1; // index into nl_.mems
    int addrW = 1;
    // Per-access request contributions: (request, addr[, wdata]).
    std::vector<std::pair<NetId, NetId>> reads;
    std::vector<std::tuple<NetId, NetId, NetId>> writes;
  };
  std::map<std::string, ArrayInfo> arrays_;

  //===--------------------------------------------------------------------===//
  // Net plumbing helpers
  //===--------------------------------------------------------------------===//

  void copy(NetId src, NetId dst) { nl_.addNode(CombKind::ZExt, {src}, dst); }
  void driveConst(NetId dst, int64_t v) {
    nl_.addNode(CombKind::Const, {}, dst, v);
  }
  void driveAnd(std::vector<NetId> xs, NetId dst) {
    if (xs.empty()) {
      driveConst(dst, 1);
      return;
    }
    if (xs.size() == 1) {
      copy(xs[0], dst);
      return;
    }
    NetId acc = xs[0];
    for (size_t i = 1; i + 1 < xs.size(); ++i)
      acc = b_.andOp(acc, xs[i]);
    nl_.addNode(CombKind::And, {acc, xs.back()}, dst);
  }
  NetId allValid(const Operation &op) {
    NetId acc = chan_.at(op.operands[0]).v;
    for (size_t i = 1; i < op.operands.size(); ++i)
      acc = b_.andOp(acc, chan_.at(op.operands[i]).v, "allv");
    return acc;
  }

  Chan &in(const Operation &op, size_t i) { return chan_.at(op.operands[i]); }
  Chan &res(const Operation &op, size_t i = 0) {
    return chan_.at(op.results[i]);
  }

  //===--------------------------------------------------------------------===//
  // Skeleton
  //===--------------------------------------------------------------------===//

  void makePorts() {
    NetId clk = nl_.addNet("clk", 1);
    nl_.ports.push_back({"clk", true, 1, clk});
    NetId rst = nl_.addNet("rst", 1);
    nl_.ports.push_back({"rst", true, 1, rst});
    for (size_t i = 0; i < src_.paramTypes.size(); ++i) {
      std::string base = src_.paramNames.size() == src_.paramTypes.size()
                             ? src_.paramNames[i]
                             : "arg" + std::to_string(i);
      int w = src_.paramTypes[i].width();
      NetId d = nl_.addNet(base + "_data", w);
      NetId v = nl_.addNet(base + "_valid", 1);
      NetId r = nl_.addNet(base + "_ready", 1);
      nl_.ports.push_back({base + "_data", true, w, d});
      nl_.ports.push_back({base + "_valid", true, 1, v});
      nl_.ports.push_back({base + "_ready", false, 1, r});
      argData_.push_back(d);
      argValid_.push_back(v);
      argReady_.push_back(r);
    }
    int rw = src_.returnType.width();
    resData_ = nl_.addNet("result_data", rw);
    resValid_ = nl_.addNet("result_valid", 1);
    resReady_ = nl_.addNet("result_ready", 1);
    nl_.ports.push_back({"result_data", false, rw, resData_});
    nl_.ports.push_back({"result_valid", false, 1, resValid_});
    nl_.ports.push_back({"result_ready", true, 1, resReady_});
  }

  void makeChannels() {
    for (auto &op : src_.blocks[0].ops)
      for (ValueId rv : op.results) {
        Chan c;
        HwType t = src_.typeOf(rv);
        std::string base = "ch" + std::to_string(rv);
        if (!t.isToken())
          c.d = nl_.addNet(base + "_d", t.width());
        c.v = nl_.addNet(base + "_v", 1);
        c.r = nl_.addNet(base + "_r", 1);
        chan_[rv] = c;
      }
  }

  void collectArrays() {
    for (auto &op : src_.blocks[0].ops) {
      bool rd = op.opcode == "handshake.mem.read";
      bool wr = op.opcode == "handshake.mem.write";
      if (!rd && !wr)
        continue;
      std::string name = op.strAttr("array");
      if (arrays_.count(name))
        continue;
      int depth = roundPow2((int)op.intAttr("depth", 1));
      HwType elt = rd ? src_.typeOf(op.results[0]) : src_.typeOf(op.operands[1]);
      ArrayInfo info;
      info.addrW = clog2(depth);
      NlMemory m;
      m.name = name;
      m.depth = depth;
      m.width = elt.width();
      m.rdata = nl_.addNet(name + "_rdata", elt.width());
      info.mem = (int)nl_.mems.size();
      nl_.mems.push_back(m);
      arrays_[name] = info;
    }
  }

  //===--------------------------------------------------------------------===//
  // Component templates
  //===--------------------------------------------------------------------===//

  void lowerEntry(const Operation &op) {
    size_t n = op.results.size() - 1; // last result is the activation token
    std::vector<NetId> got;
    for (size_t i = 0; i < n; ++i) {
      Chan &o = res(op, i);
      int gi, ci;
      NetId gotQ = b_.regLater("in" + std::to_string(i) + "_got", 1, &gi);
      NetId capQ =
          b_.regLater("in" + std::to_string(i) + "_cap", nl_.width(o.d), &ci);
      NetId inFire =
          b_.andOp(argValid_[i], b_.notOp(gotQ, "ngot"), "incap");
      nl_.regs[(size_t)gi].next = b_.orOp(gotQ, inFire, "gotn");
      nl_.regs[(size_t)ci].next = argData_[i];
      nl_.regs[(size_t)ci].enable = inFire;
      nl_.addNode(CombKind::Not, {gotQ}, argReady_[i]);
      // Output channel: valid once captured, until the consumer takes it.
      int si;
      NetId sentQ = b_.regLater("in" + std::to_string(i) + "_sent", 1, &si);
      nl_.addNode(CombKind::And, {gotQ, b_.notOp(sentQ, "nsent")}, o.v);
      nl_.regs[(size_t)si].next = b_.orOp(sentQ, b_.andOp(o.v, o.r, "ofire"));
      copy(capQ, o.d);
      got.push_back(gotQ);
    }
    // Activation token: one shot once every argument has arrived.
    Chan &tok = res(op, n);
    int ti;
    NetId tokSentQ = b_.regLater("tok_sent", 1, &ti);
    NetId allGot = got.empty() ? b_.constant(1, 1, "allgot") : got[0];
    for (size_t i = 1; i < got.size(); ++i)
      allGot = b_.andOp(allGot, got[i], "allgot");
    nl_.addNode(CombKind::And, {allGot, b_.notOp(tokSentQ, "ntsent")}, tok.v);
    nl_.regs[(size_t)ti].next =
        b_.orOp(tokSentQ, b_.andOp(tok.v, tok.r, "tfire"));
  }

  void lowerExit(const Operation &op) {
    Chan &v = in(op, 0);
    Chan &t = in(op, 1);
    copy(v.d, resData_);
    nl_.addNode(CombKind::And, {v.v, t.v}, resValid_);
    NetId fire = b_.andOp(resValid_, resReady_, "resfire");
    copy(fire, v.r);
    copy(fire, t.r);
  }

  void lowerFork(const Operation &op) {
    Chan &c = in(op, 0);
    std::vector<NetId> doneOrFire;
    std::vector<std::pair<int, NetId>> dones;
    for (size_t k = 0; k < op.results.size(); ++k) {
      Chan &o = res(op, k);
      int di;
      NetId doneQ = b_.regLater("fk_done", 1, &di);
      if (o.d != kNoNet)
        copy(c.d, o.d);
      nl_.addNode(CombKind::And, {c.v, b_.notOp(doneQ, "nd")}, o.v);
      NetId fire = b_.andOp(o.v, o.r, "fkfire");
      doneOrFire.push_back(b_.orOp(doneQ, fire, "dof"));
      dones.push_back({di, b_.orOp(doneQ, fire, "dn")});
    }
    NetId all = doneOrFire[0];
    for (size_t k = 1; k < doneOrFire.size(); ++k)
      all = b_.andOp(all, doneOrFire[k], "alldone");
    nl_.addNode(CombKind::And, {c.v, all}, c.r); // input completes
    NetId inFire = c.r;
    NetId zero = b_.constant(1, 0, "z");
    for (auto &[di, dn] : dones)
      nl_.regs[(size_t)di].next = b_.mux(inFire, zero, dn, "dnext");
  }

  void lowerJoin(const Operation &op) {
    Chan &o = res(op);
    copy(allValid(op), o.v);
    NetId fire = b_.andOp(o.v, o.r, "jfire");
    for (size_t i = 0; i < op.operands.size(); ++i)
      copy(fire, in(op, i).r);
  }

  void lowerMerge(const Operation &op) {
    Chan &a = in(op, 0);
    Chan &c = in(op, 1);
    Chan &tok = res(op, 0);
    Chan &idx = res(op, 1);
    // The two outputs may retire in different cycles (the index feeds muxes
    // whose data can lag by an operator latency), so the winning input is
    // latched on arrival and held stable until every output has retired.
    // A combinational index would drift when the other input turns valid
    // under a still-pending consumer.
    int bi, ci, dt, di;
    NetId busyQ = b_.regLater("mg_busy", 1, &bi);
    NetId choiceQ = b_.regLater("mg_choice", 1, &ci);
    NetId dTokQ = b_.regLater("mg_dtok", 1, &dt);
    NetId dIdxQ = b_.regLater("mg_didx", 1, &di);
    NetId anyV = b_.orOp(a.v, c.v, "anyv");
    NetId pick = b_.notOp(a.v, "pick"); // input 0 wins ties
    NetId active = b_.mux(busyQ, choiceQ, pick, "act");
    NetId have = b_.orOp(busyQ, anyV, "have");
    nl_.addNode(CombKind::And, {have, b_.notOp(dTokQ, "ndt")}, tok.v);
    nl_.addNode(CombKind::And, {have, b_.notOp(dIdxQ, "ndi")}, idx.v);
    copy(active, idx.d);
    if (tok.d != kNoNet)
      nl_.addNode(CombKind::Mux, {active, c.d, a.d}, tok.d);
    NetId fireT = b_.andOp(tok.v, tok.r, "ftok");
    NetId fireI = b_.andOp(idx.v, idx.r, "fidx");
    NetId complete = b_.andOp(
        have,
        b_.andOp(b_.orOp(dTokQ, fireT, "dtf"), b_.orOp(dIdxQ, fireI, "dif"),
                 "alld"),
        "mgdone");
    nl_.addNode(CombKind::And, {complete, b_.notOp(active, "nact")}, a.r);
    nl_.addNode(CombKind::And, {complete, active}, c.r);
    NetId zero = b_.constant(1, 0, "z");
    nl_.regs[(size_t)bi].next =
        b_.mux(complete, zero, b_.orOp(busyQ, anyV, "bsy"), "bnext");
    nl_.regs[(size_t)ci].next = b_.mux(busyQ, choiceQ, pick, "cnext");
    nl_.regs[(size_t)dt].next =
        b_.mux(complete, zero, b_.orOp(dTokQ, fireT), "dtn");
    nl_.regs[(size_t)di].next =
        b_.mux(complete, zero, b_.orOp(dIdxQ, fireI), "din");
  }

  void lowerMux(const Operation &op) {
    Chan &sel = in(op, 0);
    Chan &a = in(op, 1);
    Chan &c = in(op, 2);
    Chan &o = res(op);
    NetId sv = b_.mux(sel.d, c.v, a.v, "selv");
    nl_.addNode(CombKind::And, {sel.v, sv}, o.v);
    if (o.d != kNoNet)
      nl_.addNode(CombKind::Mux, {sel.d, c.d, a.d}, o.d);
    NetId fire = b_.andOp(o.v, o.r, "mxfire");
    copy(fire, sel.r);
    nl_.addNode(CombKind::And, {fire, b_.notOp(sel.d, "nsel")}, a.r);
    nl_.addNode(CombKind::And, {fire, sel.d}, c.r);
  }

  void lowerCbranch(const Operation &op) {
    Chan &cond = in(op, 0);
    Chan &d = in(op, 1);
    Chan &t = res(op, 0);
    Chan &f = res(op, 1);
    NetId bothV = b_.andOp(cond.v, d.v, "cbv");
    nl_.addNode(CombKind::And, {bothV, cond.d}, t.v);
    nl_.addNode(CombKind::And, {bothV, b_.notOp(cond.d, "nc")}, f.v);
    if (t.d != kNoNet) {
      copy(d.d, t.d);
      copy(d.d, f.d);
    }
    NetId fire = b_.orOp(b_.andOp(t.v, t.r, "tf"), b_.andOp(f.v, f.r, "ff"),
                         "cbfire");
    copy(fire, cond.r);
    copy(fire, d.r);
  }

  void lowerBuffer(const Operation &op) {
    Chan &i = in(op, 0);
    Chan &o = res(op);
    bool opaque = op.intAttr("opaque") != 0;
    int fi, di = -1;
    NetId fullQ = b_.regLater("buf_full", 1, &fi);
    NetId dataQ = kNoNet;
    if (i.d != kNoNet)
      dataQ = b_.regLater("buf_data", nl_.width(i.d), &di);
    nl_.addNode(CombKind::Not, {fullQ}, i.r);
    NetId inFire = b_.andOp(i.v, i.r, "bif");
    if (opaque) {
      copy(fullQ, o.v);
      if (i.d != kNoNet)
        copy(dataQ, o.d);
    } else {
      nl_.addNode(CombKind::Or, {i.v, fullQ}, o.v);
      if (i.d != kNoNet)
        nl_.addNode(CombKind::Mux, {fullQ, dataQ, i.d}, o.d);
    }
    NetId outFire = b_.andOp(o.v, o.r, "bof");
    NetId one = b_.constant(1, 1, "one");
    NetId zero = b_.constant(1, 0, "z");
    NetId keep = opaque ? b_.mux(outFire, zero, fullQ, "bkeep")
                        : b_.andOp(inFire, b_.notOp(outFire, "nof"), "bkeep");
    NetId next = opaque ? b_.mux(inFire, one, keep, "bnext")
                        : b_.mux(fullQ, b_.notOp(outFire, "hold"), keep,
                                 "bnext");
    nl_.regs[(size_t)fi].next = next;
    if (di >= 0) {
      nl_.regs[(size_t)di].next = i.d;
      nl_.regs[(size_t)di].enable = inFire;
    }
  }

  void lowerConstant(const Operation &op) {
    Chan &t = in(op, 0);
    Chan &o = res(op);
    copy(t.v, o.v);
    driveConst(o.d, op.intAttr("value"));
    copy(o.r, t.r);
  }

  void lowerSink(const Operation &op) { driveConst(in(op, 0).r, 1); }

  void lowerSource(const Operation &op) {
    Chan &o = res(op);
    driveConst(o.v, 1);
    if (o.d != kNoNet)
      driveConst(o.d, 0);
  }

  void lowerMul(const Operation &op) {
    Chan &x = in(op, 0);
    Chan &y = in(op, 1);
    Chan &o = res(op);
    int w = nl_.width(o.d);
    int v1i, v2i, v3i, p1i, p2i, p3i;
    NetId v1 = b_.regLater("mul_v1", 1, &v1i);
    NetId v2 = b_.regLater("mul_v2", 1, &v2i);
    NetId v3 = b_.regLater("mul_v3", 1, &v3i);
    NetId p1 = b_.regLater("mul_p1", w, &p1i);
    NetId p2 = b_.regLater("mul_p2", w, &p2i);
    NetId p3 = b_.regLater("mul_p3", w, &p3i);
    NetId adv = b_.orOp(b_.notOp(v3, "nv3"), o.r, "adv");
    NetId inFire = b_.andOp(adv, b_.andOp(x.v, y.v, "mv"), "mif");
    copy(inFire, x.r);
    copy(inFire, y.r);
    NetId prod = b_.binop(CombKind::Mul, x.d, y.d, w, "prod");
    nl_.regs[(size_t)p1i] = {nl_.regs[(size_t)p1i].name, w, 0, prod, adv, p1};
    nl_.regs[(size_t)p2i] = {nl_.regs[(size_t)p2i].name, w, 0, p1, adv, p2};
    nl_.regs[(size_t)p3i] = {nl_.regs[(size_t)p3i].name, w, 0, p2, adv, p3};
    nl_.regs[(size_t)v1i].next = inFire;
    nl_.regs[(size_t)v1i].enable = adv;
    nl_.regs[(size_t)v2i].next = v1;
    nl_.regs[(size_t)v2i].enable = adv;
    nl_.regs[(size_t)v3i].next = v2;
    nl_.regs[(size_t)v3i].enable = adv;
    copy(v3, o.v);
    copy(p3, o.d);
  }

  void lowerMemRead(const Operation &op) {
    Chan &addr = in(op, 0);
    Chan &tok = in(op, 1);
    Chan &data = res(op, 0);
    Chan &tout = res(op, 1);
    ArrayInfo &arr = arrays_.at(op.strAttr("array"));
    int w = nl_.width(data.d);
    int sti, dri, ddi, dti;
    NetId st = b_.regLater("rd_st", 2, &sti); // 0 idle, 1 wait, 2 have
    NetId dataQ = b_.regLater("rd_data", w, &dri);
    NetId dD = b_.regLater("rd_dd", 1, &ddi);
    NetId dT = b_.regLater("rd_dt", 1, &dti);
    NetId stIdle = b_.binop(CombKind::Eq, st, b_.constant(2, 0, "s0"), 1, "idle");
    NetId stWait = b_.binop(CombKind::Eq, st, b_.constant(2, 1, "s1"), 1, "wait");
    NetId stHave = b_.binop(CombKind::Eq, st, b_.constant(2, 2, "s2"), 1, "have");
    NetId inFire =
        b_.andOp(stIdle, b_.andOp(addr.v, tok.v, "rdv"), "rdfire");
    copy(inFire, addr.r);
    copy(inFire, tok.r);
    arr.reads.push_back({inFire, b_.resize(addr.d, arr.addrW, false, "ra")});
    nl_.regs[(size_t)dri].next = nl_.mems[(size_t)arr.mem].rdata;
    nl_.regs[(size_t)dri].enable = stWait;
    nl_.addNode(CombKind::And, {stHave, b_.notOp(dD, "ndd")}, data.v);
    copy(dataQ, data.d);
    nl_.addNode(CombKind::And, {stHave, b_.notOp(dT, "ndt")}, tout.v);
    NetId fireD = b_.andOp(data.v, data.r, "fd");
    NetId fireT = b_.andOp(tout.v, tout.r, "ft");
    NetId bothDone =
        b_.andOp(b_.orOp(dD, fireD), b_.orOp(dT, fireT), "rddone");
    NetId retire = b_.andOp(stHave, bothDone, "retire");
    NetId zero = b_.constant(1, 0, "z");
    nl_.regs[(size_t)ddi].next =
        b_.mux(retire, zero, b_.orOp(dD, fireD), "ddn");
    nl_.regs[(size_t)dti].next =
        b_.mux(retire, zero, b_.orOp(dT, fireT), "dtn");
    // idle --inFire--> wait --> have --retire--> idle
    NetId n0 = b_.mux(inFire, b_.constant(2, 1, "c1"), b_.constant(2, 0, "c0"),
                      "sn0");
    NetId n1 = b_.mux(stWait, b_.constant(2, 2, "c2"), n0, "sn1");
    NetId hold = b_.mux(retire, b_.constant(2, 0, "c0"), st, "snh");
    nl_.regs[(size_t)sti].next = b_.mux(stHave, hold, n1, "stn");
  }

  void lowerMemWrite(const Operation &op) {
    Chan &addr = in(op, 0);
    Chan &data = in(op, 1);
    Chan &tok = in(op, 2);
    Chan &tout = res(op, 0);
    ArrayInfo &arr = arrays_.at(op.strAttr("array"));
    int sti;
    NetId st = b_.regLater("wr_st", 1, &sti); // 0 idle, 1 have
    NetId stIdle = b_.notOp(st, "widle");
    NetId inFire = b_.andOp(
        stIdle, b_.andOp(addr.v, b_.andOp(data.v, tok.v, "wv"), "wv2"),
        "wrfire");
    copy(inFire, addr.r);
    copy(inFire, data.r);
    copy(inFire, tok.r);
    arr.writes.push_back(
        {inFire, b_.resize(addr.d, arr.addrW, false, "wa"), data.d});
    copy(st, tout.v);
    NetId tokFire = b_.andOp(tout.v, tout.r, "wtf");
    NetId one = b_.constant(1, 1, "one");
    nl_.regs[(size_t)sti].next =
        b_.mux(inFire, one, b_.mux(tokFire, b_.constant(1, 0, "z"), st, "wk"),
               "wsn");
  }

  void lowerArith(const Operation &op) {
    Chan &o = res(op);
    copy(allValid(op), o.v);
    NetId fire = b_.andOp(o.v, o.r, "afire");
    for (size_t i = 0; i < op.operands.size(); ++i)
      copy(fire, in(op, i).r);

    std::string k = op.opcode.substr(10); // strip "handshake."
    int w = nl_.width(o.d);
    HwType t0 = src_.typeOf(op.operands[0]);
    auto d = [&](size_t i) { return in(op, i).d; };
    if (k == "add" || k == "sub" || k == "and" || k == "or" || k == "xor") {
      CombKind ck = k == "add"   ? CombKind::Add
                    : k == "sub" ? CombKind::Sub
                    : k == "and" ? CombKind::And
                    : k == "or"  ? CombKind::Or
                                 : CombKind::Xor;
      nl_.addNode(ck, {d(0), d(1)}, o.d);
    } else if (k == "shl" || k == "shr") {
      NetId amt = b_.binop(CombKind::And, d(1),
                           b_.constant(w, w - 1, "shm"), w, "amt");
      CombKind ck = k == "shl" ? CombKind::Shl
                    : t0.isSigned() ? CombKind::ShrA
                                    : CombKind::ShrL;
      nl_.addNode(ck, {d(0), amt}, o.d);
    } else if (k == "neg") {
      nl_.addNode(CombKind::Neg, {d(0)}, o.d);
    } else if (k == "not") {
      nl_.addNode(CombKind::Not, {d(0)}, o.d);
    } else if (k.rfind("cmp.", 0) == 0) {
      bool s = t0.isSigned();
      std::string c = k.substr(4);
      CombKind ck = c == "eq"   ? CombKind::Eq
                    : c == "ne" ? CombKind::Ne
                    : c == "lt" ? (s ? CombKind::LtS : CombKind::LtU)
                    : c == "le" ? (s ? CombKind::LeS : CombKind::LeU)
                    : c == "gt" ? (s ? CombKind::GtS : CombKind::GtU)
                                : (s ? CombKind::GeS : CombKind::GeU);
      nl_.addNode(ck, {d(0), d(1)}, o.d);
    } else if (k == "select") {
      nl_.addNode(CombKind::Mux, {d(0), d(1), d(2)}, o.d);
    } else if (k == "cast") {
      int wi = nl_.width(d(0));
      CombKind ck = wi >= w ? CombKind::Trunc
                            : (t0.isSigned() ? CombKind::SExt : CombKind::ZExt);
      nl_.addNode(ck, {d(0)}, o.d);
    } else {
      throw std::logic_error("unhandled handshake opcode: " + op.opcode);
    }
  }

  void lowerOp(const Operation &op) {
    const std::string &oc = op.opcode;
    if (oc == "handshake.entry")
      lowerEntry(op);
    else if (oc == "handshake.exit")
      lowerExit(op);
    else if (oc == "handshake.fork")
      lowerFork(op);
    else if (oc == "handshake.join")
      lowerJoin(op);
    else if (oc == "handshake.merge")
      lowerMerge(op);
    else if (oc == "handshake.mux")
      lowerMux(op);
    else if (oc == "handshake.cbranch")
      lowerCbranch(op);
    else if (oc == "handshake.buffer")
      lowerBuffer(op);
    else if (oc == "handshake.constant")
      lowerConstant(op);
    else if (oc == "handshake.sink")
      lowerSink(op);
    else if (oc == "handshake.source")
      lowerSource(op);
    else if (oc == "handshake.mul")
      lowerMul(op);
    else if (oc == "handshake.mem.read")
      lowerMemRead(op);
    else if (oc == "handshake.mem.write")
      lowerMemWrite(op);
    else
      lowerArith(op);
  }

  void wireMemoryPorts() {
    for (auto &[name, arr] : arrays_) {
      NlMemory &m = nl_.mems[(size_t)arr.mem];
      NetId ren = b_.constant(1, 0, "ren0");
      NetId raddr = b_.constant(arr.addrW, 0, "ra0");
      for (auto &[req, a] : arr.reads) {
        ren = b_.orOp(ren, req, "ren");
        raddr = b_.mux(req, a, raddr, "raddr");
      }
      NetId wen = b_.constant(1, 0, "wen0");
      NetId waddr = b_.constant(arr.addrW, 0, "wa0");
      NetId wdata = b_.constant(m.width, 0, "wd0");
      for (auto &[req, a, dta] : arr.writes) {
        wen = b_.orOp(wen, req, "wen");
        waddr = b_.mux(req, a, waddr, "waddr");
        wdata = b_.mux(req, dta, wdata, "wdata");
      }
      m.ren = ren;
      m.raddr = raddr;
      m.wen = wen;
      m.waddr = waddr;
      m.wdata = wdata;
    }
  }
};

} // namespace

namespace hjc {

IrModule lowerHandshakeToNetlist(const IrModule &module) {
  if (module.level != Level::Handshake)
    throw std::logic_error("lowerHandshakeToNetlist: expects handshake level");
  IrModule out;
  out.level = Level::Netlist;
  for (const auto &f : module.functions)
    out.functions.push_back(HsLowering(f).lower());
  return out;
}

} // namespace hjc
