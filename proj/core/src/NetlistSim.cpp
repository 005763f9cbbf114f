//===- NetlistSim.cpp - Cycle-accurate netlist simulator ------------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "hjc/NetlistSim.h"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace hjc {

namespace {

uint64_t maskOf(int w) { return w >= 64 ? ~0ull : ((1ull << w) - 1); }

int64_t signExtend(uint64_t v, int w) {
  if (w < 64 && (v >> (w - 1)) & 1)
    return (int64_t)(v | ~maskOf(w));
  return (int64_t)v;
}

class Engine {
public:
  explicit Engine(const Netlist &nl) : nl_(nl), vals_(nl.nets.size(), 0) {
    for (auto &m : nl_.mems)
      memState_.emplace_back((size_t)m.depth, 0);
    topoSort();
    for (auto &p : nl_.ports)
      portNet_[p.name] = p.net;
  }

  bool combCycle() const { return combCycle_; }

  NetId port(const std::string &name) const {
    auto it = portNet_.find(name);
    if (it == portNet_.end())
      throw std::logic_error("no port named '" + name + "'");
    return it->second;
  }

  void set(NetId n, uint64_t v) {
    vals_[(size_t)n] = v & maskOf(nl_.width(n));
  }
  uint64_t get(NetId n) const { return vals_[(size_t)n]; }

  void evalComb() {
    for (int i : topo_) {
      const CombNode &nd = nl_.nodes[(size_t)i];
      vals_[(size_t)nd.output] = evalNode(nd) & maskOf(nl_.width(nd.output));
    }
  }

  /// Clock edge: registers load their next values (unless in reset) and
  /// memories perform the write and the synchronous read (read-old-value on
  /// a same-address collision).
  void edge(bool rst) {
    std::vector<uint64_t> regNext(nl_.regs.size());
    for (size_t i = 0; i < nl_.regs.size(); ++i) {
      const NlRegister &r = nl_.regs[i];
      if (rst)
        regNext[i] = (uint64_t)r.resetVal & maskOf(r.width);
      else if (r.enable != kNoNet && !(get(r.enable) & 1))
        regNext[i] = get(r.q);
      else
        regNext[i] = get(r.next);
    }
    std::vector<uint64_t> rdNext(nl_.mems.size());
    for (size_t i = 0; i < nl_.mems.size(); ++i) {
      const NlMemory &m = nl_.mems[i];
      uint64_t ra = get(m.raddr) % (uint64_t)m.depth;
      rdNext[i] = (get(m.ren) & 1) ? memState_[i][ra] : get(m.rdata);
      if (!rst && (get(m.wen) & 1))
        memState_[i][get(m.waddr) % (uint64_t)m.depth] =
            get(m.wdata) & maskOf(m.width);
    }
    for (size_t i = 0; i < nl_.regs.size(); ++i)
      vals_[(size_t)nl_.regs[i].q] = regNext[i];
    for (size_t i = 0; i < nl_.mems.size(); ++i)
      vals_[(size_t)nl_.mems[i].rdata] = rst ? 0 : rdNext[i];
  }

  void vcdHeader(std::ostringstream &os) {
    os << "$timescale 1ns $end\n$scope module top $end\n";
    for (size_t i = 0; i < nl_.ports.size(); ++i)
      os << "$var wire " << nl_.ports[i].width << " p" << i << " "
         << nl_.ports[i].name << " $end\n";
    os << "$upscope $end\n$enddefinitions $end\n";
  }

  void vcdCycle(std::ostringstream &os, int64_t t) {
    os << "#" << t << "\n";
    for (size_t i = 0; i < nl_.ports.size(); ++i) {
      os << "b";
      int w = nl_.ports[i].width;
      uint64_t v = get(nl_.ports[i].net);
      for (int bit = w - 1; bit >= 0; --bit)
        os << ((v >> bit) & 1);
      os << " p" << i << "\n";
    }
  }

private:
  const Netlist &nl_;
  std::vector<uint64_t> vals_;
  std::vector<std::vector<uint64_t>> memState_;
  std::vector<int> topo_;
  bool combCycle_ = false;
  std::map<std::string, NetId> portNet_;

  void topoSort() {
    size_t n = nl_.nodes.size();
    std::vector<int> driver(nl_.nets.size(), -1);
    for (size_t i = 0; i < n; ++i)
      driver[(size_t)nl_.nodes[i].output] = (int)i;
    std::vector<int> indeg(n, 0);
    std::vector<std::vector<int>> succ(n);
    for (size_t i = 0; i < n; ++i)
      for (NetId in : nl_.nodes[i].inputs)
        if (driver[(size_t)in] >= 0) {
          succ[(size_t)driver[(size_t)in]].push_back((int)i);
          ++indeg[i];
        }
    std::vector<int> q;
    for (size_t i = 0; i < n; ++i)
      if (indeg[i] == 0)
        q.push_back((int)i);
    for (size_t h = 0; h < q.size(); ++h) {
      topo_.push_back(q[h]);
      for (int s : succ[(size_t)q[h]])
        if (--indeg[(size_t)s] == 0)
          q.push_back(s);
    }
    if (topo_.size() != n)
      combCycle_ = true;
  }

  uint64_t evalNode(const CombNode &nd) const {
    auto in = [&](int i) { return vals_[(size_t)nd.inputs[(size_t)i]]; };
    auto inW = [&](int i) { return nl_.width(nd.inputs[(size_t)i]); };
    auto sIn = [&](int i) { return signExtend(in(i), inW(i)); };
    switch (nd.kind) {
    case CombKind::Const:
      return (uint64_t)nd.constVal;
    case CombKind::Add:
      return in(0) + in(1);
    case CombKind::Sub:
      return in(0) - in(1);
    case CombKind::Mul:
      return in(0) * in(1);
    case CombKind::And:
      return in(0) & in(1);
    case CombKind::Or:
      return in(0) | in(1);
    case CombKind::Xor:
      return in(0) ^ in(1);
    case CombKind::Not:
      return ~in(0);
    case CombKind::Neg:
      return (uint64_t)(-(int64_t)in(0));
    case CombKind::Shl:
      return in(1) >= 64 ? 0 : in(0) << in(1);
    case CombKind::ShrL:
      return in(1) >= 64 ? 0 : in(0) >> in(1);
    case CombKind::ShrA:
      return (uint64_t)(signExtend(in(0), inW(0)) >>
                        (int64_t)std::min<uint64_t>(in(1), 63));
    case CombKind::Eq:
      return in(0) == in(1);
    case CombKind::Ne:
      return in(0) != in(1);
    case CombKind::LtS:
      return sIn(0) < sIn(1);
    case CombKind::LtU:
      return in(0) < in(1);
    case CombKind::LeS:
      return sIn(0) <= sIn(1);
    case CombKind::LeU:
      return in(0) <= in(1);
    case CombKind::GtS:
      return sIn(0) > sIn(1);
    case CombKind::GtU:
      return in(0) > in(1);
    case CombKind::GeS:
      return sIn(0) >= sIn(1);
    case CombKind::GeU:
      return in(0) >= in(1);
    case CombKind::Mux:
      return (in(0) & 1) ? in(1) : in(2);
    case CombKind::ZExt:
    case CombKind::Trunc:
      return in(0); // output mask narrows/keeps
    case CombKind::SExt:
      return (uint64_t)signExtend(in(0), inW(0));
    }
    return 0;
  }
};

int64_t canonical(uint64_t bits, HwType t) { return t.wrap((int64_t)bits); }

} // namespace

SimResult simulateStatic(const Netlist &nl, const std::vector<int64_t> &args,
                         const std::vector<HwType> &argTypes,
                         HwType resultType, int64_t watchdog,
                         std::string *vcdOut) {
  Engine e(nl);
  SimResult r;
  if (e.combCycle()) {
    r.status = "comb-cycle";
    return r;
  }
  std::ostringstream vcd;
  if (vcdOut)
    e.vcdHeader(vcd);

  // Reset cycle.
  e.set(e.port("rst"), 1);
  e.set(e.port("start"), 0);
  e.evalComb();
  e.edge(true);
  e.set(e.port("rst"), 0);

  // Drive and hold arguments and start.
  for (size_t i = 0; i < args.size(); ++i) {
    const NlPort &p = nl.ports[3 + i]; // after clk, rst, start
    e.set(p.net, argTypes[i].bits(args[i]));
  }
  e.set(e.port("start"), 1);

  NetId done = e.port("done");
  NetId result = e.port("result");
  for (int64_t c = 1; c <= watchdog; ++c) {
    e.evalComb();
    if (vcdOut)
      e.vcdCycle(vcd, c);
    if (e.get(done) & 1) {
      r.result = canonical(e.get(result), resultType);
      r.cycles = c;
      if (vcdOut)
        *vcdOut = vcd.str();
      return r;
    }
    e.edge(false);
  }
  r.status = "deadlock";
  r.cycles = watchdog;
  if (vcdOut)
    *vcdOut = vcd.str();
  return r;
}

SimResult simulateDynamic(const Netlist &nl, const std::vector<int64_t> &args,
                          const std::vector<HwType> &argTypes,
                          const std::vector<std::string> &argNames,
                          HwType resultType, int64_t watchdog,
                          std::string *vcdOut) {
  Engine e(nl);
  SimResult r;
  if (e.combCycle()) {
    r.status = "comb-cycle";
    return r;
  }
  std::ostringstream vcd;
  if (vcdOut)
    e.vcdHeader(vcd);

  e.set(e.port("rst"), 1);
  e.evalComb();
  e.edge(true);
  e.set(e.port("rst"), 0);

  std::vector<NetId> vData, vValid, vReady;
  std::vector<bool> pending(args.size(), true);
  for (size_t i = 0; i < args.size(); ++i) {
    vData.push_back(e.port(argNames[i] + "_data"));
    vValid.push_back(e.port(argNames[i] + "_valid"));
    vReady.push_back(e.port(argNames[i] + "_ready"));
    e.set(vData[i], argTypes[i].bits(args[i]));
    e.set(vValid[i], 1);
  }
  e.set(e.port("result_ready"), 1);
  NetId resValid = e.port("result_valid");
  NetId resData = e.port("result_data");

  for (int64_t c = 1; c <= watchdog; ++c) {
    e.evalComb();
    if (vcdOut)
      e.vcdCycle(vcd, c);
    if (e.get(resValid) & 1) {
      r.result = canonical(e.get(resData), resultType);
      r.cycles = c;
      if (vcdOut)
        *vcdOut = vcd.str();
      return r;
    }
    // Argument handshakes complete at this edge.
    std::vector<bool> took(args.size(), false);
    for (size_t i = 0; i < args.size(); ++i)
      took[i] = pending[i] && (e.get(vReady[i]) & 1);
    e.edge(false);
    for (size_t i = 0; i < args.size(); ++i)
      if (took[i]) {
        pending[i] = false;
        e.set(vValid[i], 0);
      }
  }
  r.status = "deadlock";
  r.cycles = watchdog;
  if (vcdOut)
    *vcdOut = vcd.str();
  return r;
}

} // namespace hjc
