//===- NetBuilder.h - Convenience layer over Netlist construction -*- C++ -*-=//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef HJC_SRC_NETBUILDER_H
#define HJC_SRC_NETBUILDER_H

#include "hjc/Netlist.h"

#include <string>

namespace hjc {

/// Thin wrapper that names nets deterministically and keeps node creation
/// one-liners. Shared by the fsmd and handshake netlist lowerings.
class NetBuilder {
public:
  explicit NetBuilder(Netlist &nl) : nl_(nl) {}

  Netlist &netlist() { return nl_; }

  NetId fresh(const std::string &name, int width) {
    return nl_.addNet(uniq(name), width);
  }

  NetId constant(int width, int64_t value, const std::string &name = "c") {
    NetId out = fresh(name, width);
    nl_.addNode(CombKind::Const, {}, out, value);
    return out;
  }

  NetId unop(CombKind k, NetId a, int width, const std::string &name) {
    NetId out = fresh(name, width);
    nl_.addNode(k, {a}, out);
    return out;
  }

  NetId binop(CombKind k, NetId a, NetId b, int width,
              const std::string &name) {
    NetId out = fresh(name, width);
    nl_.addNode(k, {a, b}, out);
    return out;
  }

  NetId mux(NetId sel, NetId t, NetId f, const std::string &name) {
    NetId out = fresh(name, nl_.width(t));
    nl_.addNode(CombKind::Mux, {sel, t, f}, out);
    return out;
  }

  NetId andOp(NetId a, NetId b, const std::string &name = "and") {
    return binop(CombKind::And, a, b, 1, name);
  }
  NetId orOp(NetId a, NetId b, const std::string &name = "or") {
    return binop(CombKind::Or, a, b, 1, name);
  }
  NetId notOp(NetId a, const std::string &name = "not") {
    return unop(CombKind::Not, a, 1, name);
  }

  /// Resize to `width`; sign-extends when widening and `isSigned` holds.
  NetId resize(NetId a, int width, bool isSigned, const std::string &name) {
    int w = nl_.width(a);
    if (w == width)
      return a;
    if (w < width)
      return unop(isSigned ? CombKind::SExt : CombKind::ZExt, a, width, name);
    return unop(CombKind::Trunc, a, width, name);
  }

  /// Register with synchronous reset to `resetVal`; `enable` may be kNoNet.
  NetId reg(const std::string &name, int width, NetId next, NetId enable,
            int64_t resetVal = 0) {
    NetId q = fresh(name + "_q", width);
    nl_.regs.push_back({uniq(name), width, resetVal, next, enable, q});
    return q;
  }

  /// Register whose next/enable nets are assigned later (feedback paths).
  NetId regLater(const std::string &name, int width, int *regIndexOut,
                 int64_t resetVal = 0) {
    NetId q = fresh(name + "_q", width);
    nl_.regs.push_back({uniq(name), width, resetVal, kNoNet, kNoNet, q});
    *regIndexOut = (int)nl_.regs.size() - 1;
    return q;
  }

private:
  Netlist &nl_;
  int counter_ = 0;

  std::string uniq(const std::string &base) {
    return base + "_" + std::to_string(counter_++);
  }
};

} // namespace hjc

#endif // HJC_SRC_NETBUILDER_H
