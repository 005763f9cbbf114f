//===- Netlist.h - Register/combinational netlist ---------------*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// The lowest IR level: ports, registers, synchronous 1R1W memories and an
// acyclic combinational graph over single-driver nets. This is the object
// the cycle simulator executes and the Verilog printer prints.
//
//===----------------------------------------------------------------------===//

#ifndef HJC_NETLIST_H
#define HJC_NETLIST_H

#include <cstdint>
#include <string>
#include <vector>

namespace hjc {

using NetId = int32_t;
inline constexpr NetId kNoNet = -1;

enum class CombKind {
  Const,
  Add,
  Sub,
  Mul,
  And,
  Or,
  Xor,
  Not,
  Neg,
  Shl,
  ShrL,
  ShrA,
  Eq,
  Ne,
  LtS,
  LtU,
  LeS,
  LeU,
  GtS,
  GtU,
  GeS,
  GeU,
  Mux, // inputs: {sel, whenTrue, whenFalse}
  ZExt,
  SExt,
  Trunc,
};

const char *combKindName(CombKind k);

struct Net {
  std::string name;
  int width = 1;
};

struct CombNode {
  CombKind kind = CombKind::Const;
  std::vector<NetId> inputs;
  NetId output = kNoNet;
  int64_t constVal = 0;
};

struct NlRegister {
  std::string name;
  int width = 1;
  int64_t resetVal = 0;
  NetId next = kNoNet;
  NetId enable = kNoNet; // kNoNet = always enabled
  NetId q = kNoNet;
};

/// Synchronous 1R1W memory; read latency 1 cycle, write visible next cycle.
struct NlMemory {
  std::string name;
  int depth = 1;
  int width = 1;
  NetId raddr = kNoNet, ren = kNoNet, rdata = kNoNet;
  NetId waddr = kNoNet, wdata = kNoNet, wen = kNoNet;
};

struct NlPort {
  std::string name;
  bool isInput = true;
  int width = 1;
  NetId net = kNoNet; // input: the net it drives; output: the net it reads
};

struct Netlist {
  std::vector<Net> nets;
  std::vector<CombNode> nodes;
  std::vector<NlRegister> regs;
  std::vector<NlMemory> mems;
  std::vector<NlPort> ports;

  NetId addNet(std::string name, int width) {
    nets.push_back({std::move(name), width});
    return (NetId)(nets.size() - 1);
  }

  NetId addNode(CombKind kind, std::vector<NetId> inputs, NetId output,
                int64_t constVal = 0) {
    nodes.push_back({kind, std::move(inputs), output, constVal});
    return output;
  }

  int width(NetId n) const { return nets.at((size_t)n).width; }
};

} // namespace hjc

#endif // HJC_NETLIST_H
