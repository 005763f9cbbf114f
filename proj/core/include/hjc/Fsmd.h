//===- Fsmd.h - FSM + datapath design ---------------------------*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// The statically scheduled level: named control states, guarded transitions,
// datapath operations bound to functional-unit instances over contiguous
// step ranges, registers with per-state writes, and one memory per array.
//
//===----------------------------------------------------------------------===//

#ifndef HJC_FSMD_H
#define HJC_FSMD_H

#include "hjc/Type.h"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hjc {

struct FsmdDesign {
  /// Where a datapath input comes from.
  enum class SrcKind {
    Reg,     // index into regs
    Arg,     // entry argument index (latched at start)
    Const,   // constVal
    Op,      // output of ops[index]; same-state combinational chain or the
             // pipeline/result tap of a multi-cycle op in its last state
    MemData, // read-data of mems[index], valid the state after the read
  };

  struct Src {
    SrcKind kind = SrcKind::Const;
    int index = 0;
    int64_t constVal = 0;
    HwType type;
  };

  struct DpOp {
    std::string kind; // add, sub, mul, and, ..., cmp.lt, sext, zext, trunc,
                      // mem.read, mem.write, select
    std::vector<Src> operands;
    HwType resultType;
    int unit = 0;       // instance index within this kind's unit pool
    int startState = 0; // occupies startState .. lastState()
    int mem = -1;       // memory index for mem.read / mem.write

    int latency() const;
    int lastState() const { return startState + std::max(latency() - 1, 0); }
  };

  struct Register {
    std::string name;
    HwType type;
  };

  struct RegWrite {
    int state = 0;
    int reg = 0;
    Src src;
  };

  struct State {
    std::string name; // s<block>_<step>, plus the done state
  };

  struct Transition {
    int from = 0, to = 0;
    std::optional<Src> guard; // nullopt = unconditional
    bool negated = false;
  };

  struct Memory {
    std::string name;
    int depth = 1;
    HwType elemType;
  };

  std::vector<State> states;
  std::vector<Transition> transitions;
  std::vector<DpOp> ops;
  std::vector<Register> regs;
  std::vector<RegWrite> regWrites;
  std::vector<Memory> mems;
  int entryState = 0;
  int doneState = 0;
  int resultReg = -1; // holds the return value when the done state is reached
};

/// Latency of a datapath/handshake operator kind under the fixed timing
/// model: mul = 3 (pipelined, II=1), memory read/write = 1, rest = 0.
int operatorLatency(const std::string &kind);

} // namespace hjc

#endif // HJC_FSMD_H
