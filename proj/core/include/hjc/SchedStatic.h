//===- SchedStatic.h - List scheduling and FSMD construction ----*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef HJC_SCHEDSTATIC_H
#define HJC_SCHEDSTATIC_H

#include "hjc/IR.h"

namespace hjc {

struct ResourceSpec {
  int mulLimit = 1;   // pipelined multiplier instances (II = 1)
  int chainDepth = 4; // max latency-0 ops chained within one control step
};

/// Slot for one block operation. Entries for non-datapath ops (constants,
/// allocs, terminators) are present but unused.
struct OpSlot {
  bool scheduled = false;
  int start = 0; // control step within the block
  int unit = 0;  // instance index within the op kind's unit pool
  int chain = 1; // combinational depth within the start step (latency-0 ops)
};

struct BlockSchedule {
  std::vector<OpSlot> slots; // parallel to block.ops
  int numSteps = 1;          // includes trailing write-back steps
};

/// Resource-constrained list scheduling of one core-level block. Priority is
/// the longest latency path to the block terminator; ties break by ascending
/// operation index, so the result is deterministic.
BlockSchedule scheduleBlock(const ir::IrFunction &fn,
                            const ir::BasicBlock &block,
                            const ResourceSpec &spec);

/// Lowers a core-level module to the fsmd level: one FSM per function whose
/// states are the concatenated per-block step sequences plus a final done
/// state. Values crossing a step or block boundary get registers; block
/// arguments become registers written by each predecessor's last state.
ir::IrModule buildFsmd(const ir::IrModule &module,
                       const ResourceSpec &spec = {});

} // namespace hjc

#endif // HJC_SCHEDSTATIC_H
