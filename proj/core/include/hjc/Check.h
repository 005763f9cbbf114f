//===- Check.h - Differential equivalence harness ---------------*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef HJC_CHECK_H
#define HJC_CHECK_H

#include "hjc/IR.h"
#include "hjc/SchedStatic.h"

#include <cstdint>
#include <string>
#include <vector>

namespace hjc {

/// Built-in fault-injection points used by the mutation-detection tests:
/// each one corrupts a specific lowering artifact and must be caught by the
/// differential harness (as a mismatch or a verifier failure).
enum class FaultHook {
  None,
  MuxSelectFlip,     // swap the arms of the first netlist mux
  DropBuffer,        // remove the first opaque buffer from the handshake graph
  ScheduleOffByOne,  // shift one fsmd register write to the next state
};

struct RunRecord {
  std::string backend; // interp | static | dynamic
  int inputIndex = 0;  // -1 for whole-backend failures
  bool hasResult = false;
  int64_t result = 0;
  int64_t cycles = -1; // -1 where not applicable
  std::string status;  // ok | trap | deadlock | comb-cycle | verifier-fail
};

struct CheckReport {
  std::vector<RunRecord> runs;
  bool pass = false;
  std::vector<std::string> notes;

  /// Aligned text table of all runs plus the verdict line.
  std::string table() const;
  /// Machine-readable mirror of the table (JSON array of run records).
  std::string json() const;
};

/// Compiles `source` once per enabled backend, runs every engine on every
/// input vector and compares results bit-exactly against the interpreter.
/// Inputs that trap in the interpreter are skipped and recorded. The
/// dynamic watchdog is 10 x the static cycle count + 10000 when the static
/// backend ran, otherwise a fixed large bound.
CheckReport checkEquivalence(const std::string &source,
                             const std::string &fileName,
                             const std::string &entry,
                             const std::vector<std::vector<int64_t>> &inputs,
                             bool runStatic, bool runDynamic,
                             const ResourceSpec &spec = {},
                             FaultHook fault = FaultHook::None);

} // namespace hjc

#endif // HJC_CHECK_H
