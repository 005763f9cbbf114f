//===- Interp.h - Reference interpreter for core-level IR -------*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef HJC_INTERP_H
#define HJC_INTERP_H

#include "hjc/IR.h"

#include <cstdint>
#include <string>
#include <vector>

namespace hjc {

/// Outcome of one activation. A trapped run has no value; trap kinds are
/// "FuelExhausted" and "OutOfBoundsIndex".
struct InterpResult {
  bool trapped = false;
  std::string trapKind;
  int64_t value = 0;
  int64_t opsExecuted = 0;
  int64_t blocksExecuted = 0;
};

inline constexpr int64_t kDefaultFuel = 10000000;

/// Executes `entry` on the given argument values with two's-complement
/// wraparound semantics. Arrays are allocated per activation and
/// zero-filled; an out-of-range index traps. core.call is executed by
/// recursive activation, so both pre- and post-inline modules run.
InterpResult interpret(const ir::IrModule &module, const std::string &entry,
                       const std::vector<int64_t> &args,
                       int64_t fuel = kDefaultFuel);

} // namespace hjc

#endif // HJC_INTERP_H
