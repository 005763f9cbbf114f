//===- NetlistSim.h - Cycle-accurate netlist simulator ----------*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef HJC_NETLISTSIM_H
#define HJC_NETLISTSIM_H

#include "hjc/Netlist.h"
#include "hjc/Type.h"

#include <cstdint>
#include <string>
#include <vector>

namespace hjc {

struct SimResult {
  /// "ok", "deadlock" (watchdog expired) or "comb-cycle" (defensive).
  std::string status = "ok";
  int64_t result = 0; // canonical (sign-adjusted) value when status == ok
  int64_t cycles = 0; // from protocol start to completion
};

/// Two-phase cycle simulation: combinational nodes evaluate in topological
/// order, then registers and memories update on the clock edge. Registers
/// reset to their reset values; memories reset to zero.
///
/// Static protocol: after reset, arguments and `start` are driven and held;
/// the run completes when `done` rises, with `result` sampled in that cycle.
SimResult simulateStatic(const Netlist &nl, const std::vector<int64_t> &args,
                         const std::vector<HwType> &argTypes,
                         HwType resultType, int64_t watchdog,
                         std::string *vcdOut = nullptr);

/// Dynamic protocol: after reset, each argument channel presents one value
/// (valid until accepted) and `result_ready` is held high; the run completes
/// when `result_valid` rises.
SimResult simulateDynamic(const Netlist &nl, const std::vector<int64_t> &args,
                          const std::vector<HwType> &argTypes,
                          const std::vector<std::string> &argNames,
                          HwType resultType, int64_t watchdog,
                          std::string *vcdOut = nullptr);

} // namespace hjc

#endif // HJC_NETLISTSIM_H
