//===- Fuzz.h - Seeded program generation and campaign driver ---*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef HJC_FUZZ_H
#define HJC_FUZZ_H

#include "hjc/Check.h"
#include "hjc/Type.h"

#include <cstdint>
#include <string>
#include <vector>

namespace hjc {

/// PCG-XSH-RR 32-bit output, 64-bit state. The algorithm is frozen: the
/// same (seed, stream) pair yields the same sequence on every platform and
/// in every future version, so fuzz corpora are reproducible by seed alone.
class Pcg32 {
public:
  Pcg32(uint64_t seed, uint64_t stream) : inc_((stream << 1u) | 1u) {
    next();
    state_ += seed;
    next();
  }

  uint32_t next() {
    uint64_t old = state_;
    state_ = old * 6364136223846793005ull + inc_;
    uint32_t xs = (uint32_t)(((old >> 18u) ^ old) >> 27u);
    uint32_t rot = (uint32_t)(old >> 59u);
    return (xs >> rot) | (xs << ((32 - rot) & 31u));
  }
  /// Uniform-ish draw in [0, n); the slight modulo bias is accepted and
  /// frozen with the algorithm.
  uint32_t below(uint32_t n) { return n ? next() % n : 0; }
  bool chance(uint32_t percent) { return below(100) < percent; }

private:
  uint64_t state_ = 0;
  uint64_t inc_;
};

struct FuzzConfig {
  uint64_t seed = 1;
  int count = 100;
  int inputsPerProgram = 4;
  int maxStmtsPerBlock = 8;
  int maxExprDepth = 4;
  int maxLoopNest = 2;
  bool arrays = true;
  bool generics = true;
  bool whileLoops = true;
  bool forLoops = true;
  bool mul = true;
  bool backendStatic = true;
  bool backendDynamic = true;
  FaultHook fault = FaultHook::None;
};

/// One generated trial: source text plus the input vectors to run.
struct FuzzCase {
  std::string source;
  std::vector<HwType> paramTypes;
  std::vector<std::vector<int64_t>> inputs;
};

struct FuzzFailure {
  int index = 0;
  std::string note;
  std::string program;
  std::string shrunk;
};

struct CampaignReport {
  int programs = 0;
  int runsTotal = 0;
  int trapsSkipped = 0;
  int mismatches = 0;
  std::vector<FuzzFailure> failures;
  bool pass() const { return mismatches == 0; }
  std::string summary() const;
  std::string json() const;
};

/// Deterministic generator: program `index` of a config is a pure function
/// of (config, index). Generated programs parse, typecheck and compile on
/// both backends by construction: loops have constant bounds (or the
/// counter-increment while pattern), array indices are masked to
/// power-of-two lengths, and arrays are declared only at function scope.
FuzzCase generateCase(const FuzzConfig &config, int index);
std::string generateProgram(const FuzzConfig &config, int index);

/// Runs the differential campaign; failures become report entries with a
/// shrunk reproducer, never exceptions.
CampaignReport runCampaign(const FuzzConfig &config);

/// Greedy line-deletion shrinking; every candidate must still compile and
/// still fail the equivalence check. Throws std::invalid_argument when the
/// input does not fail in the first place.
std::string shrink(const std::string &source,
                   const std::vector<std::vector<int64_t>> &inputs,
                   bool runStatic, bool runDynamic,
                   FaultHook fault = FaultHook::None);

} // namespace hjc

#endif // HJC_FUZZ_H
