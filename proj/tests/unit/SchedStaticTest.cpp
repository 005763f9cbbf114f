//===- SchedStaticTest.cpp - Independent schedule validation --------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// The checker below restates the scheduling contract from scratch (latency
// table, chaining, issue limits, memory ordering) and shares no code with
// the scheduler. Random DAGs are additionally compared against an
// exhaustive branch-and-bound optimum: the list schedule must lie between
// the optimum and the serial bound, and the optimality gap is only
// reported, never required to be zero.
//
//===----------------------------------------------------------------------===//

#include "TestUtil.h"
#include "hjc/Dialect.h"
#include "hjc/Fuzz.h"
#include "hjc/SchedStatic.h"

#include "doctest.h"

#include <functional>
#include <map>

using namespace hjc;
using namespace hjc::test;

namespace {

// Latency model restated independently of the library.
int latOf(const std::string &kind) {
  if (kind == "mul")
    return 3;
  if (kind == "mem.read" || kind == "mem.write")
    return 1;
  return 0;
}

/// Validates a BlockSchedule; returns human-readable violations.
std::vector<std::string> checkSchedule(const ir::BasicBlock &block,
                                       const ResourceSpec &spec,
                                       const BlockSchedule &sched) {
  std::vector<std::string> bad;
  auto complain = [&](std::string s) { bad.push_back(std::move(s)); };
  size_t n = block.ops.size();
  REQUIRE(sched.slots.size() == n);

  std::vector<std::string> kind(n);
  std::map<ir::ValueId, size_t> defIdx;
  for (size_t i = 0; i < n; ++i) {
    kind[i] = ir::coreOpToDatapathKind(block.ops[i].opcode);
    if (!kind[i].empty()) {
      if (!sched.slots[i].scheduled)
        complain("op " + std::to_string(i) + " unscheduled");
      for (ir::ValueId r : block.ops[i].results)
        defIdx[r] = i;
    }
  }

  std::map<ir::ValueId, int> lastAccess; // program-order memory ordering
  for (size_t i = 0; i < n; ++i) {
    if (kind[i].empty() || !sched.slots[i].scheduled)
      continue;
    const OpSlot &s = sched.slots[i];
    bool comb = latOf(kind[i]) == 0;
    if (s.start < 0)
      complain("op " + std::to_string(i) + " negative start");
    if (comb && (s.chain < 1 || s.chain > spec.chainDepth))
      complain("op " + std::to_string(i) + " chain depth " +
               std::to_string(s.chain) + " outside [1," +
               std::to_string(spec.chainDepth) + "]");
    if (s.start + std::max(latOf(kind[i]), 1) > sched.numSteps)
      complain("op " + std::to_string(i) + " overruns numSteps");

    for (ir::ValueId o : block.ops[i].operands) {
      auto it = defIdx.find(o);
      if (it == defIdx.end())
        continue;
      const OpSlot &p = sched.slots[it->second];
      int plat = latOf(kind[it->second]);
      if (plat > 0) {
        if (s.start < p.start + plat)
          complain("op " + std::to_string(i) + " reads op " +
                   std::to_string(it->second) + " before its latency elapses");
      } else if (!comb) {
        if (s.start < p.start + 1)
          complain("op " + std::to_string(i) +
                   " (registered) reads comb op in the same step");
      } else {
        if (s.start < p.start)
          complain("op " + std::to_string(i) + " starts before producer");
        if (s.start == p.start && s.chain <= p.chain)
          complain("op " + std::to_string(i) + " chain position not after " +
                   std::to_string(it->second));
      }
    }

    if (kind[i] == "mem.read" || kind[i] == "mem.write") {
      ir::ValueId arr = block.ops[i].operands[0];
      auto it = lastAccess.find((ir::ValueId)arr);
      if (it != lastAccess.end() &&
          s.start < sched.slots[(size_t)it->second].start + 1)
        complain("memory access " + std::to_string(i) +
                 " overlaps its program-order predecessor");
      lastAccess[arr] = (int)i;
    }
  }

  // Issue limits per step: muls bounded by the pool; one read and one write
  // per array per step (1R1W memories).
  std::map<int, int> mulsAt;
  std::map<std::pair<ir::ValueId, int>, int> readsAt, writesAt;
  for (size_t i = 0; i < n; ++i) {
    if (!sched.slots[i].scheduled)
      continue;
    int st = sched.slots[i].start;
    if (kind[i] == "mul" && ++mulsAt[st] > spec.mulLimit)
      complain("more than mulLimit multiplies issued in step " +
               std::to_string(st));
    if (kind[i] == "mem.read" &&
        ++readsAt[{block.ops[i].operands[0], st}] > 1)
      complain("two reads of one array in step " + std::to_string(st));
    if (kind[i] == "mem.write" &&
        ++writesAt[{block.ops[i].operands[0], st}] > 1)
      complain("two writes of one array in step " + std::to_string(st));
  }
  return bad;
}

//===----------------------------------------------------------------------===//
// Random pure DAGs plus exhaustive optimum
//===----------------------------------------------------------------------===//

struct Dag {
  ir::IrFunction fn;
  ResourceSpec spec;
};

Dag randomDag(Pcg32 &rng) {
  Dag d;
  d.spec.mulLimit = 1 + (int)rng.below(2);
  static const int kDepths[] = {1, 2, 4};
  d.spec.chainDepth = kDepths[rng.below(3)];
  d.fn.name = "dag";
  d.fn.returnType = HwType::u32();
  d.fn.paramTypes = {HwType::u32(), HwType::u32()};
  d.fn.blocks.emplace_back();
  auto &bb = d.fn.blocks.back();
  bb.args.push_back(d.fn.addValue(HwType::u32()));
  bb.args.push_back(d.fn.addValue(HwType::u32()));
  std::vector<ir::ValueId> avail(bb.args.begin(), bb.args.end());
  int nOps = 1 + (int)rng.below(6);
  for (int i = 0; i < nOps; ++i) {
    ir::Operation op;
    op.opcode = rng.chance(40) ? "core.mul" : "core.add";
    op.operands = {avail[rng.below((uint32_t)avail.size())],
                   avail[rng.below((uint32_t)avail.size())]};
    op.results = {d.fn.addValue(HwType::u32())};
    avail.push_back(op.results[0]);
    bb.ops.push_back(op);
  }
  ir::Operation ret;
  ret.opcode = "core.return";
  ret.operands = {avail.back()};
  bb.ops.push_back(ret);
  return d;
}

/// Branch-and-bound exhaustive minimum makespan under the restated model.
/// Ops are assigned starts in index order (operands always precede uses).
int exhaustiveOptimum(const Dag &d) {
  const auto &ops = d.fn.blocks[0].ops;
  size_t n = ops.size() - 1; // drop the terminator
  std::vector<int> lat(n);
  std::map<ir::ValueId, size_t> defIdx;
  for (size_t i = 0; i < n; ++i) {
    lat[i] = ops[i].opcode == "core.mul" ? 3 : 0;
    defIdx[ops[i].results[0]] = i;
  }
  int serial = 0;
  for (size_t i = 0; i < n; ++i)
    serial += std::max(lat[i], 1);
  int best = serial;

  std::vector<int> start(n, 0), chain(n, 1);
  std::function<void(size_t, int)> go = [&](size_t i, int makespan) {
    if (makespan >= best)
      return;
    if (i == n) {
      best = makespan;
      return;
    }
    int earliest = 0;
    for (ir::ValueId o : ops[i].operands) {
      auto it = defIdx.find(o);
      if (it == defIdx.end())
        continue;
      size_t p = it->second;
      if (lat[p] > 0)
        earliest = std::max(earliest, start[p] + lat[p]);
      else if (lat[i] > 0)
        earliest = std::max(earliest, start[p] + 1);
      else
        earliest = std::max(earliest, start[p]);
    }
    for (int s = earliest; s < best; ++s) {
      if (lat[i] == 3) {
        int used = 0;
        for (size_t j = 0; j < i; ++j)
          if (lat[j] == 3 && start[j] == s)
            ++used;
        if (used >= d.spec.mulLimit)
          continue;
      }
      int c = 1;
      bool feasible = true;
      if (lat[i] == 0) {
        for (ir::ValueId o : ops[i].operands) {
          auto it = defIdx.find(o);
          if (it != defIdx.end() && lat[it->second] == 0 &&
              start[it->second] == s)
            c = std::max(c, chain[it->second] + 1);
        }
        if (c > d.spec.chainDepth)
          feasible = false;
      }
      if (!feasible)
        continue;
      start[i] = s;
      chain[i] = c;
      go(i + 1, std::max(makespan, s + std::max(lat[i], 1)));
    }
  };
  go(0, 0);
  return best;
}

} // namespace

TEST_CASE("schedules of fuzzed program blocks satisfy the restated contract") {
  FuzzConfig cfg;
  cfg.seed = 2210;
  const ResourceSpec specs[] = {{1, 4}, {2, 2}, {1, 1}};
  for (int i = 0; i < 30; ++i) {
    auto core = compileCore(generateProgram(cfg, i));
    for (const auto &fn : core.functions)
      for (const auto &bb : fn.blocks)
        for (const auto &spec : specs) {
          auto sched = scheduleBlock(fn, bb, spec);
          auto bad = checkSchedule(bb, spec, sched);
          CAPTURE(i);
          for (const auto &msg : bad)
            FAIL_CHECK(msg);
        }
  }
}

TEST_CASE("random DAG schedules are legal and bounded by the exhaustive "
          "optimum and the serial schedule") {
  Pcg32 rng(5040, 11);
  int gapTotal = 0, gapCount = 0;
  for (int t = 0; t < 50; ++t) {
    Dag d = randomDag(rng);
    auto sched = scheduleBlock(d.fn, d.fn.blocks[0], d.spec);
    auto bad = checkSchedule(d.fn.blocks[0], d.spec, sched);
    CAPTURE(t);
    for (const auto &msg : bad)
      FAIL_CHECK(msg);

    int optimal = exhaustiveOptimum(d);
    int serial = 0;
    for (const auto &op : d.fn.blocks[0].ops)
      if (op.opcode != "core.return")
        serial += op.opcode == "core.mul" ? 3 : 1;
    CHECK(sched.numSteps >= optimal);
    CHECK(sched.numSteps <= serial);
    if (sched.numSteps > optimal) {
      gapTotal += sched.numSteps - optimal;
      ++gapCount;
    }
  }
  MESSAGE("list schedule vs exhaustive optimum: ", gapCount,
          "/50 DAGs above optimal, total gap ", gapTotal, " steps");
}

TEST_CASE("scheduling is deterministic") {
  Pcg32 rng(77, 3);
  Dag d = randomDag(rng);
  auto a = scheduleBlock(d.fn, d.fn.blocks[0], d.spec);
  auto b = scheduleBlock(d.fn, d.fn.blocks[0], d.spec);
  REQUIRE(a.numSteps == b.numSteps);
  for (size_t i = 0; i < a.slots.size(); ++i) {
    CHECK(a.slots[i].start == b.slots[i].start);
    CHECK(a.slots[i].unit == b.slots[i].unit);
    CHECK(a.slots[i].chain == b.slots[i].chain);
  }
}
