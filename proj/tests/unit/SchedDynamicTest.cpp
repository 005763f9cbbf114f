//===- SchedDynamicTest.cpp - Elastic lowering invariants -----------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "TestUtil.h"
#include "hjc/Emit.h"
#include "hjc/Fuzz.h"
#include "hjc/Interp.h"
#include "hjc/NetlistSim.h"
#include "hjc/SchedDynamic.h"
#include "hjc/Verifier.h"

#include "doctest.h"

#include <functional>
#include <map>

using namespace hjc;
using namespace hjc::test;

namespace {

/// Independent cycle check over the channel graph of one handshake
/// function: an edge runs producer-op -> consumer-op per channel, except
/// into an opaque buffer, which breaks feedback. Reports the number of
/// cycles that contain no opaque buffer (must be 0 after insertBuffers).
int unbufferedCycles(const ir::IrFunction &fn) {
  const auto &ops = fn.blocks.at(0).ops;
  std::map<ir::ValueId, size_t> producer;
  for (size_t i = 0; i < ops.size(); ++i)
    for (ir::ValueId r : ops[i].results)
      producer[r] = i;

  std::vector<std::vector<size_t>> succ(ops.size());
  for (size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].opcode == "handshake.buffer" && ops[i].intAttr("opaque") == 1)
      continue; // opaque buffer: no combinational/token feedback through it
    for (ir::ValueId o : ops[i].operands) {
      auto it = producer.find(o);
      if (it != producer.end())
        succ[it->second].push_back(i);
    }
  }
  // An edge u->v exists when v consumes u's result; a cycle that survives
  // the opaque-buffer cut is an unbuffered cycle.
  std::vector<int> state(ops.size(), 0); // 0 new, 1 active, 2 done
  int found = 0;
  std::function<void(size_t)> dfs = [&](size_t u) {
    state[u] = 1;
    for (size_t v : succ[u]) {
      if (state[v] == 1)
        ++found;
      else if (state[v] == 0)
        dfs(v);
    }
    state[u] = 2;
  };
  for (size_t i = 0; i < ops.size(); ++i)
    if (state[i] == 0)
      dfs(i);
  return found;
}

int opaqueBufferCount(const ir::IrFunction &fn) {
  int n = 0;
  for (const auto &op : fn.blocks.at(0).ops)
    if (op.opcode == "handshake.buffer" && op.intAttr("opaque") == 1)
      ++n;
  return n;
}

} // namespace

TEST_CASE("no unbuffered cycles remain in fuzzed elastic circuits") {
  FuzzConfig cfg;
  cfg.seed = 3307;
  for (int i = 0; i < 40; ++i) {
    auto hs = lowerToHandshake(compileCore(generateProgram(cfg, i)));
    CHECK(ir::verify(hs).empty());
    for (const auto &fn : hs.functions) {
      CAPTURE(i);
      CHECK(unbufferedCycles(fn) == 0);
    }
  }
}

TEST_CASE("acyclic programs get no opaque buffers") {
  auto hs = lowerToHandshake(compileCore(
      "fn main(a: u32, b: u32) -> u32 { return (a + b) * (a - b); }"));
  CHECK(opaqueBufferCount(hs.functions[0]) == 0);
}

TEST_CASE("loops get at least one opaque buffer per back edge") {
  auto hs = lowerToHandshake(compileCore(
      "fn main(a: u32) -> u32 {\n"
      "  let mut s: u32 = 0u32;\n"
      "  for i in 0..4 { s = s + a; }\n"
      "  return s;\n}"));
  CHECK(opaqueBufferCount(hs.functions[0]) > 0);
  CHECK(unbufferedCycles(hs.functions[0]) == 0);
}

TEST_CASE("insertBuffers is idempotent") {
  auto core = compileCore(
      "fn main(a: u32) -> u32 {\n"
      "  let mut s: u32 = 0u32;\n"
      "  let mut i: u32 = 0u32;\n"
      "  while i < a {\n    s = s + i;\n    i = i + 1u32;\n  }\n"
      "  return s;\n}");
  auto once = lowerToHandshake(core);
  auto twice = once;
  insertBuffers(twice);
  CHECK(ir::structurallyEqual(once, twice));
}

TEST_CASE("memory ordering tokens serialize same-array accesses") {
  // Write-after-write then read: the dynamic circuit must observe program
  // order, not issue order.
  const char *src = R"(
fn main(a: u32) -> u32 {
    let mut x: [u32; 4] = [0; 4];
    x[0u32] = a;
    x[0u32] = a + 1u32;
    return x[0u32];
}
)";
  auto core = compileCore(src);
  auto gold = interpret(core, "main", {10});
  REQUIRE(!gold.trapped);
  REQUIRE(gold.value == 11);

  auto nl = lowerHandshakeToNetlist(lowerToHandshake(core));
  const ir::IrFunction *fn = nl.find("main");
  auto sim = simulateDynamic(*fn->netlist, {10}, fn->paramTypes,
                             fn->paramNames, fn->returnType, 100000);
  CHECK(sim.status == "ok");
  CHECK(sim.result == 11);
}
