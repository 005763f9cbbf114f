//===- VerifierTest.cpp - Hand-written invalid IR corpus ------------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Each text below is a hand-written invalid module at some level; the
// verifier must reject every one and name the expected rule. The corpus
// spans the generic SSA rules and the level-specific rules of all four
// levels.
//
//===----------------------------------------------------------------------===//

#include "hjc/IR.h"
#include "hjc/Verifier.h"

#include "doctest.h"

#include <algorithm>

using namespace hjc;

namespace {

struct InvalidCase {
  const char *name;
  const char *expectedRule;
  const char *text;
};

const InvalidCase kInvalid[] = {
    {"use-before-def-in-block", "ssa.dominance", R"(func @f(a: u32) -> u32 level(core) {
^bb0(%0: u32):
  %1 = core.add(%0, %2) : u32
  %2 = core.add(%0, %0) : u32
  core.return(%1)
})"},

    {"use-from-non-dominating-block", "ssa.dominance", R"(func @f(a: u32) -> u32 level(core) {
^bb0(%0: u32):
  %1 = core.const() {value = 0} : u1
  core.condbr(%1, ^bb1(), ^bb2())
^bb1():
  %2 = core.add(%0, %0) : u32
  core.br(^bb3())
^bb2():
  core.br(^bb3())
^bb3():
  core.return(%2)
})"},

    {"handshake-op-in-core-module", "ssa.level-mix", R"(func @f(a: u32) -> u32 level(core) {
^bb0(%0: u32):
  %1 = handshake.add(%0, %0) : u32
  core.return(%1)
})"},

    {"block-without-terminator", "ssa.terminator", R"(func @f(a: u32) -> u32 level(core) {
^bb0(%0: u32):
  %1 = core.add(%0, %0) : u32
})"},

    {"op-after-terminator", "ssa.terminator", R"(func @f(a: u32) -> u32 level(core) {
^bb0(%0: u32):
  core.return(%0)
  %1 = core.add(%0, %0) : u32
  core.return(%1)
})"},

    {"branch-to-missing-block", "ssa.succ", R"(func @f(a: u32) -> u32 level(core) {
^bb0(%0: u32):
  core.br(^bb7())
})"},

    {"branch-arg-count-mismatch", "ssa.succ-args", R"(func @f(a: u32) -> u32 level(core) {
^bb0(%0: u32):
  core.br(^bb1())
^bb1(%1: u32):
  core.return(%1)
})"},

    {"core-add-with-three-operands", "core.arity", R"(func @f(a: u32) -> u32 level(core) {
^bb0(%0: u32):
  %1 = core.add(%0, %0, %0) : u32
  core.return(%1)
})"},

    {"core-add-width-mismatch", "core.width", R"(func @f(a: u32, b: u16) -> u32 level(core) {
^bb0(%0: u32, %1: u16):
  %2 = core.add(%0, %1) : u32
  core.return(%2)
})"},

    {"handshake-function-without-exit", "hs.shape", R"(func @f(a: u32) -> u32 level(handshake) {
^bb0():
  %0, %1 = handshake.entry() : u32, token
  handshake.sink(%0)
  handshake.sink(%1)
})"},

    {"loop-without-opaque-buffer", "hs.buffer-cycle", R"(func @f(a: u32) -> u32 level(handshake) {
^bb0():
  %0, %1 = handshake.entry() : u32, token
  handshake.sink(%0)
  %2, %3 = handshake.merge(%1, %7) {backedges = 2, n = 2} : token, u1
  handshake.sink(%3)
  %4, %5, %6 = handshake.fork(%2) {n = 3} : token, token, token
  %7 = handshake.buffer(%6) {opaque = 0} : token
  %8 = handshake.constant(%4) {value = 0} : u32
  handshake.exit(%8, %5)
})"},

    {"mux-select-not-u1", "hs.mux-select", R"(func @f(a: u32) -> u32 level(handshake) {
^bb0():
  %0, %1 = handshake.entry() : u32, token
  %2, %3, %4 = handshake.fork(%1) {n = 3} : token, token, token
  %5 = handshake.constant(%2) {value = 1} : u32
  %6 = handshake.constant(%3) {value = 2} : u32
  %7 = handshake.mux(%0, %5, %6) {backedges = 0, n = 2} : u32
  handshake.exit(%7, %4)
})"},

    {"fork-result-count-vs-n", "hs.arity", R"(func @f(a: u32) -> u32 level(handshake) {
^bb0():
  %0, %1 = handshake.entry() : u32, token
  handshake.sink(%0)
  %2, %3 = handshake.fork(%1) {n = 3} : token, token
  %4 = handshake.constant(%2) {value = 0} : u32
  handshake.exit(%4, %3)
})"},

    {"channel-with-two-consumers", "hs.consume", R"(func @f(a: u32) -> u32 level(handshake) {
^bb0():
  %0, %1 = handshake.entry() : u32, token
  handshake.sink(%0)
  %2 = handshake.constant(%1) {value = 0} : u32
  handshake.exit(%2, %1)
})"},

    {"two-muls-share-a-unit-step", "fsmd.resource", R"(func @main(a: u32, b: u32) -> u32 level(fsmd) {
  state "s0_0"
  state "s0_1"
  state "s0_2"
  state "s0_3"
  state "done"
  entry 0
  done 4
  reg 0 "v2" : u32
  reg 1 "v3" : u32
  reg 2 "res" : u32
  op 0 = mul unit 0 start 0 (arg 0, arg 1) : u32
  op 1 = mul unit 0 start 0 (arg 1, arg 0) : u32
  op 2 = add unit 2 start 3 (reg 0, reg 1) : u32
  wr state 2 reg 0 = op 0
  wr state 2 reg 1 = op 1
  wr state 3 reg 2 = op 2
  result 2
  trans 0 -> 1
  trans 1 -> 2
  trans 2 -> 3
  trans 3 -> 4
})"},

    {"combinational-cycle", "nl.comb-cycle", R"(func @f(a: u1) -> u1 level(netlist) {
  net %0 "clk" : 1
  net %1 "rst" : 1
  net %2 "start" : 1
  net %3 "arg_a" : 1
  net %4 "x" : 1
  net %5 "y" : 1
  net %6 "done" : 1
  net %7 "result" : 1
  port in "clk" %0
  port in "rst" %1
  port in "start" %2
  port in "arg_a" %3
  port out "done" %6
  port out "result" %7
  node %4 = and(%5, %3)
  node %5 = and(%4, %3)
  node %6 = const(1)
  node %7 = and(%4, %5)
})"},

    {"net-with-two-drivers", "nl.driver", R"(func @f(a: u1) -> u1 level(netlist) {
  net %0 "clk" : 1
  net %1 "rst" : 1
  net %2 "start" : 1
  net %3 "arg_a" : 1
  net %4 "x" : 1
  net %5 "done" : 1
  net %6 "result" : 1
  port in "clk" %0
  port in "rst" %1
  port in "start" %2
  port in "arg_a" %3
  port out "done" %5
  port out "result" %6
  node %4 = and(%3, %3)
  node %4 = or(%3, %3)
  node %5 = const(1)
  node %6 = and(%4, %3)
})"},

    {"adder-width-mismatch", "nl.width", R"(func @f(a: u32) -> u32 level(netlist) {
  net %0 "clk" : 1
  net %1 "rst" : 1
  net %2 "start" : 1
  net %3 "arg_a" : 32
  net %4 "x" : 32
  net %5 "done" : 1
  net %6 "result" : 32
  port in "clk" %0
  port in "rst" %1
  port in "start" %2
  port in "arg_a" %3
  port out "done" %5
  port out "result" %6
  node %4 = add(%2, %3)
  node %5 = const(1)
  node %6 = add(%4, %3)
})"},
};

} // namespace

TEST_CASE("verifier rejects every hand-written invalid module") {
  CHECK(std::size(kInvalid) >= 12);
  for (const auto &c : kInvalid) {
    CAPTURE(c.name);
    ir::IrModule m = ir::parseIr(c.text);
    auto diags = ir::verify(m);
    REQUIRE(!diags.empty());
    bool found = std::any_of(diags.begin(), diags.end(), [&](const auto &d) {
      return d.rule == c.expectedRule;
    });
    CHECK_MESSAGE(found, c.name, ": expected rule ", c.expectedRule,
                  ", got ", diags.front().rule);
  }
}

TEST_CASE("verify never mutates the module") {
  ir::IrModule m = ir::parseIr(kInvalid[0].text);
  std::string before = ir::printIr(m);
  (void)ir::verify(m);
  CHECK(ir::printIr(m) == before);
}
