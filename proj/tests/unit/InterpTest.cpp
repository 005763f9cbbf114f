//===- InterpTest.cpp - Interpreter and operator semantics ----------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "TestUtil.h"
#include "hjc/Eval.h"
#include "hjc/Fuzz.h"
#include "hjc/Interp.h"

#include "doctest.h"

using namespace hjc;
using namespace hjc::test;

namespace {

int64_t run(const std::string &src, const std::vector<int64_t> &args) {
  auto core = compileCore(src);
  auto r = interpret(core, "main", args);
  REQUIRE(!r.trapped);
  return r.value;
}

/// Independent two's-complement oracle: all arithmetic in uint64_t with
/// explicit masking, written without reference to the library evaluator.
int64_t oracle(const std::string &kind, int64_t a, int64_t b, int width,
               bool isSigned) {
  uint64_t mask = width == 64 ? ~0ull : ((1ull << width) - 1);
  uint64_t ua = (uint64_t)a & mask, ub = (uint64_t)b & mask;
  auto wrap = [&](uint64_t v) -> int64_t {
    v &= mask;
    if (isSigned && (v & (1ull << (width - 1))))
      return (int64_t)(v | ~mask);
    return (int64_t)v;
  };
  auto sgn = [&](uint64_t v) -> int64_t {
    if (v & (1ull << (width - 1)))
      return (int64_t)(v | ~mask);
    return (int64_t)v;
  };
  if (kind == "add")
    return wrap(ua + ub);
  if (kind == "sub")
    return wrap(ua - ub);
  if (kind == "mul")
    return wrap(ua * ub);
  if (kind == "and")
    return wrap(ua & ub);
  if (kind == "or")
    return wrap(ua | ub);
  if (kind == "xor")
    return wrap(ua ^ ub);
  if (kind == "shl")
    return wrap(ua << (ub % (uint64_t)width));
  if (kind == "shr") {
    uint64_t sh = ub % (uint64_t)width;
    if (!isSigned)
      return wrap(ua >> sh);
    return wrap((uint64_t)(sgn(ua) >> sh));
  }
  if (kind == "cmp.lt")
    return isSigned ? (sgn(ua) < sgn(ub)) : (ua < ub);
  if (kind == "cmp.ge")
    return isSigned ? (sgn(ua) >= sgn(ub)) : (ua >= ub);
  if (kind == "cmp.eq")
    return ua == ub;
  if (kind == "cmp.ne")
    return ua != ub;
  FAIL("unknown kind");
  return 0;
}

} // namespace

TEST_CASE("interpreter wraps in two's complement") {
  CHECK(run("fn main(a: i8) -> i8 { return a + 1i8; }", {127}) == -128);
  CHECK(run("fn main(a: u8) -> u8 { return a + 1u8; }", {255}) == 0);
  CHECK(run("fn main(a: u16) -> u16 { return a * a; }", {300}) ==
        (300 * 300) % 65536);
  CHECK(run("fn main(a: i32) -> i32 { return 0i32 - a; }",
            {-2147483647 - 1}) == -2147483647 - 1); // INT_MIN negates to itself
}

TEST_CASE("shift amounts reduce modulo the operand width") {
  CHECK(run("fn main(a: u32, s: u32) -> u32 { return a << s; }", {1, 35}) ==
        8);
  CHECK(run("fn main(a: u32, s: u32) -> u32 { return a >> s; }",
            {0x80000000ll, 32}) == 0x80000000ll);
  // Signed right shift is arithmetic.
  CHECK(run("fn main(a: i32, s: i32) -> i32 { return a >> s; }", {-8, 1}) ==
        -4);
}

TEST_CASE("casts truncate or extend by source signedness") {
  CHECK(run("fn main(a: i8) -> u32 { return a as u32; }", {-1}) == 4294967295);
  CHECK(run("fn main(a: u8) -> u32 { return a as u32; }", {255}) == 255);
  CHECK(run("fn main(a: u32) -> u8 { return a as u8; }", {0x1ff}) == 0xff);
  CHECK(run("fn main(a: i32) -> i8 { return a as i8; }", {128}) == -128);
}

TEST_CASE("comparison signedness follows the operand type") {
  CHECK(run("fn main(a: i8, b: i8) -> u1 { return a < b; }", {-1, 0}) == 1);
  CHECK(run("fn main(a: u8, b: u8) -> u1 { return a < b; }", {255, 0}) == 0);
}

TEST_CASE("out-of-bounds index traps; in-bounds reads zero-filled storage") {
  const char *src = R"(
fn main(a: u32) -> u32 {
    let mut x: [u32; 4] = [0; 4];
    x[1u32] = 7u32;
    return x[a];
}
)";
  auto core = compileCore(src);
  auto ok = interpret(core, "main", {1});
  REQUIRE(!ok.trapped);
  CHECK(ok.value == 7);
  auto zero = interpret(core, "main", {3});
  REQUIRE(!zero.trapped);
  CHECK(zero.value == 0);
  auto oob = interpret(core, "main", {9});
  CHECK(oob.trapped);
  CHECK(oob.trapKind == "OutOfBoundsIndex");
}

TEST_CASE("fuel exhaustion traps instead of hanging") {
  const char *src = R"(
fn main(a: u32) -> u32 {
    let mut x: u32 = a;
    while x < 1000000u32 {
        x = x + 1u32;
    }
    return x;
}
)";
  auto core = compileCore(src);
  auto r = interpret(core, "main", {0}, /*fuel=*/1000);
  CHECK(r.trapped);
  CHECK(r.trapKind == "FuelExhausted");
}

TEST_CASE("calls execute by recursive activation pre-inline") {
  const char *src = R"(
fn twice(x: u32) -> u32 { return x + x; }
fn main(a: u32) -> u32 { return twice(a) + 1u32; }
)";
  auto pre = compileCorePreInline(src);
  auto r = interpret(pre, "main", {21});
  REQUIRE(!r.trapped);
  CHECK(r.value == 43);
}

TEST_CASE("evalOperator matches an independent oracle on random operands") {
  const char *kinds[] = {"add", "sub",    "mul",    "and",    "or",    "xor",
                         "shl", "shr",    "cmp.lt", "cmp.ge", "cmp.eq",
                         "cmp.ne"};
  const int widths[] = {8, 16, 32};
  Pcg32 rng(0xE7A1, 99);
  for (int iter = 0; iter < 2000; ++iter) {
    const char *kind = kinds[rng.below(std::size(kinds))];
    int width = widths[rng.below(3)];
    bool isSigned = rng.chance(50);
    HwType t = HwType::makeInt(width, isSigned);
    uint64_t mask = (width == 64) ? ~0ull : ((1ull << width) - 1);
    int64_t a = (int64_t)(((uint64_t)rng.next() << 32 | rng.next()) & mask);
    int64_t b = (int64_t)(((uint64_t)rng.next() << 32 | rng.next()) & mask);
    if (isSigned) { // canonical signed form
      a = oracle("add", a, 0, width, true);
      b = oracle("add", b, 0, width, true);
    }
    bool isCmp = std::string(kind).rfind("cmp.", 0) == 0;
    HwType rt = isCmp ? HwType::u1() : t;
    int64_t got = evalOperator(kind, {a, b}, rt, {t, t});
    int64_t want = oracle(kind, a, b, width, isSigned);
    CAPTURE(kind);
    CAPTURE(width);
    CAPTURE(isSigned);
    CAPTURE(a);
    CAPTURE(b);
    REQUIRE(got == want);
  }
}
