//===- FrontendTest.cpp - Parser and typechecker tests --------------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "TestUtil.h"
#include "hjc/Parser.h"
#include "hjc/Typecheck.h"

#include "doctest.h"

#include <functional>

using namespace hjc;

namespace {

std::string firstRule(const std::function<void()> &f) {
  try {
    f();
  } catch (const CompileError &e) {
    REQUIRE(!e.diagnostics().empty());
    return e.diagnostics().front().rule;
  }
  return "<no-error>";
}

} // namespace

TEST_CASE("parse accepts the full statement surface") {
  const char *src = R"(
fn helper<T>(x: T, y: T) -> T {
    return x + y;
}
fn main(a: u32, b: i16) -> u32 {
    let mut arr: [u32; 8] = [0; 8];
    let c: u32 = (a << 2u32) ^ (a as u32);
    for i in 0..8 {
        arr[i] = c + i;
    }
    let mut n: u32 = 0u32;
    while n < 4u32 {
        n = n + 1u32;
    }
    if b < 0i16 {
        return helper(c, n);
    }
    return arr[(a & 7u32)];
}
)";
  auto m = parse(src, "surface.hj");
  CHECK(m.functions.size() == 2);
  CHECK_NOTHROW(typecheck(m));
}

TEST_CASE("parser rejects malformed input with located syntax diagnostics") {
  // Five distinct malformed texts; each must throw with rule "syntax" and a
  // 1-based source position.
  const char *bad[] = {
      "fn main(a: u32) -> u32 { return a + ; }",     // missing operand
      "fn main(a: u32) -> u32 { let x u32 = a; }",   // missing ':'
      "fn main(a: u32) -> u32 { return a; ",         // unterminated body
      "fn main(a: u32) -> u32 { return a %% a; }",   // unknown operator
      "fn 5main(a: u32) -> u32 { return a; }",       // bad identifier
  };
  for (const char *src : bad) {
    CAPTURE(src);
    try {
      parse(src, "bad.hj");
      FAIL_CHECK("expected CompileError");
    } catch (const CompileError &e) {
      REQUIRE(!e.diagnostics().empty());
      CHECK(e.diagnostics().front().rule == "syntax");
      CHECK(e.diagnostics().front().span.line >= 1);
    }
  }
}

TEST_CASE("typechecker rejects ill-typed programs with named rules") {
  auto rule = [](const char *src) {
    return firstRule([&] { typecheck(parse(src, "t.hj")); });
  };
  CHECK(rule("fn main(a: u32, b: u16) -> u32 { return a + b; }") ==
        "TypeError");
  CHECK(rule("fn main(a: u32) -> u32 { return z; }") == "UnknownIdentifier");
  CHECK(rule("fn main(a: u32) -> u32 { return main(a); }") ==
        "RecursionError");
  CHECK(rule("fn main(a: u32) -> u32 {\n"
             "  let mut x: [u32; 3] = [0; 3];\n"
             "  return x[a];\n}") == "NonConstArrayLength");
  CHECK(rule("fn main(a: u32) -> u32 { let x: u32 = a; x = a; return x; }") ==
        "TypeError");
}

TEST_CASE("generic helpers monomorphize per distinct type tuple") {
  const char *src = R"(
fn pick<T>(c: u1, x: T, y: T) -> T {
    if c == 1u1 { return x; }
    return y;
}
fn main(a: u32, b: i8) -> u32 {
    let s: i8 = pick(a > 4u32, b, 0i8 - b);
    return pick(a > 9u32, a, s as u32);
}
)";
  auto typed = typecheck(parse(src, "g.hj"));
  int instances = 0;
  for (const auto &f : typed.functions)
    if (f.name.rfind("pick$", 0) == 0)
      ++instances;
  CHECK(instances == 2); // pick$i8 and pick$u32
}

TEST_CASE("unreachable generic functions produce no instances") {
  const char *src = R"(
fn unused<T>(x: T) -> T { return x; }
fn main(a: u32) -> u32 { return a; }
)";
  auto typed = typecheck(parse(src, "u.hj"));
  CHECK(typed.functions.size() == 1);
  CHECK(typed.functions[0].name == "main");
}
