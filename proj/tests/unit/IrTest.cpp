//===- IrTest.cpp - Textual IR round-trip and determinism -----------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "TestUtil.h"
#include "hjc/Emit.h"
#include "hjc/Passes.h"
#include "hjc/SchedDynamic.h"
#include "hjc/SchedStatic.h"
#include "hjc/Verifier.h"

#include "doctest.h"

using namespace hjc;
using namespace hjc::test;

namespace {

const char *kSample = R"(
fn main(a: u32, b: u32) -> u32 {
    let mut acc: u32 = 0u32;
    let mut arr: [u32; 4] = [0; 4];
    for i in 0..4 {
        arr[i] = a * i + b;
    }
    for i in 0..4 {
        if arr[i] > acc {
            acc = arr[i];
        }
    }
    return acc;
}
)";

} // namespace

TEST_CASE("printIr/parseIr round-trips every level") {
  auto core = compileCore(kSample);
  runPipeline(core, {"constfold", "dce"});

  auto roundTrip = [](const ir::IrModule &m) {
    std::string text = ir::printIr(m);
    ir::IrModule back = ir::parseIr(text);
    CHECK(ir::printIr(back) == text);
    CHECK(ir::structurallyEqual(m, back));
  };

  roundTrip(core);
  roundTrip(lowerToHandshake(core));
  auto fsmd = buildFsmd(core, {});
  roundTrip(fsmd);
  roundTrip(lowerFsmdToNetlist(fsmd));
}

TEST_CASE("printIr is byte-deterministic across independent compiles") {
  auto once = [] {
    auto core = compileCore(kSample);
    runPipeline(core, {"constfold", "dce"});
    return ir::printIr(lowerToHandshake(core)) + "\n---\n" +
           ir::printIr(buildFsmd(core, {}));
  };
  CHECK(once() == once());
}

TEST_CASE("parseIr reports located syntax errors") {
  auto rule = [](const std::string &text) {
    try {
      ir::parseIr(text);
    } catch (const CompileError &e) {
      REQUIRE(!e.diagnostics().empty());
      return e.diagnostics().front().rule;
    }
    return std::string("<no-error>");
  };
  CHECK(rule("func @f( {") == "IrSyntaxError");
  CHECK(rule("func @f() -> u32 level(core) {\n^bb0():\n  core.return(%7)\n}") ==
        "IrSyntaxError"); // undefined value reference
  CHECK(rule("garbage") == "IrSyntaxError");
}

TEST_CASE("structural equality ignores nothing but value numbering") {
  auto a = compileCore(kSample);
  auto b = compileCore(kSample);
  CHECK(ir::structurallyEqual(a, b));
  // Any semantic edit must break equality.
  ir::IrModule c = a;
  for (auto &op : c.functions[0].blocks[0].ops)
    if (op.opcode == "core.const") {
      op.attrs["value"] = ir::Attr((int64_t)999);
      break;
    }
  CHECK(!ir::structurallyEqual(a, c));
}

TEST_CASE("every pipeline stage verifies cleanly") {
  auto core = compileCore(kSample);
  CHECK(ir::verify(core).empty());
  runPipeline(core, {"constfold", "dce"});
  CHECK(ir::verify(core).empty());

  auto hs = lowerToHandshake(core);
  CHECK(ir::verify(hs).empty());
  auto fsmd = buildFsmd(core, {});
  CHECK(ir::verify(fsmd).empty());
  CHECK(ir::verify(lowerFsmdToNetlist(fsmd)).empty());
  CHECK(ir::verify(lowerHandshakeToNetlist(hs)).empty());
}
