//===- bench.cpp - Compile and simulation benchmarks ----------------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Wall-clock benchmarks over the bundled corpus: full compilation on each
// back end and one representative netlist simulation per program.
//
//===----------------------------------------------------------------------===//

#include "hjc/Emit.h"
#include "hjc/LowerToCore.h"
#include "hjc/NetlistSim.h"
#include "hjc/Parser.h"
#include "hjc/Passes.h"
#include "hjc/SchedDynamic.h"
#include "hjc/SchedStatic.h"
#include "hjc/Sha256.h"
#include "hjc/Typecheck.h"

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

using namespace hjc;

namespace {

struct Program {
  const char *name;
  std::vector<int64_t> args;
};

const Program kCorpus[] = {
    {"gcd", {48, 18}},
    {"fib", {24}},
    {"dot", {1, 1}},
    {"fir", {3, 2}},
    {"matvec", {2, 5}},
};

std::string corpusSource(const std::string &name) {
  std::ifstream in(std::string(HJC_CORPUS_DIR) + "/" + name + ".hj");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ir::IrModule optimizedCore(const std::string &source, const char *name) {
  auto core = lowerToCore(typecheck(parse(source, name)), "main");
  inlineAllCalls(core);
  runPipeline(core, {"constfold", "dce"});
  return core;
}

void BM_BuildStatic(benchmark::State &state, const Program &p) {
  std::string src = corpusSource(p.name);
  for (auto _ : state) {
    auto nl = lowerFsmdToNetlist(buildFsmd(optimizedCore(src, p.name), {}));
    EmitConfig ec;
    ec.inputSha256 = sha256Hex(src);
    benchmark::DoNotOptimize(printVerilog(nl, ec));
  }
}

void BM_BuildDynamic(benchmark::State &state, const Program &p) {
  std::string src = corpusSource(p.name);
  for (auto _ : state) {
    auto nl = lowerHandshakeToNetlist(lowerToHandshake(optimizedCore(src, p.name)));
    EmitConfig ec;
    ec.inputSha256 = sha256Hex(src);
    benchmark::DoNotOptimize(printVerilog(nl, ec));
  }
}

void BM_SimStatic(benchmark::State &state, const Program &p) {
  std::string src = corpusSource(p.name);
  auto nl = lowerFsmdToNetlist(buildFsmd(optimizedCore(src, p.name), {}));
  const ir::IrFunction *fn = nl.find("main");
  for (auto _ : state)
    benchmark::DoNotOptimize(simulateStatic(*fn->netlist, p.args,
                                            fn->paramTypes, fn->returnType,
                                            2000000));
}

void BM_SimDynamic(benchmark::State &state, const Program &p) {
  std::string src = corpusSource(p.name);
  auto nl = lowerHandshakeToNetlist(lowerToHandshake(optimizedCore(src, p.name)));
  const ir::IrFunction *fn = nl.find("main");
  for (auto _ : state)
    benchmark::DoNotOptimize(simulateDynamic(*fn->netlist, p.args,
                                             fn->paramTypes, fn->paramNames,
                                             fn->returnType, 2000000));
}

struct Register {
  Register() {
    for (const Program &p : kCorpus) {
      benchmark::RegisterBenchmark((std::string("build_static/") + p.name).c_str(),
                                   BM_BuildStatic, p);
      benchmark::RegisterBenchmark((std::string("build_dynamic/") + p.name).c_str(),
                                   BM_BuildDynamic, p);
      benchmark::RegisterBenchmark((std::string("sim_static/") + p.name).c_str(),
                                   BM_SimStatic, p);
      benchmark::RegisterBenchmark((std::string("sim_dynamic/") + p.name).c_str(),
                                   BM_SimDynamic, p);
    }
  }
} registerAll;

} // namespace

BENCHMARK_MAIN();
