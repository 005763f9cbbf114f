//===- hjc.cpp - Command-line driver --------------------------------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Subcommands: build (compile to Verilog or dump an intermediate stage),
// lower-from (resume compilation from textual IR), sim (run one program on
// the cycle-accurate simulator), check (differential equivalence), fuzz
// (seeded random campaign). Exit codes: 0 success, 1 diagnostics or
// mismatch, 2 usage/config error.
//
//===----------------------------------------------------------------------===//

#include "hjc/Ast.h"
#include "hjc/Check.h"
#include "hjc/Emit.h"
#include "hjc/Fuzz.h"
#include "hjc/Interp.h"
#include "hjc/LowerToCore.h"
#include "hjc/NetlistSim.h"
#include "hjc/Parser.h"
#include "hjc/Passes.h"
#include "hjc/SchedDynamic.h"
#include "hjc/SchedStatic.h"
#include "hjc/Sha256.h"
#include "hjc/Typecheck.h"
#include "hjc/Verifier.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace hjc;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string readFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw StageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw StageError("cannot write " + path);
  out << text;
}

std::string diagText(const std::vector<Diagnostic> &diags) {
  std::string s;
  for (auto &d : diags)
    s += d.str() + "\n";
  return s;
}

struct Options {
  std::string input;
  std::string entry = "main";
  std::string backend = "static";
  std::string configPath;
  std::vector<std::string> resources;
  ResourceSpec spec;
  std::string modulePrefix;
};

/// Parses the `key = value` config file. Unknown keys are usage errors so
/// typos fail loudly.
void applyConfig(Options &opt) {
  if (opt.configPath.empty())
    return;
  std::istringstream in(readFile(opt.configPath));
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    size_t h = line.find('#');
    if (h != std::string::npos)
      line = line.substr(0, h);
    size_t eq = line.find('=');
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    if (trim(line).empty())
      continue;
    if (eq == std::string::npos)
      throw UsageError(opt.configPath + ":" + std::to_string(lineNo) +
                       ": expected `key = value`");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    try {
      if (key == "resources.mul")
        opt.spec.mulLimit = std::stoi(val);
      else if (key == "chain_depth")
        opt.spec.chainDepth = std::stoi(val);
      else if (key == "reset_polarity") {
        if (val != "active_high") // reserved: only the default is accepted
          throw UsageError(opt.configPath + ": reset_polarity: only "
                           "`active_high` is supported");
      } else if (key == "module_prefix")
        opt.modulePrefix = val;
      else
        throw UsageError(opt.configPath + ": unknown key `" + key + "`");
    } catch (const std::invalid_argument &) {
      throw UsageError(opt.configPath + ": bad value for `" + key + "`");
    }
  }
}

void applyResources(Options &opt) {
  for (auto &r : opt.resources) {
    size_t eq = r.find('=');
    if (eq == std::string::npos)
      throw UsageError("--resources expects name=count, got `" + r + "`");
    std::string name = r.substr(0, eq);
    if (name != "mul")
      throw UsageError("--resources: unknown unit `" + name + "`");
    try {
      opt.spec.mulLimit = std::stoi(r.substr(eq + 1));
    } catch (const std::invalid_argument &) {
      throw UsageError("--resources: bad count in `" + r + "`");
    }
  }
}

/// All intermediate artifacts of one compilation, computed lazily per stage.
struct Build {
  ast::SourceModule sourceAst;
  ir::IrModule core, coreOpt, backendIr, netlist;
  std::string verilog;
};

void verifyOrThrow(const ir::IrModule &m, const char *stage) {
  if (auto diags = verify(m); !diags.empty())
    throw StageError(std::string(stage) + " verifier:\n" + diagText(diags));
}

Build compile(const std::string &source, const Options &opt,
              const std::string &fileName, const std::string &lastStage) {
  auto after = [&](const char *s) { return lastStage == s; };
  Build b;
  b.sourceAst = parse(source, fileName);
  if (after("ast"))
    return b;
  TypedAst typed = typecheck(b.sourceAst);
  b.core = lowerToCore(typed, opt.entry);
  inlineAllCalls(b.core);
  verifyOrThrow(b.core, "core");
  if (after("core"))
    return b;
  b.coreOpt = b.core;
  runPipeline(b.coreOpt, {"constfold", "dce"});
  verifyOrThrow(b.coreOpt, "core");
  if (after("core-opt"))
    return b;
  if (opt.backend == "static")
    b.backendIr = buildFsmd(b.coreOpt, opt.spec);
  else
    b.backendIr = lowerToHandshake(b.coreOpt);
  verifyOrThrow(b.backendIr, opt.backend == "static" ? "fsmd" : "handshake");
  if (after("fsmd") || after("handshake"))
    return b;
  b.netlist = opt.backend == "static" ? lowerFsmdToNetlist(b.backendIr)
                                      : lowerHandshakeToNetlist(b.backendIr);
  verifyOrThrow(b.netlist, "netlist");
  if (after("netlist"))
    return b;
  EmitConfig ec;
  ec.modulePrefix = opt.modulePrefix;
  ec.inputSha256 = sha256Hex(source);
  b.verilog = printVerilog(b.netlist, ec);
  return b;
}

std::string stageText(const Build &b, const std::string &stage) {
  if (stage == "ast")
    return ast::printModule(b.sourceAst);
  if (stage == "core")
    return ir::printIr(b.core);
  if (stage == "core-opt")
    return ir::printIr(b.coreOpt);
  if (stage == "fsmd" || stage == "handshake")
    return ir::printIr(b.backendIr);
  if (stage == "netlist")
    return ir::printIr(b.netlist);
  return b.verilog;
}

int cmdBuild(Options &opt, const std::string &emitStage,
             const std::string &outPath, const std::string &dumpDir) {
  if (opt.backend != "static" && opt.backend != "dynamic")
    throw UsageError("--backend must be static or dynamic");
  if (emitStage == "fsmd" && opt.backend != "static")
    throw UsageError("--emit fsmd requires --backend static");
  if (emitStage == "handshake" && opt.backend != "dynamic")
    throw UsageError("--emit handshake requires --backend dynamic");

  std::string source = readFile(opt.input);
  std::string last = dumpDir.empty() ? emitStage : "verilog";
  Build b = compile(source, opt, opt.input, last);

  if (!dumpDir.empty()) {
    std::filesystem::create_directories(dumpDir);
    auto p = [&](const char *f) { return dumpDir + "/" + f; };
    writeFile(p("00_ast.txt"), ast::printModule(b.sourceAst));
    writeFile(p("01_core.ir"), ir::printIr(b.core));
    writeFile(p("02_core_opt.ir"), ir::printIr(b.coreOpt));
    writeFile(p(opt.backend == "static" ? "03_fsmd.ir" : "03_handshake.ir"),
              ir::printIr(b.backendIr));
    writeFile(p("04_netlist.ir"), ir::printIr(b.netlist));
    writeFile(p("05_out.v"), b.verilog);
  }
  std::string text = stageText(b, emitStage);
  if (emitStage == "verilog") {
    std::string out = outPath.empty() ? opt.entry + ".v" : outPath;
    writeFile(out, text);
  } else if (!outPath.empty()) {
    writeFile(outPath, text);
  } else {
    std::cout << text;
  }
  return 0;
}

int cmdLowerFrom(Options &opt, const std::string &outPath) {
  ir::IrModule m = ir::parseIr(readFile(opt.input));
  verifyOrThrow(m, "input");
  if (m.level == ir::Level::Core) {
    runPipeline(m, {"constfold", "dce"});
    m = opt.backend == "static" ? buildFsmd(m, opt.spec)
                                : lowerToHandshake(m);
    verifyOrThrow(m, opt.backend.c_str());
  }
  if (m.level == ir::Level::Fsmd || m.level == ir::Level::Handshake) {
    m = m.level == ir::Level::Fsmd ? lowerFsmdToNetlist(m)
                                   : lowerHandshakeToNetlist(m);
    verifyOrThrow(m, "netlist");
  }
  if (m.level != ir::Level::Netlist)
    throw StageError(std::string("unsupported input level: ") +
                     ir::levelName(m.level));
  EmitConfig ec;
  ec.modulePrefix = opt.modulePrefix;
  ec.inputSha256 = sha256Hex(readFile(opt.input));
  std::string text = printVerilog(m, ec);
  if (outPath.empty())
    std::cout << text;
  else
    writeFile(outPath, text);
  return 0;
}

/// Parses one input vector: comma-separated `name=value` pairs (or bare
/// values taken positionally) matched against the entry parameter names.
std::vector<int64_t> parseVector(const std::string &line,
                                 const std::vector<std::string> &names) {
  std::vector<std::optional<int64_t>> slots(names.size());
  size_t positional = 0;
  std::istringstream in(line);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    size_t a = tok.find_first_not_of(" \t\r");
    if (a == std::string::npos)
      continue;
    size_t z = tok.find_last_not_of(" \t\r");
    tok = tok.substr(a, z - a + 1);
    size_t eq = tok.find('=');
    size_t slot;
    std::string val;
    if (eq == std::string::npos) {
      slot = positional++;
      val = tok;
    } else {
      std::string name = tok.substr(0, eq);
      val = tok.substr(eq + 1);
      slot = names.size();
      for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name)
          slot = i;
      if (slot == names.size())
        throw UsageError("unknown argument name `" + name + "`");
    }
    if (slot >= slots.size())
      throw UsageError("too many input values in `" + line + "`");
    try {
      slots[slot] = std::stoll(val);
    } catch (const std::invalid_argument &) {
      throw UsageError("bad integer `" + val + "`");
    }
  }
  std::vector<int64_t> out;
  for (size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i])
      throw UsageError("missing value for argument `" + names[i] + "`");
    out.push_back(*slots[i]);
  }
  return out;
}

std::vector<std::vector<int64_t>>
parseInputs(const std::string &spec, const std::vector<std::string> &names) {
  std::vector<std::vector<int64_t>> out;
  if (std::filesystem::exists(spec)) {
    std::istringstream in(readFile(spec));
    std::string line;
    while (std::getline(in, line)) {
      std::string t = line;
      size_t h = t.find('#');
      if (h != std::string::npos)
        t = t.substr(0, h);
      if (t.find_first_not_of(" \t\r") == std::string::npos)
        continue;
      out.push_back(parseVector(t, names));
    }
  } else {
    out.push_back(parseVector(spec, names));
  }
  if (out.empty())
    throw UsageError("no input vectors in " + spec);
  return out;
}

int cmdSim(Options &opt, const std::string &inputsSpec,
           const std::string &tracePath) {
  std::string source = readFile(opt.input);
  Build b = compile(source, opt, opt.input, "verilog");
  const ir::IrFunction *fn = b.netlist.find(opt.entry);
  auto inputs = parseInputs(inputsSpec, fn->paramNames);
  int rc = 0;
  for (auto &vec : inputs) {
    InterpResult gold = interpret(b.coreOpt, opt.entry, vec);
    int64_t watchdog =
        gold.trapped ? 2000000
                     : 16 * (gold.opsExecuted + gold.blocksExecuted) + 2000;
    std::string vcd;
    std::string *vcdOut = tracePath.empty() ? nullptr : &vcd;
    SimResult r =
        opt.backend == "static"
            ? simulateStatic(*fn->netlist, vec, fn->paramTypes, fn->returnType,
                             watchdog, vcdOut)
            : simulateDynamic(*fn->netlist, vec, fn->paramTypes, fn->paramNames,
                              fn->returnType, watchdog, vcdOut);
    if (r.status == "ok")
      std::cout << "result=" << r.result << " cycles=" << r.cycles << "\n";
    else {
      std::cout << "status=" << r.status << "\n";
      rc = 1;
    }
    if (vcdOut)
      writeFile(tracePath, vcd);
  }
  return rc;
}

int cmdCheck(Options &opt, const std::string &inputsSpec,
             const std::string &backends, const std::string &jsonPath) {
  std::string source = readFile(opt.input);
  // Parameter names come from the typechecked entry function.
  ir::IrModule core = lowerToCore(typecheck(parse(source, opt.input)),
                                  opt.entry);
  auto inputs = parseInputs(inputsSpec, core.find(opt.entry)->paramNames);
  bool st = backends.find("static") != std::string::npos;
  bool dy = backends.find("dynamic") != std::string::npos;
  if (!st && !dy)
    throw UsageError("--backends must name static and/or dynamic");
  CheckReport rep = checkEquivalence(source, opt.input, opt.entry, inputs, st,
                                     dy, opt.spec);
  std::cout << rep.table();
  if (!jsonPath.empty())
    writeFile(jsonPath, rep.json());
  return rep.pass ? 0 : 1;
}

int cmdFuzz(const FuzzConfig &cfg, const std::string &jsonPath) {
  CampaignReport rep = runCampaign(cfg);
  std::cout << rep.summary();
  if (!rep.failures.empty()) {
    std::cout << "--- first failing program (" << rep.failures[0].note
              << ") ---\n"
              << rep.failures[0].program;
    if (!rep.failures[0].shrunk.empty())
      std::cout << "--- shrunk reproducer ---\n" << rep.failures[0].shrunk;
  }
  if (!jsonPath.empty())
    writeFile(jsonPath, rep.json());
  return rep.pass() ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"hjc: a small HLS compiler with static and dynamic back ends"};
  app.require_subcommand(1);

  Options opt;
  std::string emitStage = "verilog", outPath, dumpDir, inputsSpec, tracePath;
  std::string backends = "static,dynamic", jsonPath;
  FuzzConfig fuzzCfg;
  std::string faultName = "none";

  auto addCommon = [&](CLI::App *c, bool needsInput = true) {
    if (needsInput)
      c->add_option("input", opt.input, "input file")->required();
    c->add_option("--entry", opt.entry, "entry function (default main)");
    c->add_option("--config", opt.configPath, "key = value config file");
    c->add_option("--resources", opt.resources,
                  "resource overrides, e.g. mul=2");
  };

  CLI::App *build = app.add_subcommand("build", "compile to Verilog");
  addCommon(build);
  build->add_option("--backend", opt.backend, "static | dynamic");
  build
      ->add_option("--emit", emitStage,
                   "ast | core | core-opt | fsmd | handshake | netlist | "
                   "verilog")
      ->check(CLI::IsMember({"ast", "core", "core-opt", "fsmd", "handshake",
                             "netlist", "verilog"}));
  build->add_option("-o,--output", outPath, "output path");
  build->add_option("--dump-dir", dumpDir, "write every stage into this dir");

  CLI::App *lowerFrom =
      app.add_subcommand("lower-from", "resume from textual IR");
  addCommon(lowerFrom);
  lowerFrom->add_option("--backend", opt.backend, "static | dynamic");
  lowerFrom->add_option("-o,--output", outPath, "output path");

  CLI::App *sim = app.add_subcommand("sim", "simulate one program");
  addCommon(sim);
  sim->add_option("--backend", opt.backend, "static | dynamic");
  sim->add_option("--inputs", inputsSpec, "vector `a=1,b=2` or a file")
      ->required();
  sim->add_option("--trace", tracePath, "write a VCD waveform");

  CLI::App *check = app.add_subcommand("check", "differential equivalence");
  addCommon(check);
  check->add_option("--inputs", inputsSpec, "vector `a=1,b=2` or a file")
      ->required();
  check->add_option("--backends", backends, "comma list: static,dynamic");
  check->add_option("--report-json", jsonPath, "write a JSON report");

  CLI::App *fuzz = app.add_subcommand("fuzz", "seeded differential campaign");
  fuzz->add_option("--seed", fuzzCfg.seed, "campaign seed");
  fuzz->add_option("--count", fuzzCfg.count, "number of programs");
  fuzz->add_option("--inputs", fuzzCfg.inputsPerProgram,
                   "input vectors per program");
  fuzz->add_option("--backends", backends, "comma list: static,dynamic");
  fuzz->add_flag("--no-arrays", [&](int64_t) { fuzzCfg.arrays = false; },
                 "disable array generation");
  fuzz->add_flag("--no-generics", [&](int64_t) { fuzzCfg.generics = false; },
                 "disable generic helpers");
  fuzz->add_flag("--no-while", [&](int64_t) { fuzzCfg.whileLoops = false; },
                 "disable while loops");
  fuzz->add_flag("--no-for", [&](int64_t) { fuzzCfg.forLoops = false; },
                 "disable for loops");
  fuzz->add_flag("--no-mul", [&](int64_t) { fuzzCfg.mul = false; },
                 "disable multiplication");
  fuzz->add_option("--fault", faultName,
                   "inject a fault: none | mux-select-flip | drop-buffer | "
                   "schedule-off-by-one")
      ->check(CLI::IsMember({"none", "mux-select-flip", "drop-buffer",
                             "schedule-off-by-one"}));
  fuzz->add_option("--report-json", jsonPath, "write a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    applyConfig(opt);
    applyResources(opt);
    if (build->parsed())
      return cmdBuild(opt, emitStage, outPath, dumpDir);
    if (lowerFrom->parsed())
      return cmdLowerFrom(opt, outPath);
    if (sim->parsed())
      return cmdSim(opt, inputsSpec, tracePath);
    if (check->parsed())
      return cmdCheck(opt, inputsSpec, backends, jsonPath);
    if (fuzz->parsed()) {
      fuzzCfg.backendStatic = backends.find("static") != std::string::npos;
      fuzzCfg.backendDynamic = backends.find("dynamic") != std::string::npos;
      if (!fuzzCfg.backendStatic && !fuzzCfg.backendDynamic)
        throw UsageError("--backends must name static and/or dynamic");
      fuzzCfg.fault = faultName == "mux-select-flip" ? FaultHook::MuxSelectFlip
                      : faultName == "drop-buffer"   ? FaultHook::DropBuffer
                      : faultName == "schedule-off-by-one"
                          ? FaultHook::ScheduleOffByOne
                          : FaultHook::None;
      return cmdFuzz(fuzzCfg, jsonPath);
    }
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CompileError &e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const StageError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
