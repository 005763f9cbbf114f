//===- Check.cpp - Differential equivalence harness -----------------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "hjc/Check.h"

#include "hjc/Emit.h"
#include "hjc/Interp.h"
#include "hjc/LowerToCore.h"
#include "hjc/NetlistSim.h"
#include "hjc/Parser.h"
#include "hjc/Passes.h"
#include "hjc/SchedDynamic.h"
#include "hjc/Typecheck.h"
#include "hjc/Verifier.h"

#include <algorithm>
#include <iomanip>
#include <sstream>

using namespace hjc;
using namespace hjc::ir;

namespace {

constexpr int64_t kStaticWatchdog = 2000000;

void flipFirstMux(Netlist &nl) {
  // Target the widest mux: narrow ones are control plumbing whose swap is
  // often masked, a wide one steers a datapath value.
  CombNode *best = nullptr;
  for (auto &node : nl.nodes)
    if (node.kind == CombKind::Mux &&
        (!best || nl.width(node.output) > nl.width(best->output)))
      best = &node;
  if (best)
    std::swap(best->inputs[1], best->inputs[2]);
}

void dropFirstOpaqueBuffer(IrFunction &fn) {
  auto &ops = fn.blocks[0].ops;
  for (size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].opcode != "handshake.buffer" || !ops[i].intAttr("opaque"))
      continue;
    ValueId inV = ops[i].operands[0], outV = ops[i].results[0];
    ops.erase(ops.begin() + (long)i);
    for (auto &op : ops)
      for (ValueId &o : op.operands)
        if (o == outV)
          o = inV;
    return;
  }
}

void shiftFirstRegWrite(FsmdDesign &d) {
  for (auto &w : d.regWrites)
    if (w.state + 1 < (int)d.states.size()) {
      ++w.state;
      return;
    }
}

struct Compiled {
  bool ok = false;
  std::string error;
  IrFunction *fn = nullptr;
  IrModule netlistModule;
};

std::string diagText(const std::vector<Diagnostic> &diags) {
  std::string s;
  for (auto &d : diags)
    s += d.str() + "\n";
  return s;
}

} // namespace

namespace hjc {

std::string CheckReport::table() const {
  std::ostringstream os;
  os << std::left << std::setw(9) << "backend" << std::setw(7) << "input"
     << std::setw(14) << "result" << std::setw(9) << "cycles" << "status\n";
  for (auto &r : runs) {
    os << std::left << std::setw(9) << r.backend << std::setw(7)
       << (r.inputIndex < 0 ? std::string("-") : std::to_string(r.inputIndex))
       << std::setw(14)
       << (r.hasResult ? std::to_string(r.result) : std::string("-"))
       << std::setw(9)
       << (r.cycles < 0 ? std::string("-") : std::to_string(r.cycles))
       << r.status << "\n";
  }
  os << "verdict: " << (pass ? "pass" : "fail") << "\n";
  return os.str();
}

std::string CheckReport::json() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < runs.size(); ++i) {
    const RunRecord &r = runs[i];
    os << (i ? "," : "") << "\n  {\"backend\": \"" << r.backend
       << "\", \"input\": " << r.inputIndex << ", \"result\": "
       << (r.hasResult ? std::to_string(r.result) : std::string("null"))
       << ", \"cycles\": "
       << (r.cycles < 0 ? std::string("null") : std::to_string(r.cycles))
       << ", \"status\": \"" << r.status << "\"}";
  }
  os << "\n]\n";
  return os.str();
}

CheckReport checkEquivalence(const std::string &source,
                             const std::string &fileName,
                             const std::string &entry,
                             const std::vector<std::vector<int64_t>> &inputs,
                             bool runStatic, bool runDynamic,
                             const ResourceSpec &spec, FaultHook fault) {
  CheckReport rep;
  rep.pass = true;

  IrModule core;
  try {
    core = lowerToCore(typecheck(parse(source, fileName)), entry);
    inlineAllCalls(core);
    runPipeline(core, {"constfold", "dce"});
  } catch (const CompileError &e) {
    rep.pass = false;
    rep.notes.push_back(e.what());
    return rep;
  }
  if (auto diags = verify(core); !diags.empty()) {
    rep.pass = false;
    rep.notes.push_back("core verifier: " + diagText(diags));
    return rep;
  }
  const IrFunction *coreFn = core.find(entry);
  for (auto &vec : inputs)
    if (vec.size() != coreFn->paramTypes.size()) {
      rep.pass = false;
      rep.notes.push_back("input arity mismatch: function takes " +
                          std::to_string(coreFn->paramTypes.size()) +
                          " arguments, got " + std::to_string(vec.size()));
      return rep;
    }

  Compiled st, dy;
  if (runStatic) {
    IrModule fsmd = buildFsmd(core, spec);
    if (fault == FaultHook::ScheduleOffByOne)
      shiftFirstRegWrite(*fsmd.find(entry)->fsmd);
    if (auto diags = verify(fsmd); !diags.empty()) {
      st.error = "fsmd verifier: " + diagText(diags);
    } else {
      st.netlistModule = lowerFsmdToNetlist(fsmd);
      if (fault == FaultHook::MuxSelectFlip)
        flipFirstMux(*st.netlistModule.find(entry)->netlist);
      if (auto diags = verify(st.netlistModule); !diags.empty())
        st.error = "netlist verifier: " + diagText(diags);
      else {
        st.ok = true;
        st.fn = st.netlistModule.find(entry);
      }
    }
    if (!st.ok) {
      rep.pass = false;
      rep.notes.push_back(st.error);
      rep.runs.push_back({"static", -1, false, 0, -1, "verifier-fail"});
    }
  }
  if (runDynamic) {
    IrModule hs = lowerToHandshake(core);
    if (fault == FaultHook::DropBuffer)
      dropFirstOpaqueBuffer(*hs.find(entry));
    if (auto diags = verify(hs); !diags.empty()) {
      dy.error = "handshake verifier: " + diagText(diags);
    } else {
      dy.netlistModule = lowerHandshakeToNetlist(hs);
      if (fault == FaultHook::MuxSelectFlip && !runStatic)
        flipFirstMux(*dy.netlistModule.find(entry)->netlist);
      if (auto diags = verify(dy.netlistModule); !diags.empty())
        dy.error = "netlist verifier: " + diagText(diags);
      else {
        dy.ok = true;
        dy.fn = dy.netlistModule.find(entry);
      }
    }
    if (!dy.ok) {
      rep.pass = false;
      rep.notes.push_back(dy.error);
      rep.runs.push_back({"dynamic", -1, false, 0, -1, "verifier-fail"});
    }
  }

  std::vector<std::string> argNames = coreFn->paramNames;
  if (argNames.size() != coreFn->paramTypes.size()) {
    argNames.clear();
    for (size_t i = 0; i < coreFn->paramTypes.size(); ++i)
      argNames.push_back("arg" + std::to_string(i));
  }

  for (size_t ii = 0; ii < inputs.size(); ++ii) {
    InterpResult gold = interpret(core, entry, inputs[ii]);
    if (gold.trapped) {
      rep.runs.push_back({"interp", (int)ii, false, 0, -1,
                          "trap:" + gold.trapKind});
      continue; // trapping inputs are excluded from hardware comparison
    }
    rep.runs.push_back({"interp", (int)ii, true, gold.value, -1, "ok"});

    // The interpreter's work estimate bounds the hardware run: a static
    // schedule spends a handful of cycles per executed op, so a generous
    // multiple of the op count detects a hung design quickly instead of
    // burning the full fallback watchdog.
    int64_t bound = std::min<int64_t>(
        kStaticWatchdog, 16 * (gold.opsExecuted + gold.blocksExecuted) + 2000);
    int64_t staticCycles = -1;
    if (st.ok) {
      SimResult r = simulateStatic(*st.fn->netlist, inputs[ii],
                                   st.fn->paramTypes, st.fn->returnType,
                                   bound);
      bool match = r.status == "ok" && r.result == gold.value;
      rep.runs.push_back(
          {"static", (int)ii, r.status == "ok", r.result, r.cycles, r.status});
      if (!match) {
        rep.pass = false;
        rep.notes.push_back("static mismatch on input " + std::to_string(ii));
      }
      staticCycles = r.cycles;
    }
    if (dy.ok) {
      int64_t watchdog =
          staticCycles >= 0 ? 10 * staticCycles + 10000 : bound;
      SimResult r = simulateDynamic(*dy.fn->netlist, inputs[ii],
                                    dy.fn->paramTypes, argNames,
                                    dy.fn->returnType, watchdog);
      bool match = r.status == "ok" && r.result == gold.value;
      rep.runs.push_back(
          {"dynamic", (int)ii, r.status == "ok", r.result, r.cycles, r.status});
      if (!match) {
        rep.pass = false;
        rep.notes.push_back("dynamic mismatch on input " + std::to_string(ii));
      }
    }
  }
  return rep;
}

} // namespace hjc
