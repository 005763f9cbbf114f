//===- Fuzz.cpp - Seeded program generation and campaign driver -----------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Generation is by construction: the generator builds a typed program
// directly, so every emitted program parses, typechecks and terminates.
// Loops are constant-bounded (or the counter-increment while pattern),
// array indices are masked to power-of-two lengths, and arrays live only at
// function scope so the interpreter and the hardware backends agree on
// memory initialization.
//
//===----------------------------------------------------------------------===//

#include "hjc/Fuzz.h"

#include "hjc/Parser.h"
#include "hjc/Typecheck.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hjc {

namespace {

std::string typeName(HwType t) {
  std::string s = t.isSigned() ? "i" : "u";
  return s + std::to_string(t.width());
}

struct Var {
  std::string name;
  HwType type;
  bool assignable;
};

struct Arr {
  std::string name;
  HwType elem;
  int len;
};

struct Helper {
  std::string name;
  std::vector<HwType> params;
  HwType ret;
  bool generic; // single type parameter; params/ret share it
};

class Gen {
public:
  Gen(const FuzzConfig &cfg, int index)
      : cfg_(cfg), rng_(cfg.seed, 2u * (uint64_t)index) {}

  FuzzCase run(int index) {
    FuzzCase out;
    makeHelpers();
    makeMain();
    out.source = os_.str();
    out.paramTypes = paramTypes_;
    Pcg32 irng(cfg_.seed, 2u * (uint64_t)index + 1u);
    for (int i = 0; i < cfg_.inputsPerProgram; ++i) {
      std::vector<int64_t> vec;
      for (HwType t : paramTypes_)
        vec.push_back(t.wrap((int64_t)(((uint64_t)irng.next() << 32) |
                                       irng.next())));
      out.inputs.push_back(std::move(vec));
    }
    return out;
  }

private:
  const FuzzConfig &cfg_;
  Pcg32 rng_;
  std::ostringstream os_;
  int indent_ = 0;
  std::vector<Var> vars_;
  std::vector<Arr> arrs_;
  std::vector<Helper> helpers_;
  std::vector<HwType> paramTypes_;
  int nextId_ = 0;

  HwType scalarType() {
    static const int widths[3] = {8, 16, 32};
    return HwType::makeInt(widths[rng_.below(3)], rng_.below(2) == 0);
  }

  std::string fresh(const char *prefix) {
    return prefix + std::to_string(nextId_++);
  }

  void line(const std::string &s) {
    for (int i = 0; i < indent_; ++i)
      os_ << "    ";
    os_ << s << "\n";
  }

  std::string literal(HwType t) {
    uint32_t bits = rng_.next();
    if (rng_.chance(30))
      bits &= 7; // small constants keep loops and shifts interesting
    uint64_t mask = (t.width() == 32) ? 0xffffffffull
                                      : ((1ull << t.width()) - 1);
    if (t.isSigned())
      mask >>= 1; // literal tokens are non-negative
    return std::to_string(bits & mask) + typeName(t);
  }

  std::string expr(HwType t, int depth) {
    std::vector<const Var *> sameType;
    for (auto &v : vars_)
      if (v.type == t)
        sameType.push_back(&v);

    enum { kVar, kLit, kBin, kCast, kLoad, kCall };
    std::vector<int> menu = {kLit};
    if (!sameType.empty())
      menu.insert(menu.end(), 3, kVar);
    if (depth > 0) {
      menu.insert(menu.end(), 3, kBin);
      menu.push_back(kCast);
      for (auto &a : arrs_)
        if (a.elem == t) {
          menu.push_back(kLoad);
          break;
        }
      for (auto &h : helpers_)
        if (h.generic || h.ret == t) {
          menu.push_back(kCall);
          break;
        }
    }
    switch (menu[rng_.below((uint32_t)menu.size())]) {
    case kVar:
      return sameType[rng_.below((uint32_t)sameType.size())]->name;
    case kBin: {
      static const char *ops[] = {"+", "-", "&", "|", "^", "<<", ">>", "*"};
      const char *op = ops[rng_.below(cfg_.mul ? 8 : 7)];
      return "(" + expr(t, depth - 1) + " " + op + " " + expr(t, depth - 1) +
             ")";
    }
    case kCast: {
      HwType u = scalarType();
      return "(" + expr(u, depth - 1) + " as " + typeName(t) + ")";
    }
    case kLoad: {
      std::vector<const Arr *> cand;
      for (auto &a : arrs_)
        if (a.elem == t)
          cand.push_back(&a);
      const Arr *a = cand[rng_.below((uint32_t)cand.size())];
      return a->name + "[" + index(*a, depth - 1) + "]";
    }
    case kCall: {
      std::vector<const Helper *> cand;
      for (auto &h : helpers_)
        if (h.generic || h.ret == t)
          cand.push_back(&h);
      const Helper *h = cand[rng_.below((uint32_t)cand.size())];
      std::string call = h->name + "(";
      size_t n = h->params.size();
      for (size_t i = 0; i < n; ++i)
        call += (i ? ", " : "") + expr(h->generic ? t : h->params[i],
                                       depth - 1);
      return call + ")";
    }
    default:
      return literal(t);
    }
  }

  std::string index(const Arr &a, int depth) {
    return "(" + expr(HwType::u32(), depth) + " & " +
           std::to_string(a.len - 1) + "u32)";
  }

  std::string condition(int depth) {
    if (rng_.chance(10))
      return rng_.chance(50) ? "true" : "false";
    HwType t = scalarType();
    static const char *cmps[] = {"==", "!=", "<", "<=", ">", ">="};
    return "(" + expr(t, depth) + " " + cmps[rng_.below(6)] + " " +
           expr(t, depth) + ")";
  }

  /// Emits one statement; returns true when the statement terminated the
  /// block (an early return).
  bool stmt(int loopNest) {
    enum { kLet, kAssign, kStore, kIf, kFor, kWhile, kReturn };
    std::vector<int> menu = {kLet, kLet, kLet};
    for (auto &v : vars_)
      if (v.assignable) {
        menu.insert(menu.end(), 2, kAssign);
        break;
      }
    if (!arrs_.empty())
      menu.insert(menu.end(), 2, kStore);
    menu.push_back(kIf);
    if (cfg_.forLoops && loopNest < cfg_.maxLoopNest)
      menu.push_back(kFor);
    if (cfg_.whileLoops && loopNest < cfg_.maxLoopNest)
      menu.push_back(kWhile);
    if (loopNest == 0 && indent_ > 1 && rng_.chance(25))
      menu.push_back(kReturn);

    switch (menu[rng_.below((uint32_t)menu.size())]) {
    case kLet: {
      HwType t = scalarType();
      std::string name = fresh("v");
      line("let mut " + name + ": " + typeName(t) + " = " +
           expr(t, cfg_.maxExprDepth) + ";");
      vars_.push_back({name, t, true});
      return false;
    }
    case kAssign: {
      std::vector<const Var *> cand;
      for (auto &v : vars_)
        if (v.assignable)
          cand.push_back(&v);
      const Var *v = cand[rng_.below((uint32_t)cand.size())];
      line(v->name + " = " + expr(v->type, cfg_.maxExprDepth) + ";");
      return false;
    }
    case kStore: {
      const Arr &a = arrs_[rng_.below((uint32_t)arrs_.size())];
      line(a.name + "[" + index(a, cfg_.maxExprDepth - 1) + "] = " +
           expr(a.elem, cfg_.maxExprDepth - 1) + ";");
      return false;
    }
    case kIf: {
      line("if " + condition(cfg_.maxExprDepth - 1) + " {");
      block(loopNest, 1 + rng_.below(3));
      if (rng_.chance(50)) {
        line("} else {");
        block(loopNest, 1 + rng_.below(3));
      }
      line("}");
      return false;
    }
    case kFor: {
      std::string iv = fresh("f");
      int bound = 1 + (int)rng_.below(8);
      line("for " + iv + " in 0.." + std::to_string(bound) + " {");
      size_t mark = vars_.size();
      vars_.push_back({iv, HwType::u32(), false});
      block(loopNest + 1, 1 + rng_.below(3));
      vars_.resize(mark);
      line("}");
      return false;
    }
    case kWhile: {
      std::string cv = fresh("w");
      int bound = 1 + (int)rng_.below(8);
      line("let mut " + cv + ": u32 = 0u32;");
      line("while " + cv + " < " + std::to_string(bound) + "u32 {");
      size_t mark = vars_.size();
      vars_.push_back({cv, HwType::u32(), false}); // loop counter: read-only
      ++indent_;
      int n = 1 + (int)rng_.below(2);
      for (int i = 0; i < n; ++i)
        if (stmt(loopNest + 1))
          break;
      line(cv + " = " + cv + " + 1u32;");
      --indent_;
      vars_.resize(mark);
      line("}");
      return false;
    }
    case kReturn:
      line("return " + expr(retType_, cfg_.maxExprDepth - 1) + ";");
      return true;
    }
    return false;
  }

  void block(int loopNest, uint32_t stmts) {
    ++indent_;
    size_t mark = vars_.size();
    for (uint32_t i = 0; i < stmts; ++i)
      if (stmt(loopNest))
        break;
    vars_.resize(mark);
    --indent_;
  }

  void makeHelpers() {
    if (cfg_.generics && rng_.chance(50)) {
      line("fn pass<T>(x: T) -> T { return x; }");
      helpers_.push_back({"pass", {HwType::i32()}, HwType::i32(), true});
      if (rng_.chance(50)) {
        line("fn fold<T>(x: T, y: T) -> T { return ((x + y) ^ (x << y)); }");
        helpers_.push_back(
            {"fold", {HwType::i32(), HwType::i32()}, HwType::i32(), true});
      }
      os_ << "\n";
    }
    if (rng_.chance(60)) {
      HwType t = scalarType();
      std::string name = fresh("h");
      vars_.push_back({"x", t, false});
      vars_.push_back({"y", t, false});
      std::string body = expr(t, 2);
      vars_.clear();
      line("fn " + name + "(x: " + typeName(t) + ", y: " + typeName(t) +
           ") -> " + typeName(t) + " { return " + body + "; }");
      helpers_.push_back({name, {t, t}, t, false});
      os_ << "\n";
    }
  }

  HwType retType_;

  void makeMain() {
    retType_ = scalarType();
    int nParams = 1 + (int)rng_.below(3);
    std::string sig;
    for (int i = 0; i < nParams; ++i) {
      HwType t = scalarType();
      std::string name = "p" + std::to_string(i);
      sig += (i ? ", " : "") + name + ": " + typeName(t);
      paramTypes_.push_back(t);
      vars_.push_back({name, t, false});
    }
    os_ << "fn main(" << sig << ") -> " << typeName(retType_) << " {\n";
    indent_ = 1;
    if (cfg_.arrays) {
      int nArrays = (int)rng_.below(3);
      static const int lens[3] = {4, 8, 16};
      for (int i = 0; i < nArrays; ++i) {
        HwType elem = scalarType();
        std::string name = fresh("a");
        int len = lens[rng_.below(3)];
        line("let mut " + name + ": [" + typeName(elem) + "; " +
             std::to_string(len) + "] = [0; " + std::to_string(len) + "];");
        arrs_.push_back({name, elem, len});
      }
    }
    uint32_t n = 1 + rng_.below((uint32_t)cfg_.maxStmtsPerBlock);
    bool returned = false;
    for (uint32_t i = 0; i < n && !returned; ++i)
      returned = stmt(0);
    if (!returned)
      line("return " + expr(retType_, cfg_.maxExprDepth) + ";");
    indent_ = 0;
    os_ << "}\n";
  }
};

} // namespace

std::string CampaignReport::summary() const {
  std::ostringstream os;
  os << "programs: " << programs << ", runs: " << runsTotal
     << ", traps skipped: " << trapsSkipped << ", mismatches: " << mismatches
     << " -> " << (pass() ? "pass" : "fail");
  if (!failures.empty())
    os << " (first failure: program " << failures[0].index << ")";
  os << "\n";
  return os.str();
}

std::string CampaignReport::json() const {
  std::ostringstream os;
  os << "{\n  \"programs\": " << programs << ",\n  \"runs\": " << runsTotal
     << ",\n  \"traps_skipped\": " << trapsSkipped
     << ",\n  \"mismatches\": " << mismatches << ",\n  \"failures\": [";
  for (size_t i = 0; i < failures.size(); ++i)
    os << (i ? "," : "") << "\n    {\"index\": " << failures[i].index
       << ", \"note\": \"" << failures[i].note << "\"}";
  os << (failures.empty() ? "" : "\n  ") << "]\n}\n";
  return os.str();
}

FuzzCase generateCase(const FuzzConfig &config, int index) {
  return Gen(config, index).run(index);
}

std::string generateProgram(const FuzzConfig &config, int index) {
  return generateCase(config, index).source;
}

CampaignReport runCampaign(const FuzzConfig &config) {
  CampaignReport rep;
  for (int i = 0; i < config.count; ++i) {
    FuzzCase fc = generateCase(config, i);
    CheckReport cr = checkEquivalence(
        fc.source, "fuzz_" + std::to_string(i) + ".hj", "main", fc.inputs,
        config.backendStatic, config.backendDynamic, {}, config.fault);
    ++rep.programs;
    for (auto &r : cr.runs) {
      ++rep.runsTotal;
      if (r.backend == "interp" && r.status != "ok")
        ++rep.trapsSkipped;
    }
    if (!cr.pass) {
      ++rep.mismatches;
      FuzzFailure f;
      f.index = i;
      f.note = cr.notes.empty() ? "mismatch" : cr.notes[0];
      f.program = fc.source;
      if (rep.failures.empty()) {
        try {
          f.shrunk = shrink(fc.source, fc.inputs, config.backendStatic,
                            config.backendDynamic, config.fault);
        } catch (const std::invalid_argument &) {
          f.shrunk = fc.source;
        }
      }
      rep.failures.push_back(std::move(f));
    }
  }
  return rep;
}

std::string shrink(const std::string &source,
                   const std::vector<std::vector<int64_t>> &inputs,
                   bool runStatic, bool runDynamic, FaultHook fault) {
  auto fails = [&](const std::string &text) {
    try {
      CheckReport cr = checkEquivalence(text, "shrink.hj", "main", inputs,
                                        runStatic, runDynamic, {}, fault);
      // An empty run list means the candidate did not compile; shrinking
      // must preserve the original failure, not trade it for a parse error.
      return !cr.runs.empty() && !cr.pass;
    } catch (...) {
      return false;
    }
  };
  if (!fails(source))
    throw std::invalid_argument("shrink: input does not fail");

  std::vector<std::string> lines;
  {
    std::istringstream is(source);
    std::string l;
    while (std::getline(is, l))
      lines.push_back(l);
  }
  bool progress = true;
  while (progress) {
    progress = false;
    for (size_t i = 0; i < lines.size(); ++i) {
      std::vector<std::string> cand = lines;
      cand.erase(cand.begin() + (long)i);
      std::string text;
      for (auto &l : cand)
        text += l + "\n";
      if (fails(text)) {
        lines = std::move(cand);
        progress = true;
        break;
      }
    }
  }
  std::string out;
  for (auto &l : lines)
    out += l + "\n";
  return out;
}

} // namespace hjc
