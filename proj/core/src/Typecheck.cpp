//===- Typecheck.cpp - Type checking and monomorphization -----------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "hjc/Typecheck.h"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>

namespace hjc {
namespace {

using namespace ast;

struct VarInfo {
  HwType type;
  bool mut = false;
};

class Scope {
public:
  explicit Scope(Scope *parent = nullptr) : parent_(parent) {}

  const VarInfo *lookup(const std::string &name) const {
    auto it = vars_.find(name);
    if (it != vars_.end())
      return &it->second;
    return parent_ ? parent_->lookup(name) : nullptr;
  }

  void define(const std::string &name, VarInfo info) {
    vars_[name] = std::move(info);
  }

private:
  Scope *parent_;
  std::unordered_map<std::string, VarInfo> vars_;
};

std::optional<HwType> builtinType(const std::string &name) {
  if (name == "i8")
    return HwType::i8();
  if (name == "i16")
    return HwType::i16();
  if (name == "i32")
    return HwType::i32();
  if (name == "u1" || name == "bool")
    return HwType::u1();
  if (name == "u8")
    return HwType::u8();
  if (name == "u16")
    return HwType::u16();
  if (name == "u32")
    return HwType::u32();
  return std::nullopt;
}

class Checker {
public:
  explicit Checker(const SourceModule &in) : input_(in) {}

  TypedAst run() {
    checkUniqueNames();
    checkNoRecursion();

    // Non-generic functions are the roots; they keep their declaration
    // order. Generic instances are appended as they are first demanded.
    for (auto &f : input_.functions)
      if (f.typeParams.empty())
        rootNames_.push_back(f.name);

    // Pre-register root signatures so calls between non-generic functions
    // resolve regardless of declaration order.
    for (auto &name : rootNames_) {
      const FunctionDecl *f = input_.find(name);
      std::vector<HwType> paramTypes;
      for (auto &p : f->params) {
        HwType t = resolveType(p.type, {});
        if (t.isArray())
          fail("TypeError",
               "array-typed parameter '" + p.name +
                   "' not supported; arrays are local variables only",
               p.span);
        paramTypes.push_back(t);
      }
      signatures_[name] = {resolveType(f->returnType, {}), paramTypes};
    }

    for (auto &name : rootNames_) {
      FunctionDecl copy = input_.find(name)->clone();
      checkFunction(copy, {});
      output_.functions.push_back(std::move(copy));
    }
    for (auto &inst : instances_)
      output_.functions.push_back(std::move(inst));
    return std::move(output_);
  }

private:
  const SourceModule &input_;
  TypedAst output_;
  std::vector<std::string> rootNames_;
  std::vector<FunctionDecl> instances_;
  // mangled name -> return type, param types
  std::map<std::string, std::pair<HwType, std::vector<HwType>>> signatures_;
  std::set<std::string> instantiated_;

  [[noreturn]] void fail(const std::string &rule, const std::string &msg,
                         Span span) {
    throw CompileError(errorDiag(msg, span, rule));
  }

  void checkUniqueNames() {
    std::set<std::string> seen;
    for (auto &f : input_.functions)
      if (!seen.insert(f.name).second)
        fail("TypeError", "duplicate function name '" + f.name + "'", f.span);
  }

  void collectCalls(const Block &b, std::set<std::string> &out) {
    std::function<void(const Expr &)> walkExpr = [&](const Expr &e) {
      if (e.kind == Expr::Kind::Call)
        out.insert(e.name);
      for (auto &c : e.children)
        walkExpr(*c);
    };
    std::function<void(const Block &)> walkBlock = [&](const Block &blk) {
      for (auto &s : blk) {
        if (s->value)
          walkExpr(*s->value);
        if (s->cond)
          walkExpr(*s->cond);
        if (s->index)
          walkExpr(*s->index);
        walkBlock(s->thenBlock);
        walkBlock(s->elseBlock);
        walkBlock(s->body);
      }
    };
    walkBlock(b);
  }

  void checkNoRecursion() {
    // Name-level call graph; any cycle is a front-end error.
    std::map<std::string, std::set<std::string>> edges;
    for (auto &f : input_.functions)
      collectCalls(f.body, edges[f.name]);

    enum { White, Grey, Black };
    std::map<std::string, int> color;
    std::vector<std::string> path;
    std::function<void(const std::string &)> dfs = [&](const std::string &n) {
      color[n] = Grey;
      path.push_back(n);
      for (auto &callee : edges[n]) {
        if (!input_.find(callee))
          continue; // unknown callee reported during body checking
        if (color[callee] == Grey) {
          std::string cycle;
          auto it = std::find(path.begin(), path.end(), callee);
          for (; it != path.end(); ++it)
            cycle += *it + " -> ";
          cycle += callee;
          fail("RecursionError", "recursive call cycle: " + cycle,
               input_.find(callee)->span);
        }
        if (color[callee] == White)
          dfs(callee);
      }
      color[n] = Black;
      path.pop_back();
    };
    for (auto &f : input_.functions)
      if (color[f.name] == White)
        dfs(f.name);
  }

  //===--------------------------------------------------------------------===//
  // Types
  //===--------------------------------------------------------------------===//

  HwType resolveType(const TypeExpr &te,
                     const std::map<std::string, HwType> &bindings) {
    if (te.isArray()) {
      HwType elem = resolveType(*te.element, bindings);
      if (!elem.isInt() || elem.isArray())
        fail("TypeError", "array element must be an integer type", te.span);
      if (te.length < 1 || te.length > 1024)
        fail("NonConstArrayLength",
             "array length must be in 1..1024, got " +
                 std::to_string(te.length),
             te.span);
      return HwType::makeArray(elem, (uint32_t)te.length);
    }
    if (auto t = builtinType(te.name))
      return *t;
    auto it = bindings.find(te.name);
    if (it != bindings.end())
      return it->second;
    fail("UnknownIdentifier", "unknown type '" + te.name + "'", te.span);
  }

  //===--------------------------------------------------------------------===//
  // Function bodies
  //===--------------------------------------------------------------------===//

  struct FnCtx {
    std::map<std::string, HwType> bindings;
    HwType returnType;
  };

  void checkFunction(FunctionDecl &f,
                     const std::map<std::string, HwType> &bindings) {
    FnCtx ctx;
    ctx.bindings = bindings;
    ctx.returnType = resolveType(f.returnType, bindings);
    if (!ctx.returnType.isInt())
      fail("TypeError", "function return type must be an integer type",
           f.returnType.span);

    Scope scope;
    std::vector<HwType> paramTypes;
    for (auto &p : f.params) {
      HwType t = resolveType(p.type, bindings);
      if (t.isArray())
        fail("TypeError",
             "array-typed parameter '" + p.name +
                 "' not supported; arrays are local variables only",
             p.span);
      scope.define(p.name, {t, false});
      paramTypes.push_back(t);
      rewriteTypeExpr(p.type, bindings);
    }
    rewriteTypeExpr(f.returnType, bindings);
    signatures_[f.name] = {ctx.returnType, paramTypes};

    checkBlock(f.body, scope, ctx);
    if (!blockReturns(f.body))
      fail("TypeError",
           "function '" + f.name + "' does not return on every path", f.span);
  }

  /// Replaces type-parameter names with their concrete spellings so a
  /// monomorphized instance prints as valid generic-free source.
  void rewriteTypeExpr(TypeExpr &te,
                       const std::map<std::string, HwType> &bindings) {
    if (te.isArray()) {
      rewriteTypeExpr(*te.element, bindings);
      return;
    }
    auto it = bindings.find(te.name);
    if (it != bindings.end())
      te.name = it->second.str();
  }

  bool blockReturns(const Block &b) {
    for (auto &s : b) {
      if (s->kind == Stmt::Kind::Return)
        return true;
      if (s->kind == Stmt::Kind::If && !s->elseBlock.empty() &&
          blockReturns(s->thenBlock) && blockReturns(s->elseBlock))
        return true;
    }
    return false;
  }

  void checkBlock(Block &b, Scope &scope, FnCtx &ctx) {
    for (auto &s : b)
      checkStmt(*s, scope, ctx);
  }

  void checkStmt(Stmt &s, Scope &scope, FnCtx &ctx) {
    switch (s.kind) {
    case Stmt::Kind::Let: {
      std::optional<HwType> expected;
      if (s.declType)
        expected = resolveType(*s.declType, ctx.bindings);
      HwType t = checkExpr(*s.value, scope, ctx, expected);
      if (expected && t != *expected)
        fail("TypeError",
             "initializer type " + t.str() + " does not match declared " +
                 expected->str(),
             s.span);
      if (s.declType)
        rewriteTypeExpr(*s.declType, ctx.bindings);
      s.varType = t;
      scope.define(s.name, {t, s.isMut});
      break;
    }
    case Stmt::Kind::Assign: {
      const VarInfo *v = scope.lookup(s.name);
      if (!v)
        fail("UnknownIdentifier", "unknown variable '" + s.name + "'", s.span);
      if (!v->mut)
        fail("TypeError", "assignment to immutable variable '" + s.name + "'",
             s.span);
      if (v->type.isArray())
        fail("TypeError", "cannot reassign array variable '" + s.name + "'",
             s.span);
      HwType t = checkExpr(*s.value, scope, ctx, v->type);
      if (t != v->type)
        fail("TypeError",
             "assignment type " + t.str() + " does not match variable type " +
                 v->type.str(),
             s.span);
      break;
    }
    case Stmt::Kind::Store: {
      const VarInfo *v = scope.lookup(s.name);
      if (!v)
        fail("UnknownIdentifier", "unknown variable '" + s.name + "'", s.span);
      if (!v->type.isArray())
        fail("TypeError", "'" + s.name + "' is not an array", s.span);
      if (!v->mut)
        fail("TypeError", "store to immutable array '" + s.name + "'", s.span);
      HwType it = checkExpr(*s.index, scope, ctx, std::nullopt);
      if (!it.isInt() || it.isSigned())
        fail("ArrayIndexTypeError",
             "array index must be an unsigned integer type, got " + it.str(),
             s.index->span);
      HwType vt = checkExpr(*s.value, scope, ctx, v->type.elementType());
      if (vt != v->type.elementType())
        fail("TypeError",
             "stored value type " + vt.str() + " does not match element type " +
                 v->type.elementType().str(),
             s.value->span);
      break;
    }
    case Stmt::Kind::If: {
      HwType t = checkExpr(*s.cond, scope, ctx, HwType::u1());
      if (!t.isBool())
        fail("TypeError", "condition must be bool, got " + t.str(),
             s.cond->span);
      Scope thenScope(&scope), elseScope(&scope);
      checkBlock(s.thenBlock, thenScope, ctx);
      checkBlock(s.elseBlock, elseScope, ctx);
      break;
    }
    case Stmt::Kind::While: {
      HwType t = checkExpr(*s.cond, scope, ctx, HwType::u1());
      if (!t.isBool())
        fail("TypeError", "condition must be bool, got " + t.str(),
             s.cond->span);
      Scope bodyScope(&scope);
      checkBlock(s.body, bodyScope, ctx);
      break;
    }
    case Stmt::Kind::For: {
      if (s.forLo < 0 || s.forHi < 0 || s.forLo > s.forHi)
        fail("TypeError", "for bounds must satisfy 0 <= lo <= hi", s.span);
      Scope bodyScope(&scope);
      bodyScope.define(s.name, {HwType::u32(), false});
      s.varType = HwType::u32();
      checkBlock(s.body, bodyScope, ctx);
      break;
    }
    case Stmt::Kind::Return: {
      HwType t = checkExpr(*s.value, scope, ctx, ctx.returnType);
      if (t != ctx.returnType)
        fail("TypeError",
             "return type " + t.str() + " does not match declared " +
                 ctx.returnType.str(),
             s.span);
      break;
    }
    case Stmt::Kind::ExprStmt:
      checkExpr(*s.value, scope, ctx, std::nullopt);
      break;
    }
  }

  /// An unsuffixed integer literal (possibly under unary minus) whose type
  /// floats until constrained.
  static bool isFreeLiteral(const Expr &e) {
    if (e.kind == Expr::Kind::IntLit)
      return !e.typeExpr.has_value();
    if (e.kind == Expr::Kind::Unary && e.unOp == UnOp::Neg)
      return isFreeLiteral(*e.children[0]);
    return false;
  }

  HwType checkExpr(Expr &e, Scope &scope, FnCtx &ctx,
                   std::optional<HwType> expected) {
    HwType t = checkExprImpl(e, scope, ctx, expected);
    e.type = t;
    return t;
  }

  HwType checkExprImpl(Expr &e, Scope &scope, FnCtx &ctx,
                       std::optional<HwType> expected) {
    switch (e.kind) {
    case Expr::Kind::IntLit: {
      HwType t = HwType::i32();
      if (e.typeExpr)
        t = resolveType(*e.typeExpr, ctx.bindings);
      else if (expected && expected->isInt())
        t = *expected;
      // Literals wrap into the chosen width (two's-complement semantics).
      return t;
    }
    case Expr::Kind::BoolLit:
      return HwType::u1();
    case Expr::Kind::Var: {
      const VarInfo *v = scope.lookup(e.name);
      if (!v)
        fail("UnknownIdentifier", "unknown variable '" + e.name + "'", e.span);
      return v->type;
    }
    case Expr::Kind::Index: {
      const VarInfo *v = scope.lookup(e.name);
      if (!v)
        fail("UnknownIdentifier", "unknown variable '" + e.name + "'", e.span);
      if (!v->type.isArray())
        fail("TypeError", "'" + e.name + "' is not an array", e.span);
      HwType it = checkExpr(*e.children[0], scope, ctx, std::nullopt);
      if (!it.isInt() || it.isSigned())
        fail("ArrayIndexTypeError",
             "array index must be an unsigned integer type, got " + it.str(),
             e.children[0]->span);
      return v->type.elementType();
    }
    case Expr::Kind::Unary: {
      HwType t = checkExpr(*e.children[0], scope, ctx, expected);
      if (!t.isInt())
        fail("TypeError", "unary operand must be an integer type", e.span);
      return t;
    }
    case Expr::Kind::Binary:
      return checkBinary(e, scope, ctx, expected);
    case Expr::Kind::Cast: {
      HwType target = resolveType(*e.typeExpr, ctx.bindings);
      if (!target.isInt())
        fail("TypeError", "cast target must be an integer type", e.span);
      HwType src = checkExpr(*e.children[0], scope, ctx, std::nullopt);
      if (!src.isInt())
        fail("TypeError", "cast operand must be an integer type", e.span);
      rewriteTypeExpr(*e.typeExpr, ctx.bindings);
      return target;
    }
    case Expr::Kind::Call:
      return checkCall(e, scope, ctx);
    case Expr::Kind::ArrayLit: {
      std::optional<HwType> elemExpected;
      if (expected && expected->isArray())
        elemExpected = expected->elementType();
      HwType elem = checkExpr(*e.children[0], scope, ctx, elemExpected);
      if (!elem.isInt())
        fail("TypeError", "array element must be an integer type", e.span);
      for (size_t i = 1; i < e.children.size(); ++i) {
        HwType t = checkExpr(*e.children[i], scope, ctx, elem);
        if (t != elem)
          fail("TypeError",
               "array element type " + t.str() + " does not match " +
                   elem.str(),
               e.children[i]->span);
      }
      if (e.children.size() > 1024)
        fail("NonConstArrayLength", "array literal longer than 1024", e.span);
      return HwType::makeArray(elem, (uint32_t)e.children.size());
    }
    case Expr::Kind::ArraySplat: {
      std::optional<HwType> elemExpected;
      if (expected && expected->isArray())
        elemExpected = expected->elementType();
      HwType elem = checkExpr(*e.children[0], scope, ctx, elemExpected);
      if (!elem.isInt())
        fail("TypeError", "array element must be an integer type", e.span);
      if (e.intVal < 1 || e.intVal > 1024)
        fail("NonConstArrayLength",
             "array length must be in 1..1024, got " + std::to_string(e.intVal),
             e.span);
      return HwType::makeArray(elem, (uint32_t)e.intVal);
    }
    }
    fail("TypeError", "unreachable expression kind", e.span);
  }

  HwType checkBinary(Expr &e, Scope &scope, FnCtx &ctx,
                     std::optional<HwType> expected) {
    Expr &lhs = *e.children[0], &rhs = *e.children[1];
    bool isCmp = false, isShift = false;
    switch (e.binOp) {
    case BinOp::Eq:
    case BinOp::Ne:
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge:
      isCmp = true;
      break;
    case BinOp::Shl:
    case BinOp::Shr:
      isShift = true;
      break;
    default:
      break;
    }

    std::optional<HwType> operandExpected =
        (isCmp || isShift) ? std::nullopt : expected;

    HwType tl, tr;
    if (isShift) {
      tl = checkExpr(lhs, scope, ctx, expected);
      // Shift amount may be any integer type; a free literal takes the
      // operand's type.
      tr = checkExpr(rhs, scope, ctx, tl);
      if (!tl.isInt() || !tr.isInt())
        fail("TypeError", "shift operands must be integer types", e.span);
      return tl;
    }

    // Let the non-literal side fix the width, then check the literal side
    // against it.
    if (isFreeLiteral(lhs) && !isFreeLiteral(rhs)) {
      tr = checkExpr(rhs, scope, ctx, operandExpected);
      tl = checkExpr(lhs, scope, ctx, tr);
    } else {
      tl = checkExpr(lhs, scope, ctx, operandExpected);
      tr = checkExpr(rhs, scope, ctx, tl);
    }
    if (!tl.isInt() || !tr.isInt())
      fail("TypeError", "operands must be integer types", e.span);
    if (tl != tr)
      fail("TypeError",
           "operand type mismatch: " + tl.str() + " vs " + tr.str(), e.span);
    return isCmp ? HwType::u1() : tl;
  }

  HwType checkCall(Expr &e, Scope &scope, FnCtx &ctx) {
    const FunctionDecl *callee = input_.find(e.name);
    if (!callee)
      fail("UnknownIdentifier", "unknown function '" + e.name + "'", e.span);
    if (e.children.size() != callee->params.size())
      fail("TypeError",
           "call to '" + e.name + "' expects " +
               std::to_string(callee->params.size()) + " arguments, got " +
               std::to_string(e.children.size()),
           e.span);

    // First pass: check non-literal arguments to drive deduction.
    std::vector<std::optional<HwType>> argTypes(e.children.size());
    std::map<std::string, HwType> deduced;
    auto isTypeParam = [&](const std::string &n) {
      return std::find(callee->typeParams.begin(), callee->typeParams.end(),
                       n) != callee->typeParams.end();
    };

    for (size_t i = 0; i < e.children.size(); ++i) {
      const TypeExpr &pt = callee->params[i].type;
      if (!pt.isArray() && isTypeParam(pt.name)) {
        if (!isFreeLiteral(*e.children[i])) {
          HwType t = checkExpr(*e.children[i], scope, ctx, std::nullopt);
          argTypes[i] = t;
          if (!t.isInt())
            fail("TypeError",
                 "type argument for '" + pt.name +
                     "' must be an integer type, got " + t.str(),
                 e.children[i]->span);
          auto [it, inserted] = deduced.emplace(pt.name, t);
          if (!inserted && it->second != t)
            fail("TypeError",
                 "conflicting deduction for type parameter '" + pt.name +
                     "': " + it->second.str() + " vs " + t.str(),
                 e.span);
        }
      }
    }
    for (auto &tp : callee->typeParams)
      if (!deduced.count(tp))
        fail("TypeError",
             "cannot deduce type parameter '" + tp + "' in call to '" +
                 e.name + "'",
             e.span);

    std::string mangled = e.name;
    for (auto &tp : callee->typeParams)
      mangled += "$" + deduced.at(tp).str();

    instantiate(*callee, deduced, mangled);

    auto &sig = signatures_.at(mangled);
    for (size_t i = 0; i < e.children.size(); ++i) {
      HwType expected = sig.second[i];
      HwType got = argTypes[i] ? *argTypes[i]
                               : checkExpr(*e.children[i], scope, ctx, expected);
      if (got != expected)
        fail("TypeError",
             "argument " + std::to_string(i + 1) + " of '" + e.name +
                 "' has type " + got.str() + ", expected " + expected.str(),
             e.children[i]->span);
    }
    e.name = mangled;
    return sig.first;
  }

  void instantiate(const FunctionDecl &templ,
                   const std::map<std::string, HwType> &bindings,
                   const std::string &mangled) {
    if (instantiated_.count(mangled))
      return;
    instantiated_.insert(mangled);
    if (templ.typeParams.empty())
      return; // non-generic root; checked from run()
    FunctionDecl inst = templ.clone();
    inst.name = mangled;
    inst.typeParams.clear();
    checkFunction(inst, bindings);
    instances_.push_back(std::move(inst));
  }
};

} // namespace

TypedAst typecheck(const ast::SourceModule &module) {
  return Checker(module).run();
}

} // namespace hjc
