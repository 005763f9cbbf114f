//===- Ast.cpp - AST clone and pretty-printer -----------------------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "hjc/Ast.h"

#include <sstream>

namespace hjc::ast {

TypeExpr TypeExpr::clone() const {
  TypeExpr t;
  t.name = name;
  t.length = length;
  t.span = span;
  if (element)
    t.element = std::make_unique<TypeExpr>(element->clone());
  return t;
}

std::string TypeExpr::str() const {
  if (isArray())
    return "[" + element->str() + "; " + std::to_string(length) + "]";
  return name;
}

const char *binOpText(BinOp op) {
  switch (op) {
  case BinOp::Add:
    return "+";
  case BinOp::Sub:
    return "-";
  case BinOp::Mul:
    return "*";
  case BinOp::Eq:
    return "==";
  case BinOp::Ne:
    return "!=";
  case BinOp::Lt:
    return "<";
  case BinOp::Le:
    return "<=";
  case BinOp::Gt:
    return ">";
  case BinOp::Ge:
    return ">=";
  case BinOp::And:
    return "&";
  case BinOp::Or:
    return "|";
  case BinOp::Xor:
    return "^";
  case BinOp::Shl:
    return "<<";
  case BinOp::Shr:
    return ">>";
  }
  return "?";
}

ExprPtr Expr::clone() const {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->span = span;
  e->intVal = intVal;
  e->name = name;
  e->binOp = binOp;
  e->unOp = unOp;
  if (typeExpr)
    e->typeExpr = typeExpr->clone();
  for (auto &c : children)
    e->children.push_back(c->clone());
  e->type = type;
  return e;
}

StmtPtr Stmt::clone() const {
  auto s = std::make_unique<Stmt>();
  s->kind = kind;
  s->span = span;
  s->name = name;
  s->isMut = isMut;
  if (declType)
    s->declType = declType->clone();
  if (value)
    s->value = value->clone();
  if (cond)
    s->cond = cond->clone();
  if (index)
    s->index = index->clone();
  s->thenBlock = cloneBlock(thenBlock);
  s->elseBlock = cloneBlock(elseBlock);
  s->body = cloneBlock(body);
  s->forLo = forLo;
  s->forHi = forHi;
  s->varType = varType;
  return s;
}

Block cloneBlock(const Block &b) {
  Block out;
  out.reserve(b.size());
  for (auto &s : b)
    out.push_back(s->clone());
  return out;
}

FunctionDecl FunctionDecl::clone() const {
  FunctionDecl f;
  f.name = name;
  f.typeParams = typeParams;
  for (auto &p : params)
    f.params.push_back({p.name, p.type.clone(), p.span});
  f.returnType = returnType.clone();
  f.body = cloneBlock(body);
  f.span = span;
  return f;
}

namespace {

class AstPrinter {
public:
  std::string out;
  int indent = 0;

  void line(const std::string &s) {
    for (int i = 0; i < indent; ++i)
      out += "  ";
    out += s;
    out += "\n";
  }

  // Parenthesizes nested operator expressions fully; parentheses carry no
  // structure, so the round-trip stays identical.
  std::string expr(const Expr &e) {
    switch (e.kind) {
    case Expr::Kind::IntLit: {
      std::string s = std::to_string(e.intVal);
      if (e.typeExpr)
        s += e.typeExpr->name;
      return s;
    }
    case Expr::Kind::BoolLit:
      return e.intVal ? "true" : "false";
    case Expr::Kind::Var:
      return e.name;
    case Expr::Kind::Call: {
      std::string s = e.name + "(";
      for (size_t i = 0; i < e.children.size(); ++i) {
        if (i)
          s += ", ";
        s += expr(*e.children[i]);
      }
      return s + ")";
    }
    case Expr::Kind::Index:
      return e.name + "[" + expr(*e.children[0]) + "]";
    case Expr::Kind::Binary:
      return "(" + expr(*e.children[0]) + " " + binOpText(e.binOp) + " " +
             expr(*e.children[1]) + ")";
    case Expr::Kind::Unary:
      return std::string("(") + (e.unOp == UnOp::Neg ? "-" : "!") +
             expr(*e.children[0]) + ")";
    case Expr::Kind::Cast:
      return "(" + expr(*e.children[0]) + " as " + e.typeExpr->str() + ")";
    case Expr::Kind::ArrayLit: {
      std::string s = "[";
      for (size_t i = 0; i < e.children.size(); ++i) {
        if (i)
          s += ", ";
        s += expr(*e.children[i]);
      }
      return s + "]";
    }
    case Expr::Kind::ArraySplat:
      return "[" + expr(*e.children[0]) + "; " + std::to_string(e.intVal) +
             "]";
    }
    return "?";
  }

  void stmt(const Stmt &s) {
    switch (s.kind) {
    case Stmt::Kind::Let: {
      std::string l = "let ";
      if (s.isMut)
        l += "mut ";
      l += s.name;
      if (s.declType)
        l += ": " + s.declType->str();
      l += " = " + expr(*s.value) + ";";
      line(l);
      break;
    }
    case Stmt::Kind::Assign:
      line(s.name + " = " + expr(*s.value) + ";");
      break;
    case Stmt::Kind::Store:
      line(s.name + "[" + expr(*s.index) + "] = " + expr(*s.value) + ";");
      break;
    case Stmt::Kind::If: {
      line("if " + expr(*s.cond) + " {");
      block(s.thenBlock);
      if (!s.elseBlock.empty()) {
        line("} else {");
        block(s.elseBlock);
      }
      line("}");
      break;
    }
    case Stmt::Kind::While:
      line("while " + expr(*s.cond) + " {");
      block(s.body);
      line("}");
      break;
    case Stmt::Kind::For:
      line("for " + s.name + " in " + std::to_string(s.forLo) + ".." +
           std::to_string(s.forHi) + " {");
      block(s.body);
      line("}");
      break;
    case Stmt::Kind::Return:
      line("return " + expr(*s.value) + ";");
      break;
    case Stmt::Kind::ExprStmt:
      line(expr(*s.value) + ";");
      break;
    }
  }

  void block(const Block &b) {
    ++indent;
    for (auto &s : b)
      stmt(*s);
    --indent;
  }

  void function(const FunctionDecl &f) {
    std::string h = "fn " + f.name;
    if (!f.typeParams.empty()) {
      h += "<";
      for (size_t i = 0; i < f.typeParams.size(); ++i) {
        if (i)
          h += ", ";
        h += f.typeParams[i];
      }
      h += ">";
    }
    h += "(";
    for (size_t i = 0; i < f.params.size(); ++i) {
      if (i)
        h += ", ";
      h += f.params[i].name + ": " + f.params[i].type.str();
    }
    h += ") -> " + f.returnType.str() + " {";
    line(h);
    block(f.body);
    line("}");
  }
};

} // namespace

std::string printExpr(const Expr &e) { return AstPrinter().expr(e); }

std::string printFunction(const FunctionDecl &f) {
  AstPrinter p;
  p.function(f);
  return p.out;
}

std::string printModule(const SourceModule &m) {
  AstPrinter p;
  for (size_t i = 0; i < m.functions.size(); ++i) {
    if (i)
      p.out += "\n";
    p.function(m.functions[i]);
  }
  return p.out;
}

} // namespace hjc::ast
