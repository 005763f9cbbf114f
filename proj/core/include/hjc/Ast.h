//===- Ast.h - Source language AST ------------------------------*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// AST for the .hj source language. The same node set serves as the parse
// result (SourceModule) and, after the type checker fills the HwType slots
// and monomorphizes generics away, as the typed AST handed to IR lowering.
//
//===----------------------------------------------------------------------===//

#ifndef HJC_AST_H
#define HJC_AST_H

#include "hjc/Diagnostics.h"
#include "hjc/Type.h"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hjc::ast {

/// A syntactic type: a builtin name (i8..u32, bool), a type parameter
/// reference, or a fixed-length array of a builtin/parameter element.
struct TypeExpr {
  std::string name;                  // empty iff array
  std::unique_ptr<TypeExpr> element; // non-null iff array
  int64_t length = 0;
  Span span;

  bool isArray() const { return element != nullptr; }
  TypeExpr clone() const;
  std::string str() const;
};

enum class BinOp {
  Add,
  Sub,
  Mul,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  And,
  Or,
  Xor,
  Shl,
  Shr
};
enum class UnOp { Neg, Not };

const char *binOpText(BinOp op);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  enum class Kind {
    IntLit,     // intVal, optional suffix in typeExpr
    BoolLit,    // intVal 0/1
    Var,        // name
    Call,       // name, children = args
    Index,      // name, children = {index}
    Binary,     // binOp, children = {lhs, rhs}
    Unary,      // unOp, children = {operand}
    Cast,       // children = {operand}, typeExpr = target
    ArrayLit,   // children = elements
    ArraySplat, // children = {element}, intVal = count
  };

  Kind kind;
  Span span;
  int64_t intVal = 0;
  std::string name;
  BinOp binOp = BinOp::Add;
  UnOp unOp = UnOp::Neg;
  std::optional<TypeExpr> typeExpr; // literal suffix or cast target
  std::vector<ExprPtr> children;

  /// Concrete type; filled by the type checker.
  HwType type;

  ExprPtr clone() const;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

struct Stmt {
  enum class Kind {
    Let,    // name, isMut, optional declType, value
    Assign, // name, value
    Store,  // name, index, value  (arr[i] = v)
    If,     // cond, thenBlock, elseBlock (possibly empty)
    While,  // cond, body
    For,    // name, forLo, forHi, body
    Return, // value
    ExprStmt,
  };

  Kind kind;
  Span span;
  std::string name;
  bool isMut = false;
  std::optional<TypeExpr> declType;
  ExprPtr value;
  ExprPtr cond;
  ExprPtr index;
  Block thenBlock;
  Block elseBlock;
  Block body;
  int64_t forLo = 0, forHi = 0;

  /// Declared/inferred type of a Let binding; filled by the type checker.
  HwType varType;

  StmtPtr clone() const;
};

Block cloneBlock(const Block &b);

struct Param {
  std::string name;
  TypeExpr type;
  Span span;
};

struct FunctionDecl {
  std::string name;
  std::vector<std::string> typeParams;
  std::vector<Param> params;
  TypeExpr returnType;
  Block body;
  Span span;

  FunctionDecl clone() const;
};

/// Parsed module; also the TypedAst shape once typeParams are all empty and
/// every node carries a concrete HwType.
struct SourceModule {
  std::vector<FunctionDecl> functions;

  FunctionDecl *find(const std::string &name) {
    for (auto &f : functions)
      if (f.name == name)
        return &f;
    return nullptr;
  }
  const FunctionDecl *find(const std::string &name) const {
    return const_cast<SourceModule *>(this)->find(name);
  }
};

/// Pretty-prints a module as parseable source text. parse(print(m)) is
/// structurally identical to m.
std::string printModule(const SourceModule &m);
std::string printFunction(const FunctionDecl &f);
std::string printExpr(const Expr &e);

} // namespace hjc::ast

#endif // HJC_AST_H
