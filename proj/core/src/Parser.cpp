//===- Parser.cpp - .hj lexer and recursive-descent parser ----------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "hjc/Parser.h"

#include <cctype>
#include <unordered_map>
#include <unordered_set>

namespace hjc {
namespace {

using namespace ast;

enum class Tok {
  Eof,
  Ident,
  Int,   // value in intVal, optional type suffix in text ("i16" etc.)
  KwFn,
  KwLet,
  KwMut,
  KwIf,
  KwElse,
  KwWhile,
  KwFor,
  KwIn,
  KwReturn,
  KwTrue,
  KwFalse,
  KwAs,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Comma,
  Colon,
  Semi,
  Arrow,  // ->
  DotDot, // ..
  Assign, // =
  Plus,
  Minus,
  Star,
  EqEq,
  NotEq,
  Lt,
  Le,
  Gt,
  Ge,
  Amp,
  Pipe,
  Caret,
  Shl,
  Shr,
  Bang,
};

struct Token {
  Tok kind;
  std::string text; // ident text or int suffix
  int64_t intVal = 0;
  Span span;
};

const char *tokName(Tok t) {
  switch (t) {
  case Tok::Eof:
    return "end of input";
  case Tok::Ident:
    return "identifier";
  case Tok::Int:
    return "integer";
  case Tok::KwFn:
    return "'fn'";
  case Tok::KwLet:
    return "'let'";
  case Tok::KwMut:
    return "'mut'";
  case Tok::KwIf:
    return "'if'";
  case Tok::KwElse:
    return "'else'";
  case Tok::KwWhile:
    return "'while'";
  case Tok::KwFor:
    return "'for'";
  case Tok::KwIn:
    return "'in'";
  case Tok::KwReturn:
    return "'return'";
  case Tok::KwTrue:
    return "'true'";
  case Tok::KwFalse:
    return "'false'";
  case Tok::KwAs:
    return "'as'";
  case Tok::LParen:
    return "'('";
  case Tok::RParen:
    return "')'";
  case Tok::LBrace:
    return "'{'";
  case Tok::RBrace:
    return "'}'";
  case Tok::LBracket:
    return "'['";
  case Tok::RBracket:
    return "']'";
  case Tok::Comma:
    return "','";
  case Tok::Colon:
    return "':'";
  case Tok::Semi:
    return "';'";
  case Tok::Arrow:
    return "'->'";
  case Tok::DotDot:
    return "'..'";
  case Tok::Assign:
    return "'='";
  case Tok::Plus:
    return "'+'";
  case Tok::Minus:
    return "'-'";
  case Tok::Star:
    return "'*'";
  case Tok::EqEq:
    return "'=='";
  case Tok::NotEq:
    return "'!='";
  case Tok::Lt:
    return "'<'";
  case Tok::Le:
    return "'<='";
  case Tok::Gt:
    return "'>'";
  case Tok::Ge:
    return "'>='";
  case Tok::Amp:
    return "'&'";
  case Tok::Pipe:
    return "'|'";
  case Tok::Caret:
    return "'^'";
  case Tok::Shl:
    return "'<<'";
  case Tok::Shr:
    return "'>>'";
  case Tok::Bang:
    return "'!'";
  }
  return "?";
}

class Lexer {
public:
  Lexer(std::string_view src, std::string file)
      : src_(src), file_(std::move(file)) {}

  std::vector<Token> lex() {
    std::vector<Token> toks;
    while (true) {
      skipTrivia();
      Token t = next();
      toks.push_back(t);
      if (t.kind == Tok::Eof)
        break;
    }
    return toks;
  }

private:
  std::string_view src_;
  std::string file_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;

  Span here() const { return Span{file_, line_, col_}; }

  char peek(size_t off = 0) const {
    return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
  }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skipTrivia() {
    while (pos_ < src_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n')
          advance();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string &msg) {
    throw CompileError(errorDiag(msg, here(), "syntax"));
  }

  Token next() {
    Span sp = here();
    if (pos_ >= src_.size())
      return {Tok::Eof, "", 0, sp};
    char c = peek();
    if (std::isalpha((unsigned char)c) || c == '_')
      return ident(sp);
    if (std::isdigit((unsigned char)c))
      return number(sp);
    advance();
    switch (c) {
    case '(':
      return {Tok::LParen, "", 0, sp};
    case ')':
      return {Tok::RParen, "", 0, sp};
    case '{':
      return {Tok::LBrace, "", 0, sp};
    case '}':
      return {Tok::RBrace, "", 0, sp};
    case '[':
      return {Tok::LBracket, "", 0, sp};
    case ']':
      return {Tok::RBracket, "", 0, sp};
    case ',':
      return {Tok::Comma, "", 0, sp};
    case ':':
      return {Tok::Colon, "", 0, sp};
    case ';':
      return {Tok::Semi, "", 0, sp};
    case '+':
      return {Tok::Plus, "", 0, sp};
    case '*':
      return {Tok::Star, "", 0, sp};
    case '&':
      return {Tok::Amp, "", 0, sp};
    case '|':
      return {Tok::Pipe, "", 0, sp};
    case '^':
      return {Tok::Caret, "", 0, sp};
    case '-':
      if (peek() == '>') {
        advance();
        return {Tok::Arrow, "", 0, sp};
      }
      return {Tok::Minus, "", 0, sp};
    case '.':
      if (peek() == '.') {
        advance();
        return {Tok::DotDot, "", 0, sp};
      }
      fail("unexpected character '.'");
    case '=':
      if (peek() == '=') {
        advance();
        return {Tok::EqEq, "", 0, sp};
      }
      return {Tok::Assign, "", 0, sp};
    case '!':
      if (peek() == '=') {
        advance();
        return {Tok::NotEq, "", 0, sp};
      }
      return {Tok::Bang, "", 0, sp};
    case '<':
      if (peek() == '=') {
        advance();
        return {Tok::Le, "", 0, sp};
      }
      if (peek() == '<') {
        advance();
        return {Tok::Shl, "", 0, sp};
      }
      return {Tok::Lt, "", 0, sp};
    case '>':
      if (peek() == '=') {
        advance();
        return {Tok::Ge, "", 0, sp};
      }
      if (peek() == '>') {
        advance();
        return {Tok::Shr, "", 0, sp};
      }
      return {Tok::Gt, "", 0, sp};
    default:
      fail(std::string("unexpected character '") + c + "'");
    }
  }

  Token ident(Span sp) {
    std::string s;
    while (std::isalnum((unsigned char)peek()) || peek() == '_')
      s += advance();
    static const std::unordered_map<std::string, Tok> kw = {
        {"fn", Tok::KwFn},       {"let", Tok::KwLet},
        {"mut", Tok::KwMut},     {"if", Tok::KwIf},
        {"else", Tok::KwElse},   {"while", Tok::KwWhile},
        {"for", Tok::KwFor},     {"in", Tok::KwIn},
        {"return", Tok::KwReturn}, {"true", Tok::KwTrue},
        {"false", Tok::KwFalse}, {"as", Tok::KwAs}};
    auto it = kw.find(s);
    if (it != kw.end())
      return {it->second, "", 0, sp};
    return {Tok::Ident, s, 0, sp};
  }

  Token number(Span sp) {
    uint64_t v = 0;
    bool overflow = false;
    while (std::isdigit((unsigned char)peek())) {
      v = v * 10 + (uint64_t)(advance() - '0');
      if (v > (1ull << 32))
        overflow = true;
    }
    if (overflow)
      fail("integer literal out of range");
    std::string suffix;
    if (peek() == 'i' || peek() == 'u') {
      // A type suffix glued to the literal, e.g. 3i16.
      size_t save = pos_;
      int sl = line_, sc = col_;
      suffix += advance();
      while (std::isdigit((unsigned char)peek()))
        suffix += advance();
      static const std::unordered_set<std::string> valid = {
          "i8", "i16", "i32", "u1", "u8", "u16", "u32"};
      if (!valid.count(suffix)) {
        pos_ = save;
        line_ = sl;
        col_ = sc;
        fail("invalid integer literal suffix");
      }
    }
    return {Tok::Int, suffix, (int64_t)v, sp};
  }
};

class Parser {
public:
  Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  SourceModule module() {
    SourceModule m;
    while (!at(Tok::Eof))
      m.functions.push_back(function());
    return m;
  }

private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  const Token &cur() const { return toks_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }
  Token eat() { return toks_[pos_++]; }

  bool accept(Tok k) {
    if (at(k)) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void expectedError(std::initializer_list<Tok> kinds) {
    std::string msg = "expected ";
    size_t i = 0;
    for (Tok k : kinds) {
      if (i++)
        msg += " or ";
      msg += tokName(k);
    }
    msg += ", found ";
    msg += tokName(cur().kind);
    throw CompileError(errorDiag(msg, cur().span, "syntax"));
  }

  Token expect(Tok k) {
    if (!at(k))
      expectedError({k});
    return eat();
  }

  static bool isBuiltinType(const std::string &s) {
    return s == "i8" || s == "i16" || s == "i32" || s == "u1" || s == "u8" ||
           s == "u16" || s == "u32" || s == "bool";
  }

  TypeExpr type() {
    TypeExpr t;
    t.span = cur().span;
    if (accept(Tok::LBracket)) {
      t.element = std::make_unique<TypeExpr>(type());
      expect(Tok::Semi);
      t.length = expect(Tok::Int).intVal;
      expect(Tok::RBracket);
      return t;
    }
    if (!at(Tok::Ident))
      expectedError({Tok::Ident, Tok::LBracket});
    t.name = eat().text;
    if (t.name == "bool")
      t.name = "u1"; // bool is an alias
    return t;
  }

  FunctionDecl function() {
    FunctionDecl f;
    f.span = cur().span;
    expect(Tok::KwFn);
    f.name = expect(Tok::Ident).text;
    if (accept(Tok::Lt)) {
      f.typeParams.push_back(expect(Tok::Ident).text);
      while (accept(Tok::Comma))
        f.typeParams.push_back(expect(Tok::Ident).text);
      expect(Tok::Gt);
    }
    expect(Tok::LParen);
    if (!at(Tok::RParen)) {
      do {
        Param p;
        p.span = cur().span;
        if (!at(Tok::Ident))
          expectedError({Tok::Ident, Tok::RParen});
        p.name = eat().text;
        expect(Tok::Colon);
        p.type = type();
        f.params.push_back(std::move(p));
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen);
    expect(Tok::Arrow);
    f.returnType = type();
    f.body = block();
    return f;
  }

  Block block() {
    expect(Tok::LBrace);
    Block b;
    while (!at(Tok::RBrace) && !at(Tok::Eof))
      b.push_back(stmt());
    expect(Tok::RBrace);
    return b;
  }

  StmtPtr stmt() {
    auto s = std::make_unique<Stmt>();
    s->span = cur().span;
    switch (cur().kind) {
    case Tok::KwLet: {
      eat();
      s->kind = Stmt::Kind::Let;
      s->isMut = accept(Tok::KwMut);
      s->name = expect(Tok::Ident).text;
      if (accept(Tok::Colon))
        s->declType = type();
      expect(Tok::Assign);
      s->value = expr();
      expect(Tok::Semi);
      return s;
    }
    case Tok::KwIf: {
      eat();
      s->kind = Stmt::Kind::If;
      s->cond = expr();
      s->thenBlock = block();
      if (accept(Tok::KwElse)) {
        if (at(Tok::KwIf)) {
          s->elseBlock.push_back(stmt());
        } else {
          s->elseBlock = block();
        }
      }
      return s;
    }
    case Tok::KwWhile: {
      eat();
      s->kind = Stmt::Kind::While;
      s->cond = expr();
      s->body = block();
      return s;
    }
    case Tok::KwFor: {
      eat();
      s->kind = Stmt::Kind::For;
      s->name = expect(Tok::Ident).text;
      expect(Tok::KwIn);
      s->forLo = expect(Tok::Int).intVal;
      expect(Tok::DotDot);
      s->forHi = expect(Tok::Int).intVal;
      s->body = block();
      return s;
    }
    case Tok::KwReturn: {
      eat();
      s->kind = Stmt::Kind::Return;
      s->value = expr();
      expect(Tok::Semi);
      return s;
    }
    case Tok::Ident: {
      // IDENT = e;  |  IDENT[e] = e;  |  expression statement
      if (toks_[pos_ + 1].kind == Tok::Assign) {
        s->kind = Stmt::Kind::Assign;
        s->name = eat().text;
        eat(); // =
        s->value = expr();
        expect(Tok::Semi);
        return s;
      }
      if (toks_[pos_ + 1].kind == Tok::LBracket) {
        size_t save = pos_;
        std::string name = eat().text;
        eat(); // [
        ExprPtr idx = expr();
        expect(Tok::RBracket);
        if (accept(Tok::Assign)) {
          s->kind = Stmt::Kind::Store;
          s->name = name;
          s->index = std::move(idx);
          s->value = expr();
          expect(Tok::Semi);
          return s;
        }
        pos_ = save; // plain expression after all
      }
      s->kind = Stmt::Kind::ExprStmt;
      s->value = expr();
      expect(Tok::Semi);
      return s;
    }
    default:
      s->kind = Stmt::Kind::ExprStmt;
      s->value = expr();
      expect(Tok::Semi);
      return s;
    }
  }

  // Precedence (low to high): comparison < | < ^ < & < shift < add < mul
  // < unary < cast.
  ExprPtr expr() { return comparison(); }

  ExprPtr binary(BinOp op, ExprPtr lhs, ExprPtr rhs, Span sp) {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::Binary;
    e->span = sp;
    e->binOp = op;
    e->children.push_back(std::move(lhs));
    e->children.push_back(std::move(rhs));
    return e;
  }

  ExprPtr comparison() {
    ExprPtr lhs = bitOr();
    while (true) {
      BinOp op;
      switch (cur().kind) {
      case Tok::EqEq:
        op = BinOp::Eq;
        break;
      case Tok::NotEq:
        op = BinOp::Ne;
        break;
      case Tok::Lt:
        op = BinOp::Lt;
        break;
      case Tok::Le:
        op = BinOp::Le;
        break;
      case Tok::Gt:
        op = BinOp::Gt;
        break;
      case Tok::Ge:
        op = BinOp::Ge;
        break;
      default:
        return lhs;
      }
      Span sp = eat().span;
      lhs = binary(op, std::move(lhs), bitOr(), sp);
    }
  }

  ExprPtr bitOr() {
    ExprPtr lhs = bitXor();
    while (at(Tok::Pipe)) {
      Span sp = eat().span;
      lhs = binary(BinOp::Or, std::move(lhs), bitXor(), sp);
    }
    return lhs;
  }

  ExprPtr bitXor() {
    ExprPtr lhs = bitAnd();
    while (at(Tok::Caret)) {
      Span sp = eat().span;
      lhs = binary(BinOp::Xor, std::move(lhs), bitAnd(), sp);
    }
    return lhs;
  }

  ExprPtr bitAnd() {
    ExprPtr lhs = shift();
    while (at(Tok::Amp)) {
      Span sp = eat().span;
      lhs = binary(BinOp::And, std::move(lhs), shift(), sp);
    }
    return lhs;
  }

  ExprPtr shift() {
    ExprPtr lhs = additive();
    while (at(Tok::Shl) || at(Tok::Shr)) {
      BinOp op = at(Tok::Shl) ? BinOp::Shl : BinOp::Shr;
      Span sp = eat().span;
      lhs = binary(op, std::move(lhs), additive(), sp);
    }
    return lhs;
  }

  ExprPtr additive() {
    ExprPtr lhs = multiplicative();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      BinOp op = at(Tok::Plus) ? BinOp::Add : BinOp::Sub;
      Span sp = eat().span;
      lhs = binary(op, std::move(lhs), multiplicative(), sp);
    }
    return lhs;
  }

  ExprPtr multiplicative() {
    ExprPtr lhs = unary();
    while (at(Tok::Star)) {
      Span sp = eat().span;
      lhs = binary(BinOp::Mul, std::move(lhs), unary(), sp);
    }
    return lhs;
  }

  ExprPtr unary() {
    if (at(Tok::Minus) || at(Tok::Bang)) {
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::Unary;
      e->unOp = at(Tok::Minus) ? UnOp::Neg : UnOp::Not;
      e->span = eat().span;
      e->children.push_back(unary());
      return e;
    }
    return castExpr();
  }

  ExprPtr castExpr() {
    ExprPtr operand = primary();
    while (at(Tok::KwAs)) {
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::Cast;
      e->span = eat().span;
      e->typeExpr = type();
      e->children.push_back(std::move(operand));
      operand = std::move(e);
    }
    return operand;
  }

  ExprPtr primary() {
    auto e = std::make_unique<Expr>();
    e->span = cur().span;
    switch (cur().kind) {
    case Tok::Int: {
      Token t = eat();
      e->kind = Expr::Kind::IntLit;
      e->intVal = t.intVal;
      if (!t.text.empty()) {
        TypeExpr te;
        te.name = t.text;
        te.span = t.span;
        e->typeExpr = std::move(te);
      }
      return e;
    }
    case Tok::KwTrue:
    case Tok::KwFalse:
      e->kind = Expr::Kind::BoolLit;
      e->intVal = at(Tok::KwTrue) ? 1 : 0;
      eat();
      return e;
    case Tok::Ident: {
      std::string name = eat().text;
      if (accept(Tok::LParen)) {
        e->kind = Expr::Kind::Call;
        e->name = name;
        if (!at(Tok::RParen)) {
          do
            e->children.push_back(expr());
          while (accept(Tok::Comma));
        }
        expect(Tok::RParen);
        return e;
      }
      if (accept(Tok::LBracket)) {
        e->kind = Expr::Kind::Index;
        e->name = name;
        e->children.push_back(expr());
        expect(Tok::RBracket);
        return e;
      }
      e->kind = Expr::Kind::Var;
      e->name = name;
      return e;
    }
    case Tok::LParen: {
      eat();
      ExprPtr inner = expr();
      expect(Tok::RParen);
      return inner;
    }
    case Tok::LBracket: {
      eat();
      ExprPtr first = expr();
      if (accept(Tok::Semi)) {
        e->kind = Expr::Kind::ArraySplat;
        e->intVal = expect(Tok::Int).intVal;
        e->children.push_back(std::move(first));
        expect(Tok::RBracket);
        return e;
      }
      e->kind = Expr::Kind::ArrayLit;
      e->children.push_back(std::move(first));
      while (accept(Tok::Comma))
        e->children.push_back(expr());
      expect(Tok::RBracket);
      return e;
    }
    default:
      expectedError({Tok::Int, Tok::Ident, Tok::LParen, Tok::LBracket});
    }
  }
};

} // namespace

ast::SourceModule parse(std::string_view sourceText, std::string fileName) {
  Lexer lexer(sourceText, std::move(fileName));
  Parser parser(lexer.lex());
  return parser.module();
}

} // namespace hjc
