//===- LowerToCore.cpp - Typed AST to core-level SSA IR -------------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "hjc/LowerToCore.h"
#include "hjc/Dialect.h"

#include <functional>
#include <map>
#include <set>

namespace hjc {
namespace {

using namespace ast;
using namespace ir;

const char *binOpOpcode(BinOp op) {
  switch (op) {
  case BinOp::Add:
    return "core.add";
  case BinOp::Sub:
    return "core.sub";
  case BinOp::Mul:
    return "core.mul";
  case BinOp::And:
    return "core.and";
  case BinOp::Or:
    return "core.or";
  case BinOp::Xor:
    return "core.xor";
  case BinOp::Shl:
    return "core.shl";
  case BinOp::Shr:
    return "core.shr";
  case BinOp::Eq:
    return "core.cmp.eq";
  case BinOp::Ne:
    return "core.cmp.ne";
  case BinOp::Lt:
    return "core.cmp.lt";
  case BinOp::Le:
    return "core.cmp.le";
  case BinOp::Gt:
    return "core.cmp.gt";
  case BinOp::Ge:
    return "core.cmp.ge";
  }
  return "?";
}

class FnLowering {
public:
  explicit FnLowering(const FunctionDecl &decl) : decl_(decl) {}

  IrFunction run() {
    fn_.name = decl_.name;
    // The checker rewrote all TypeExprs to concrete spellings.
    fn_.returnType = typeFromExpr(decl_.returnType);

    cur_ = newBlock();
    pushScope();
    for (auto &p : decl_.params) {
      HwType t = typeFromExpr(p.type);
      fn_.paramTypes.push_back(t);
      fn_.paramNames.push_back(p.name);
      ValueId v = fn_.addValue(t);
      fn_.blocks[0].args.push_back(v);
      define(p.name, v);
    }
    lowerStmts(decl_.body);
    popScope();
    removeUnreachable();
    return std::move(fn_);
  }

private:
  const FunctionDecl &decl_;
  IrFunction fn_;
  int cur_ = -1;
  bool terminated_ = false;
  std::vector<std::map<std::string, ValueId>> scopes_;

  static HwType typeFromExpr(const TypeExpr &te) {
    if (te.isArray())
      return HwType::makeArray(typeFromExpr(*te.element), (uint32_t)te.length);
    if (te.name == "i8")
      return HwType::i8();
    if (te.name == "i16")
      return HwType::i16();
    if (te.name == "i32")
      return HwType::i32();
    if (te.name == "u1")
      return HwType::u1();
    if (te.name == "u8")
      return HwType::u8();
    if (te.name == "u16")
      return HwType::u16();
    return HwType::u32();
  }

  int newBlock() {
    fn_.blocks.emplace_back();
    return (int)fn_.blocks.size() - 1;
  }

  void pushScope() { scopes_.emplace_back(); }
  void popScope() { scopes_.pop_back(); }

  void define(const std::string &name, ValueId v) { scopes_.back()[name] = v; }

  ValueId lookup(const std::string &name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end())
        return f->second;
    }
    return kInvalidValue;
  }

  void update(const std::string &name, ValueId v) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) {
        f->second = v;
        return;
      }
    }
  }

  ValueId emit(std::string opcode, std::vector<ValueId> operands, HwType type,
               Span span, AttrMap attrs = {},
               std::vector<Successor> succs = {}) {
    Operation op;
    op.opcode = std::move(opcode);
    op.operands = std::move(operands);
    op.attrs = std::move(attrs);
    op.successors = std::move(succs);
    op.span = std::move(span);
    // Callers pass token() to mean "no result"; core ops never produce
    // token-typed values.
    ValueId result = kInvalidValue;
    if (type != HwType::token()) {
      result = fn_.addValue(type);
      op.results.push_back(result);
    }
    fn_.blocks[(size_t)cur_].ops.push_back(std::move(op));
    return result;
  }

  void emitNoResult(std::string opcode, std::vector<ValueId> operands,
                    Span span, AttrMap attrs = {},
                    std::vector<Successor> succs = {}) {
    emit(std::move(opcode), std::move(operands), HwType::token(),
         std::move(span), std::move(attrs), std::move(succs));
  }

  ValueId emitConst(int64_t value, HwType type, Span span) {
    return emit("core.const", {}, type, std::move(span),
                {{"value", Attr(type.wrap(value))}});
  }

  //===--------------------------------------------------------------------===//
  // Assigned-variable scan (loop-carried / join values)
  //===--------------------------------------------------------------------===//

  /// Names assigned anywhere in `b` that are already bound in the current
  /// environment (i.e. declared outside the construct). Sorted for
  /// deterministic block-argument order.
  std::vector<std::string> assignedOuter(const Block &b) {
    std::set<std::string> names;
    std::function<void(const Block &)> walk = [&](const Block &blk) {
      std::set<std::string> declared; // declared inside; shadows outer
      for (auto &s : blk) {
        if (s->kind == Stmt::Kind::Let)
          declared.insert(s->name);
        if (s->kind == Stmt::Kind::Assign && !declared.count(s->name))
          names.insert(s->name);
        walk(s->thenBlock);
        walk(s->elseBlock);
        walk(s->body);
      }
    };
    walk(b);
    std::vector<std::string> out;
    for (auto &n : names)
      if (lookup(n) != kInvalidValue && !fn_.typeOf(lookup(n)).isArray())
        out.push_back(n);
    return out;
  }

  std::vector<ValueId> currentValues(const std::vector<std::string> &names) {
    std::vector<ValueId> vals;
    for (auto &n : names)
      vals.push_back(lookup(n));
    return vals;
  }

  //===--------------------------------------------------------------------===//
  // Statements
  //===--------------------------------------------------------------------===//

  void lowerStmts(const Block &b) {
    pushScope();
    for (auto &s : b) {
      if (terminated_)
        break; // dead code after a returning construct
      lowerStmt(*s);
    }
    popScope();
  }

  void lowerStmt(const Stmt &s) {
    switch (s.kind) {
    case Stmt::Kind::Let:
      define(s.name, lowerExpr(*s.value));
      break;
    case Stmt::Kind::Assign:
      update(s.name, lowerExpr(*s.value));
      break;
    case Stmt::Kind::Store: {
      ValueId arr = lookup(s.name);
      ValueId idx = lowerExpr(*s.index);
      ValueId val = lowerExpr(*s.value);
      emitNoResult("core.array.write", {arr, idx, val}, s.span);
      break;
    }
    case Stmt::Kind::If:
      lowerIf(s);
      break;
    case Stmt::Kind::While:
      lowerWhile(s);
      break;
    case Stmt::Kind::For:
      lowerFor(s);
      break;
    case Stmt::Kind::Return: {
      ValueId v = lowerExpr(*s.value);
      emitNoResult("core.return", {v}, s.span);
      terminated_ = true;
      break;
    }
    case Stmt::Kind::ExprStmt:
      lowerExpr(*s.value);
      break;
    }
  }

  void lowerIf(const Stmt &s) {
    ValueId cond = lowerExpr(*s.cond);
    std::vector<std::string> joined;
    {
      auto a = assignedOuter(s.thenBlock);
      auto b = assignedOuter(s.elseBlock);
      std::set<std::string> u(a.begin(), a.end());
      u.insert(b.begin(), b.end());
      joined.assign(u.begin(), u.end());
    }
    bool hasElse = !s.elseBlock.empty();

    int thenB = newBlock();
    int elseB = hasElse ? newBlock() : -1;
    int joinB = newBlock();
    for (auto &n : joined)
      fn_.blocks[(size_t)joinB].args.push_back(
          fn_.addValue(fn_.typeOf(lookup(n))));

    Successor onTrue{thenB, {}};
    Successor onFalse =
        hasElse ? Successor{elseB, {}} : Successor{joinB, currentValues(joined)};
    emitNoResult("core.condbr", {cond}, s.span, {}, {onTrue, onFalse});

    bool anyFallthrough = false;
    auto lowerArm = [&](int blockIdx, const Block &body) {
      cur_ = blockIdx;
      terminated_ = false;
      lowerStmts(body);
      if (!terminated_) {
        emitNoResult("core.br", {}, s.span, {},
                     {Successor{joinB, currentValues(joined)}});
        anyFallthrough = true;
      }
    };
    // Re-resolve join values per arm; assignments inside update the env and
    // must be restored between arms.
    auto saved = scopes_;
    lowerArm(thenB, s.thenBlock);
    scopes_ = saved;
    if (hasElse) {
      lowerArm(elseB, s.elseBlock);
      scopes_ = saved;
    } else {
      anyFallthrough = true;
    }

    cur_ = joinB;
    terminated_ = !anyFallthrough;
    for (size_t i = 0; i < joined.size(); ++i)
      update(joined[i], fn_.blocks[(size_t)joinB].args[i]);
  }

  void lowerWhile(const Stmt &s) {
    auto carried = assignedOuter(s.body);
    int header = newBlock();
    for (auto &n : carried)
      fn_.blocks[(size_t)header].args.push_back(
          fn_.addValue(fn_.typeOf(lookup(n))));

    emitNoResult("core.br", {}, s.span, {},
                 {Successor{header, currentValues(carried)}});

    cur_ = header;
    for (size_t i = 0; i < carried.size(); ++i)
      update(carried[i], fn_.blocks[(size_t)header].args[i]);
    ValueId cond = lowerExpr(*s.cond);

    int body = newBlock();
    int exit = newBlock();
    emitNoResult("core.condbr", {cond}, s.span, {},
                 {Successor{body, {}}, Successor{exit, {}}});

    cur_ = body;
    terminated_ = false;
    lowerStmts(s.body);
    if (!terminated_)
      emitNoResult("core.br", {}, s.span, {},
                   {Successor{header, currentValues(carried)}});

    cur_ = exit;
    terminated_ = false;
    // Loop-carried names resolve to the header arguments after the loop;
    // the header dominates the exit.
    for (size_t i = 0; i < carried.size(); ++i)
      update(carried[i], fn_.blocks[(size_t)header].args[i]);
  }

  void lowerFor(const Stmt &s) {
    auto carried = assignedOuter(s.body);
    int header = newBlock();
    for (auto &n : carried)
      fn_.blocks[(size_t)header].args.push_back(
          fn_.addValue(fn_.typeOf(lookup(n))));
    ValueId ivArg = fn_.addValue(HwType::u32());
    fn_.blocks[(size_t)header].args.push_back(ivArg);

    ValueId lo = emitConst(s.forLo, HwType::u32(), s.span);
    auto initVals = currentValues(carried);
    initVals.push_back(lo);
    emitNoResult("core.br", {}, s.span, {}, {Successor{header, initVals}});

    cur_ = header;
    for (size_t i = 0; i < carried.size(); ++i)
      update(carried[i], fn_.blocks[(size_t)header].args[i]);
    ValueId hi = emitConst(s.forHi, HwType::u32(), s.span);
    ValueId cond =
        emit("core.cmp.lt", {ivArg, hi}, HwType::u1(), s.span);

    int body = newBlock();
    int exit = newBlock();
    emitNoResult("core.condbr", {cond}, s.span, {},
                 {Successor{body, {}}, Successor{exit, {}}});

    cur_ = body;
    terminated_ = false;
    pushScope();
    define(s.name, ivArg);
    lowerStmts(s.body);
    popScope();
    if (!terminated_) {
      ValueId one = emitConst(1, HwType::u32(), s.span);
      ValueId next = emit("core.add", {ivArg, one}, HwType::u32(), s.span);
      auto backVals = currentValues(carried);
      backVals.push_back(next);
      emitNoResult("core.br", {}, s.span, {}, {Successor{header, backVals}});
    }

    cur_ = exit;
    terminated_ = false;
    for (size_t i = 0; i < carried.size(); ++i)
      update(carried[i], fn_.blocks[(size_t)header].args[i]);
  }

  //===--------------------------------------------------------------------===//
  // Expressions
  //===--------------------------------------------------------------------===//

  ValueId lowerExpr(const Expr &e) {
    switch (e.kind) {
    case Expr::Kind::IntLit:
    case Expr::Kind::BoolLit:
      return emitConst(e.intVal, e.type, e.span);
    case Expr::Kind::Var:
      return lookup(e.name);
    case Expr::Kind::Binary: {
      ValueId l = lowerExpr(*e.children[0]);
      ValueId r = lowerExpr(*e.children[1]);
      return emit(binOpOpcode(e.binOp), {l, r}, e.type, e.span);
    }
    case Expr::Kind::Unary: {
      ValueId v = lowerExpr(*e.children[0]);
      return emit(e.unOp == UnOp::Neg ? "core.neg" : "core.not", {v}, e.type,
                  e.span);
    }
    case Expr::Kind::Cast: {
      ValueId v = lowerExpr(*e.children[0]);
      return emit("core.cast", {v}, e.type, e.span);
    }
    case Expr::Kind::Index: {
      ValueId arr = lookup(e.name);
      ValueId idx = lowerExpr(*e.children[0]);
      return emit("core.array.read", {arr, idx}, e.type, e.span);
    }
    case Expr::Kind::Call: {
      std::vector<ValueId> args;
      for (auto &c : e.children)
        args.push_back(lowerExpr(*c));
      return emit("core.call", std::move(args), e.type, e.span,
                  {{"callee", Attr(e.name)}});
    }
    case Expr::Kind::ArrayLit: {
      ValueId arr = emit("core.array.alloc", {}, e.type, e.span);
      for (size_t i = 0; i < e.children.size(); ++i) {
        ValueId idx = emitConst((int64_t)i, HwType::u32(), e.span);
        ValueId val = lowerExpr(*e.children[i]);
        emitNoResult("core.array.write", {arr, idx, val}, e.span);
      }
      return arr;
    }
    case Expr::Kind::ArraySplat: {
      ValueId arr = emit("core.array.alloc", {}, e.type, e.span);
      ValueId val = lowerExpr(*e.children[0]);
      for (int64_t i = 0; i < e.intVal; ++i) {
        ValueId idx = emitConst(i, HwType::u32(), e.span);
        emitNoResult("core.array.write", {arr, idx, val}, e.span);
      }
      return arr;
    }
    }
    return kInvalidValue;
  }

  //===--------------------------------------------------------------------===//
  // Cleanup
  //===--------------------------------------------------------------------===//

  void removeUnreachable() {
    std::vector<bool> seen(fn_.blocks.size(), false);
    std::vector<int> stack = {0};
    seen[0] = true;
    while (!stack.empty()) {
      int b = stack.back();
      stack.pop_back();
      for (auto &op : fn_.blocks[(size_t)b].ops)
        for (auto &succ : op.successors)
          if (!seen[(size_t)succ.block]) {
            seen[(size_t)succ.block] = true;
            stack.push_back(succ.block);
          }
    }
    std::vector<int> remap(fn_.blocks.size(), -1);
    std::vector<BasicBlock> kept;
    for (size_t i = 0; i < fn_.blocks.size(); ++i)
      if (seen[i]) {
        remap[i] = (int)kept.size();
        kept.push_back(std::move(fn_.blocks[i]));
      }
    for (auto &b : kept)
      for (auto &op : b.ops)
        for (auto &succ : op.successors)
          succ.block = remap[(size_t)succ.block];
    fn_.blocks = std::move(kept);
  }
};

} // namespace

ir::IrModule buildCoreModule(const TypedAst &ast) {
  ir::IrModule m;
  m.level = ir::Level::Core;
  for (auto &f : ast.functions)
    m.functions.push_back(FnLowering(f).run());
  return m;
}

namespace {

using namespace ir;

/// Splices `callee` into `fn` at every core.call site naming it. The callee
/// must itself be call-free.
void inlineCallsTo(IrFunction &fn, const IrFunction &callee) {
  for (size_t bi = 0; bi < fn.blocks.size(); ++bi) {
    auto &ops = fn.blocks[bi].ops;
    size_t ci = 0;
    for (; ci < ops.size(); ++ci)
      if (ops[ci].opcode == "core.call" &&
          ops[ci].strAttr("callee") == callee.name)
        break;
    if (ci == ops.size())
      continue;

    Operation call = std::move(ops[ci]);
    ValueId oldResult = call.results[0];

    // Continuation block: the ops after the call, plus one argument that
    // replaces the call result.
    int contIdx = (int)fn.blocks.size();
    fn.blocks.emplace_back();
    ValueId contArg = fn.addValue(fn.typeOf(oldResult));
    fn.blocks[contIdx].args.push_back(contArg);
    for (size_t i = ci + 1; i < fn.blocks[bi].ops.size(); ++i)
      fn.blocks[contIdx].ops.push_back(std::move(fn.blocks[bi].ops[i]));
    fn.blocks[bi].ops.resize(ci);

    // Clone callee values; entry-block arguments alias the call operands.
    std::vector<ValueId> vmap(callee.valueTypes.size(), kInvalidValue);
    for (size_t i = 0; i < callee.blocks[0].args.size(); ++i)
      vmap[(size_t)callee.blocks[0].args[i]] = call.operands[i];
    for (size_t v = 0; v < callee.valueTypes.size(); ++v)
      if (vmap[v] == kInvalidValue)
        vmap[v] = fn.addValue(callee.valueTypes[v]);

    int blockOffset = (int)fn.blocks.size();
    for (size_t cb = 0; cb < callee.blocks.size(); ++cb) {
      BasicBlock nb;
      if (cb != 0) // entry args were substituted away
        for (ValueId a : callee.blocks[cb].args)
          nb.args.push_back(vmap[(size_t)a]);
      for (const Operation &cop : callee.blocks[cb].ops) {
        Operation op = cop;
        for (auto &o : op.operands)
          o = vmap[(size_t)o];
        for (auto &r : op.results)
          r = vmap[(size_t)r];
        for (auto &s : op.successors) {
          s.block += blockOffset;
          for (auto &a : s.args)
            a = vmap[(size_t)a];
        }
        if (op.opcode == "core.return") {
          ValueId rv = op.operands[0];
          op = Operation();
          op.opcode = "core.br";
          op.successors.push_back(Successor{contIdx, {rv}});
        }
        nb.ops.push_back(std::move(op));
      }
      fn.blocks.push_back(std::move(nb));
    }

    // Jump into the inlined body.
    Operation br;
    br.opcode = "core.br";
    br.span = call.span;
    br.successors.push_back(Successor{blockOffset, {}});
    fn.blocks[bi].ops.push_back(std::move(br));

    // The call result now lives in the continuation argument.
    for (auto &blk : fn.blocks)
      for (auto &op : blk.ops) {
        for (auto &o : op.operands)
          if (o == oldResult)
            o = contArg;
        for (auto &s : op.successors)
          for (auto &a : s.args)
            if (a == oldResult)
              a = contArg;
      }

    --bi; // rescan this block for further calls
  }
}

} // namespace

void inlineAllCalls(ir::IrModule &module) {
  std::map<std::string, std::set<std::string>> calls;
  for (auto &f : module.functions)
    for (auto &b : f.blocks)
      for (auto &op : b.ops)
        if (op.opcode == "core.call")
          calls[f.name].insert(op.strAttr("callee"));

  std::vector<std::string> order;
  std::set<std::string> visited;
  std::function<void(const std::string &)> dfs = [&](const std::string &n) {
    if (visited.count(n) || !module.find(n))
      return;
    visited.insert(n);
    for (auto &c : calls[n])
      dfs(c);
    order.push_back(n);
  };
  for (auto &f : module.functions)
    dfs(f.name);

  for (auto &name : order) {
    IrFunction &fn = *module.find(name);
    for (auto &calleeName : calls[name])
      if (const IrFunction *callee = module.find(calleeName))
        inlineCallsTo(fn, *callee);
  }
}

void inlineAll(ir::IrModule &module, const std::string &entry,
               int64_t opBudget) {
  IrFunction *entryFn = module.find(entry);
  if (!entryFn)
    throw CompileError(
        errorDiag("entry function '" + entry + "' not found", {},
                  "EntryNotFound"));
  for (auto t : entryFn->paramTypes)
    if (t.isArray())
      throw CompileError(errorDiag(
          "entry function '" + entry + "' has an array-typed parameter", {},
          "EntrySignatureError"));

  // Callee-first order over the acyclic call graph.
  std::map<std::string, std::set<std::string>> calls;
  for (auto &f : module.functions)
    for (auto &b : f.blocks)
      for (auto &op : b.ops)
        if (op.opcode == "core.call")
          calls[f.name].insert(op.strAttr("callee"));

  std::vector<std::string> order;
  std::set<std::string> visited;
  std::function<void(const std::string &)> dfs = [&](const std::string &n) {
    if (visited.count(n) || !module.find(n))
      return;
    visited.insert(n);
    for (auto &c : calls[n])
      dfs(c);
    order.push_back(n);
  };
  dfs(entry);

  for (auto &name : order) {
    IrFunction &fn = *module.find(name);
    for (auto &calleeName : calls[name])
      if (const IrFunction *callee = module.find(calleeName))
        inlineCallsTo(fn, *callee);
  }

  entryFn = module.find(entry);
  int64_t total = 0;
  for (auto &b : entryFn->blocks)
    total += (int64_t)b.ops.size();
  if (total > opBudget)
    throw CompileError(errorDiag(
        "post-inline operation count " + std::to_string(total) +
            " exceeds budget " + std::to_string(opBudget),
        {}, "InlineBudgetExceeded"));

  IrFunction keep = std::move(*entryFn);
  module.functions.clear();
  module.functions.push_back(std::move(keep));
}

ir::IrModule lowerToCore(const TypedAst &ast, const std::string &entry,
                         int64_t opBudget) {
  auto m = buildCoreModule(ast);
  inlineAll(m, entry, opBudget);
  return m;
}

} // namespace hjc
