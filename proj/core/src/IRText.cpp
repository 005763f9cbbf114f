//===- IRText.cpp - Textual IR printer and parser -------------------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Byte-deterministic printer and the matching parser for all four levels.
// Core/handshake bodies are op lines; fsmd and netlist bodies are structured
// listings. parse(print(m)) is structurally identical to m, and
// print(parse(print(m))) is byte-identical to print(m).
//
//===----------------------------------------------------------------------===//

#include "hjc/Dialect.h"
#include "hjc/IR.h"

#include <cctype>
#include <map>
#include <sstream>

namespace hjc::ir {

//===----------------------------------------------------------------------===//
// Printer
//===----------------------------------------------------------------------===//

namespace {

class Printer {
public:
  std::string print(const IrModule &m) {
    for (size_t i = 0; i < m.functions.size(); ++i) {
      if (i)
        out_ << "\n";
      function(m.functions[i], m.level);
    }
    return out_.str();
  }

private:
  std::ostringstream out_;
  std::map<ValueId, int> names_;

  std::string vname(ValueId v) const {
    auto it = names_.find(v);
    if (it == names_.end())
      return "%?";
    return "%" + std::to_string(it->second);
  }

  void numberValues(const IrFunction &f) {
    names_.clear();
    int next = 0;
    for (auto &b : f.blocks) {
      for (ValueId a : b.args)
        names_[a] = next++;
      for (auto &op : b.ops)
        for (ValueId r : op.results)
          names_[r] = next++;
    }
  }

  void attrs(const AttrMap &a) {
    if (a.empty())
      return;
    out_ << " {";
    bool first = true;
    for (auto &[k, v] : a) {
      if (!first)
        out_ << ", ";
      first = false;
      out_ << k << " = ";
      switch (v.kind()) {
      case Attr::Kind::Int:
        out_ << v.asInt();
        break;
      case Attr::Kind::String:
        out_ << '"' << v.asString() << '"';
        break;
      case Attr::Kind::Type:
        out_ << v.asType().str();
        break;
      }
    }
    out_ << "}";
  }

  void function(const IrFunction &f, Level level) {
    out_ << "func @" << f.name << "(";
    bool named = f.paramNames.size() == f.paramTypes.size();
    for (size_t i = 0; i < f.paramTypes.size(); ++i) {
      if (i)
        out_ << ", ";
      if (named)
        out_ << f.paramNames[i] << ": ";
      out_ << f.paramTypes[i].str();
    }
    out_ << ") -> " << f.returnType.str() << " level(" << levelName(level)
         << ") {\n";
    switch (level) {
    case Level::Core:
    case Level::Handshake:
      numberValues(f);
      for (size_t b = 0; b < f.blocks.size(); ++b)
        block(f, f.blocks[b], (int)b);
      break;
    case Level::Fsmd:
      if (f.fsmd)
        fsmd(*f.fsmd);
      break;
    case Level::Netlist:
      if (f.netlist)
        netlist(*f.netlist);
      break;
    }
    out_ << "}\n";
  }

  void block(const IrFunction &f, const BasicBlock &b, int idx) {
    out_ << "^bb" << idx << "(";
    for (size_t i = 0; i < b.args.size(); ++i) {
      if (i)
        out_ << ", ";
      out_ << vname(b.args[i]) << ": " << f.typeOf(b.args[i]).str();
    }
    out_ << "):\n";
    for (auto &op : b.ops)
      operation(f, op);
  }

  void operation(const IrFunction &f, const Operation &op) {
    out_ << "  ";
    if (!op.results.empty()) {
      for (size_t i = 0; i < op.results.size(); ++i) {
        if (i)
          out_ << ", ";
        out_ << vname(op.results[i]);
      }
      out_ << " = ";
    }
    out_ << op.opcode << "(";
    bool first = true;
    for (ValueId o : op.operands) {
      if (!first)
        out_ << ", ";
      first = false;
      out_ << vname(o);
    }
    for (auto &s : op.successors) {
      if (!first)
        out_ << ", ";
      first = false;
      out_ << "^bb" << s.block << "(";
      for (size_t i = 0; i < s.args.size(); ++i) {
        if (i)
          out_ << ", ";
        out_ << vname(s.args[i]);
      }
      out_ << ")";
    }
    out_ << ")";
    attrs(op.attrs);
    if (!op.results.empty()) {
      out_ << " : ";
      for (size_t i = 0; i < op.results.size(); ++i) {
        if (i)
          out_ << ", ";
        out_ << f.typeOf(op.results[i]).str();
      }
    }
    out_ << "\n";
  }

  //===--------------------------------------------------------------------===//
  // fsmd body
  //===--------------------------------------------------------------------===//

  void src(const FsmdDesign::Src &s) {
    switch (s.kind) {
    case FsmdDesign::SrcKind::Reg:
      out_ << "reg " << s.index;
      break;
    case FsmdDesign::SrcKind::Arg:
      out_ << "arg " << s.index;
      break;
    case FsmdDesign::SrcKind::Const:
      out_ << "const " << s.constVal << " : " << s.type.str();
      break;
    case FsmdDesign::SrcKind::Op:
      out_ << "op " << s.index;
      break;
    case FsmdDesign::SrcKind::MemData:
      out_ << "memdata " << s.index;
      break;
    }
  }

  void fsmd(const FsmdDesign &d) {
    for (auto &s : d.states)
      out_ << "  state \"" << s.name << "\"\n";
    out_ << "  entry " << d.entryState << "\n";
    out_ << "  done " << d.doneState << "\n";
    for (size_t i = 0; i < d.mems.size(); ++i)
      out_ << "  mem " << i << " \"" << d.mems[i].name << "\" depth "
           << d.mems[i].depth << " elem " << d.mems[i].elemType.str() << "\n";
    for (size_t i = 0; i < d.regs.size(); ++i)
      out_ << "  reg " << i << " \"" << d.regs[i].name
           << "\" : " << d.regs[i].type.str() << "\n";
    for (size_t i = 0; i < d.ops.size(); ++i) {
      auto &op = d.ops[i];
      out_ << "  op " << i << " = " << op.kind << " unit " << op.unit
           << " start " << op.startState;
      if (op.mem >= 0)
        out_ << " mem " << op.mem;
      out_ << " (";
      for (size_t j = 0; j < op.operands.size(); ++j) {
        if (j)
          out_ << ", ";
        src(op.operands[j]);
      }
      out_ << ") : " << op.resultType.str() << "\n";
    }
    for (auto &w : d.regWrites) {
      out_ << "  wr state " << w.state << " reg " << w.reg << " = ";
      src(w.src);
      out_ << "\n";
    }
    if (d.resultReg >= 0)
      out_ << "  result " << d.resultReg << "\n";
    for (auto &t : d.transitions) {
      out_ << "  trans " << t.from << " -> " << t.to;
      if (t.guard) {
        out_ << (t.negated ? " ifnot " : " if ");
        src(*t.guard);
      }
      out_ << "\n";
    }
  }

  //===--------------------------------------------------------------------===//
  // netlist body
  //===--------------------------------------------------------------------===//

  void netlist(const Netlist &n) {
    for (size_t i = 0; i < n.nets.size(); ++i)
      out_ << "  net %" << i << " \"" << n.nets[i].name << "\" : "
           << n.nets[i].width << "\n";
    for (auto &p : n.ports)
      out_ << "  port " << (p.isInput ? "in" : "out") << " \"" << p.name
           << "\" %" << p.net << "\n";
    for (auto &node : n.nodes) {
      out_ << "  node %" << node.output << " = " << combKindName(node.kind)
           << "(";
      if (node.kind == CombKind::Const) {
        out_ << node.constVal;
      } else {
        for (size_t i = 0; i < node.inputs.size(); ++i) {
          if (i)
            out_ << ", ";
          out_ << "%" << node.inputs[i];
        }
      }
      out_ << ")\n";
    }
    for (auto &r : n.regs) {
      out_ << "  reg \"" << r.name << "\" %" << r.q << " init " << r.resetVal
           << " next %" << r.next;
      if (r.enable != kNoNet)
        out_ << " enable %" << r.enable;
      out_ << "\n";
    }
    for (auto &m : n.mems)
      out_ << "  mem \"" << m.name << "\" depth " << m.depth << " width "
           << m.width << " read(%" << m.raddr << ", %" << m.ren << ", %"
           << m.rdata << ") write(%" << m.waddr << ", %" << m.wdata << ", %"
           << m.wen << ")\n";
  }
};

} // namespace

std::string printIr(const IrModule &module) { return Printer().print(module); }

bool structurallyEqual(const IrModule &a, const IrModule &b) {
  return printIr(a) == printIr(b);
}

//===----------------------------------------------------------------------===//
// Parser
//===----------------------------------------------------------------------===//

namespace {

class IrParser {
public:
  explicit IrParser(const std::string &text) : text_(text) {}

  IrModule run() {
    IrModule m;
    bool levelSet = false;
    skipWs();
    while (pos_ < text_.size()) {
      Level lvl;
      m.functions.push_back(function(lvl));
      if (!levelSet) {
        m.level = lvl;
        levelSet = true;
      } else if (m.level != lvl) {
        fail("function level differs from module level");
      }
      skipWs();
    }
    return m;
  }

private:
  const std::string &text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;

  // Per-function state.
  std::map<int, ValueId> values_;
  IrFunction *fn_ = nullptr;
  std::vector<std::pair<int, Span>> pendingTypes_; // used before defined

  [[noreturn]] void fail(const std::string &msg) {
    throw CompileError(
        errorDiag(msg, Span{"<ir>", line_, col_}, "IrSyntaxError"));
  }

  char peek(size_t off = 0) const {
    return pos_ + off < text_.size() ? text_[pos_ + off] : '\0';
  }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skipWs() {
    while (pos_ < text_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n')
        advance();
      else if (c == '/' && peek(1) == '/') {
        while (pos_ < text_.size() && peek() != '\n')
          advance();
      } else
        break;
    }
  }

  bool tryKeyword(const std::string &kw) {
    skipWs();
    size_t save = pos_;
    int sl = line_, sc = col_;
    for (char c : kw) {
      if (peek() != c) {
        pos_ = save;
        line_ = sl;
        col_ = sc;
        return false;
      }
      advance();
    }
    // keyword must not continue as identifier
    if (std::isalnum((unsigned char)peek()) || peek() == '_' ||
        peek() == '.') {
      pos_ = save;
      line_ = sl;
      col_ = sc;
      return false;
    }
    return true;
  }

  void expectChar(char c) {
    skipWs();
    if (peek() != c)
      fail(std::string("expected '") + c + "'");
    advance();
  }

  bool tryChar(char c) {
    skipWs();
    if (peek() != c)
      return false;
    advance();
    return true;
  }

  std::string ident() {
    skipWs();
    std::string s;
    if (!std::isalpha((unsigned char)peek()) && peek() != '_')
      fail("expected identifier");
    while (std::isalnum((unsigned char)peek()) || peek() == '_' ||
           peek() == '.' || peek() == '$')
      s += advance();
    return s;
  }

  int64_t integer() {
    skipWs();
    bool neg = false;
    if (peek() == '-') {
      neg = true;
      advance();
    }
    if (!std::isdigit((unsigned char)peek()))
      fail("expected integer");
    int64_t v = 0;
    while (std::isdigit((unsigned char)peek()))
      v = v * 10 + (advance() - '0');
    return neg ? -v : v;
  }

  std::string quoted() {
    expectChar('"');
    std::string s;
    while (peek() != '"' && pos_ < text_.size())
      s += advance();
    expectChar('"');
    return s;
  }

  HwType type() {
    skipWs();
    if (peek() == '[') {
      advance();
      HwType elem = type();
      expectChar(';');
      int64_t len = integer();
      expectChar(']');
      return HwType::makeArray(elem, (uint32_t)len);
    }
    return typeFromName(ident());
  }

  HwType typeFromName(const std::string &n) {
    if (n == "token")
      return HwType::token();
    if (n == "i8")
      return HwType::i8();
    if (n == "i16")
      return HwType::i16();
    if (n == "i32")
      return HwType::i32();
    if (n == "u1")
      return HwType::u1();
    if (n == "u8")
      return HwType::u8();
    if (n == "u16")
      return HwType::u16();
    if (n == "u32")
      return HwType::u32();
    fail("unknown type '" + n + "'");
  }

  int valueNumber() {
    skipWs();
    if (peek() != '%')
      fail("expected value reference");
    advance();
    if (!std::isdigit((unsigned char)peek()))
      fail("expected value number");
    int v = 0;
    while (std::isdigit((unsigned char)peek()))
      v = v * 10 + (advance() - '0');
    return v;
  }

  /// Value use; creates a placeholder if not yet defined (forward references
  /// are legal in handshake bodies).
  ValueId useValue(int num) {
    auto it = values_.find(num);
    if (it != values_.end())
      return it->second;
    ValueId v = fn_->addValue(HwType::token());
    values_[num] = v;
    pendingTypes_.push_back({num, Span{"<ir>", line_, col_}});
    return v;
  }

  ValueId defValue(int num, HwType t) {
    auto it = values_.find(num);
    if (it != values_.end()) {
      // forward-referenced; fill the type now
      fn_->valueTypes[(size_t)it->second] = t;
      for (auto p = pendingTypes_.begin(); p != pendingTypes_.end();)
        p = (p->first == num) ? pendingTypes_.erase(p) : p + 1;
      return it->second;
    }
    ValueId v = fn_->addValue(t);
    values_[num] = v;
    return v;
  }

  IrFunction function(Level &levelOut) {
    if (!tryKeyword("func"))
      fail("expected 'func'");
    expectChar('@');
    IrFunction f;
    fn_ = &f;
    values_.clear();
    pendingTypes_.clear();
    f.name = ident();
    expectChar('(');
    skipWs();
    if (peek() != ')') {
      // Parameters are either bare types or `name: type`.
      do {
        skipWs();
        if (peek() == '[') {
          f.paramTypes.push_back(type());
          continue;
        }
        std::string n = ident();
        skipWs();
        if (peek() == ':') {
          advance();
          f.paramNames.push_back(n);
          f.paramTypes.push_back(type());
        } else {
          f.paramTypes.push_back(typeFromName(n));
        }
      } while (tryChar(','));
      if (!f.paramNames.empty() &&
          f.paramNames.size() != f.paramTypes.size())
        fail("either all or no parameters may be named");
    }
    expectChar(')');
    expectChar('-');
    expectChar('>');
    f.returnType = type();
    if (!tryKeyword("level"))
      fail("expected 'level'");
    expectChar('(');
    std::string lvl = ident();
    auto l = levelFromName(lvl);
    if (!l)
      fail("unknown level '" + lvl + "'");
    levelOut = *l;
    expectChar(')');
    expectChar('{');
    switch (*l) {
    case Level::Core:
    case Level::Handshake:
      blocks(f);
      break;
    case Level::Fsmd:
      f.fsmd = fsmdBody(f);
      break;
    case Level::Netlist:
      f.netlist = netlistBody();
      break;
    }
    expectChar('}');
    if (!pendingTypes_.empty())
      throw CompileError(errorDiag("undefined value %" +
                                       std::to_string(pendingTypes_[0].first),
                                   pendingTypes_[0].second, "IrSyntaxError"));
    return f;
  }

  void blocks(IrFunction &f) {
    skipWs();
    while (peek() == '^') {
      advance();
      std::string bb = ident();
      if (bb.substr(0, 2) != "bb")
        fail("expected block label ^bbN");
      int idx = std::stoi(bb.substr(2));
      if (idx != (int)f.blocks.size())
        fail("block labels must be ^bb0, ^bb1, ... in order");
      f.blocks.emplace_back();
      BasicBlock &blk = f.blocks.back();
      expectChar('(');
      skipWs();
      if (peek() != ')') {
        do {
          int num = valueNumber();
          expectChar(':');
          HwType t = type();
          blk.args.push_back(defValue(num, t));
        } while (tryChar(','));
      }
      expectChar(')');
      expectChar(':');
      skipWs();
      while (peek() != '^' && peek() != '}' && pos_ < text_.size()) {
        blk.ops.push_back(operation());
        skipWs();
      }
      skipWs();
    }
  }

  Operation operation() {
    Operation op;
    op.span = Span{"<ir>", line_, col_};
    std::vector<int> resultNums;
    skipWs();
    if (peek() == '%') {
      resultNums.push_back(valueNumber());
      while (tryChar(','))
        resultNums.push_back(valueNumber());
      expectChar('=');
    }
    op.opcode = ident();
    expectChar('(');
    skipWs();
    if (peek() != ')') {
      do {
        skipWs();
        if (peek() == '^') {
          advance();
          std::string bb = ident();
          if (bb.substr(0, 2) != "bb")
            fail("expected block label");
          Successor s;
          s.block = std::stoi(bb.substr(2));
          expectChar('(');
          skipWs();
          if (peek() != ')') {
            do
              s.args.push_back(useValue(valueNumber()));
            while (tryChar(','));
          }
          expectChar(')');
          op.successors.push_back(std::move(s));
        } else {
          op.operands.push_back(useValue(valueNumber()));
        }
      } while (tryChar(','));
    }
    expectChar(')');
    skipWs();
    if (peek() == '{') {
      advance();
      skipWs();
      if (peek() != '}') {
        do {
          std::string key = ident();
          expectChar('=');
          skipWs();
          if (peek() == '"') {
            op.attrs.emplace(key, Attr(quoted()));
          } else if (peek() == '-' || std::isdigit((unsigned char)peek())) {
            op.attrs.emplace(key, Attr(integer()));
          } else {
            op.attrs.emplace(key, Attr(type()));
          }
        } while (tryChar(','));
      }
      expectChar('}');
    }
    if (!resultNums.empty()) {
      expectChar(':');
      std::vector<HwType> types;
      do
        types.push_back(type());
      while (tryChar(','));
      if (types.size() != resultNums.size())
        fail("result/type count mismatch");
      for (size_t i = 0; i < resultNums.size(); ++i)
        op.results.push_back(defValue(resultNums[i], types[i]));
    }
    return op;
  }

  //===--------------------------------------------------------------------===//
  // fsmd body
  //===--------------------------------------------------------------------===//

  FsmdDesign::Src parseSrc(const IrFunction &f, const FsmdDesign &d) {
    FsmdDesign::Src s;
    std::string k = ident();
    if (k == "reg") {
      s.kind = FsmdDesign::SrcKind::Reg;
      s.index = (int)integer();
    } else if (k == "arg") {
      s.kind = FsmdDesign::SrcKind::Arg;
      s.index = (int)integer();
      s.type = f.paramTypes.at((size_t)s.index);
    } else if (k == "const") {
      s.kind = FsmdDesign::SrcKind::Const;
      s.constVal = integer();
      expectChar(':');
      s.type = type();
    } else if (k == "op") {
      s.kind = FsmdDesign::SrcKind::Op;
      s.index = (int)integer();
    } else if (k == "memdata") {
      s.kind = FsmdDesign::SrcKind::MemData;
      s.index = (int)integer();
    } else {
      fail("unknown source kind '" + k + "'");
    }
    return s;
  }

  void resolveSrcType(const IrFunction &f, FsmdDesign &d, FsmdDesign::Src &s) {
    switch (s.kind) {
    case FsmdDesign::SrcKind::Reg:
      s.type = d.regs.at((size_t)s.index).type;
      break;
    case FsmdDesign::SrcKind::Op:
      s.type = d.ops.at((size_t)s.index).resultType;
      break;
    case FsmdDesign::SrcKind::MemData:
      s.type = d.mems.at((size_t)s.index).elemType;
      break;
    default:
      break;
    }
  }

  FsmdDesign fsmdBody(const IrFunction &f) {
    FsmdDesign d;
    while (true) {
      if (tryKeyword("state")) {
        d.states.push_back({quoted()});
      } else if (tryKeyword("entry")) {
        d.entryState = (int)integer();
      } else if (tryKeyword("done")) {
        d.doneState = (int)integer();
      } else if (tryKeyword("mem")) {
        integer(); // index (positional)
        FsmdDesign::Memory m;
        m.name = quoted();
        if (!tryKeyword("depth"))
          fail("expected 'depth'");
        m.depth = (int)integer();
        if (!tryKeyword("elem"))
          fail("expected 'elem'");
        m.elemType = type();
        d.mems.push_back(std::move(m));
      } else if (tryKeyword("reg")) {
        integer(); // index
        FsmdDesign::Register r;
        r.name = quoted();
        expectChar(':');
        r.type = type();
        d.regs.push_back(std::move(r));
      } else if (tryKeyword("op")) {
        integer(); // index
        expectChar('=');
        FsmdDesign::DpOp op;
        op.kind = ident();
        if (!tryKeyword("unit"))
          fail("expected 'unit'");
        op.unit = (int)integer();
        if (!tryKeyword("start"))
          fail("expected 'start'");
        op.startState = (int)integer();
        if (tryKeyword("mem"))
          op.mem = (int)integer();
        expectChar('(');
        skipWs();
        if (peek() != ')') {
          do
            op.operands.push_back(parseSrc(f, d));
          while (tryChar(','));
        }
        expectChar(')');
        expectChar(':');
        op.resultType = type();
        d.ops.push_back(std::move(op));
      } else if (tryKeyword("wr")) {
        if (!tryKeyword("state"))
          fail("expected 'state'");
        FsmdDesign::RegWrite w;
        w.state = (int)integer();
        if (!tryKeyword("reg"))
          fail("expected 'reg'");
        w.reg = (int)integer();
        expectChar('=');
        w.src = parseSrc(f, d);
        d.regWrites.push_back(std::move(w));
      } else if (tryKeyword("result")) {
        d.resultReg = (int)integer();
      } else if (tryKeyword("trans")) {
        FsmdDesign::Transition t;
        t.from = (int)integer();
        expectChar('-');
        expectChar('>');
        t.to = (int)integer();
        if (tryKeyword("if")) {
          t.guard = parseSrc(f, d);
        } else if (tryKeyword("ifnot")) {
          t.guard = parseSrc(f, d);
          t.negated = true;
        }
        d.transitions.push_back(std::move(t));
      } else {
        break;
      }
    }
    // Fill derived source types now that all tables exist.
    for (auto &op : d.ops)
      for (auto &s : op.operands)
        resolveSrcType(f, d, s);
    for (auto &w : d.regWrites)
      resolveSrcType(f, d, w.src);
    for (auto &t : d.transitions)
      if (t.guard)
        resolveSrcType(f, d, *t.guard);
    return d;
  }

  //===--------------------------------------------------------------------===//
  // netlist body
  //===--------------------------------------------------------------------===//

  NetId netRef() {
    skipWs();
    if (peek() != '%')
      fail("expected net reference");
    advance();
    return (NetId)integer();
  }

  Netlist netlistBody() {
    Netlist n;
    while (true) {
      if (tryKeyword("net")) {
        NetId id = netRef();
        if (id != (NetId)n.nets.size())
          fail("net ids must be dense and in order");
        std::string name = quoted();
        expectChar(':');
        n.addNet(name, (int)integer());
      } else if (tryKeyword("port")) {
        NlPort p;
        if (tryKeyword("in"))
          p.isInput = true;
        else if (tryKeyword("out"))
          p.isInput = false;
        else
          fail("expected 'in' or 'out'");
        p.name = quoted();
        p.net = netRef();
        p.width = n.width(p.net);
        n.ports.push_back(std::move(p));
      } else if (tryKeyword("node")) {
        CombNode node;
        node.output = netRef();
        expectChar('=');
        std::string kind = ident();
        node.kind = combKindFromName(kind);
        expectChar('(');
        skipWs();
        if (node.kind == CombKind::Const) {
          node.constVal = integer();
        } else if (peek() != ')') {
          do
            node.inputs.push_back(netRef());
          while (tryChar(','));
        }
        expectChar(')');
        n.nodes.push_back(std::move(node));
      } else if (tryKeyword("reg")) {
        NlRegister r;
        r.name = quoted();
        r.q = netRef();
        if (!tryKeyword("init"))
          fail("expected 'init'");
        r.resetVal = integer();
        if (!tryKeyword("next"))
          fail("expected 'next'");
        r.next = netRef();
        if (tryKeyword("enable"))
          r.enable = netRef();
        r.width = n.width(r.q);
        n.regs.push_back(std::move(r));
      } else if (tryKeyword("mem")) {
        NlMemory m;
        m.name = quoted();
        if (!tryKeyword("depth"))
          fail("expected 'depth'");
        m.depth = (int)integer();
        if (!tryKeyword("width"))
          fail("expected 'width'");
        m.width = (int)integer();
        if (!tryKeyword("read"))
          fail("expected 'read'");
        expectChar('(');
        m.raddr = netRef();
        expectChar(',');
        m.ren = netRef();
        expectChar(',');
        m.rdata = netRef();
        expectChar(')');
        if (!tryKeyword("write"))
          fail("expected 'write'");
        expectChar('(');
        m.waddr = netRef();
        expectChar(',');
        m.wdata = netRef();
        expectChar(',');
        m.wen = netRef();
        expectChar(')');
        n.mems.push_back(std::move(m));
      } else {
        break;
      }
    }
    return n;
  }

  CombKind combKindFromName(const std::string &name) {
    for (int k = (int)CombKind::Const; k <= (int)CombKind::Trunc; ++k)
      if (name == combKindName((CombKind)k))
        return (CombKind)k;
    fail("unknown comb node kind '" + name + "'");
  }
};

} // namespace

IrModule parseIr(const std::string &text) { return IrParser(text).run(); }

} // namespace hjc::ir

namespace hjc {

const char *combKindName(CombKind k) {
  switch (k) {
  case CombKind::Const:
    return "const";
  case CombKind::Add:
    return "add";
  case CombKind::Sub:
    return "sub";
  case CombKind::Mul:
    return "mul";
  case CombKind::And:
    return "and";
  case CombKind::Or:
    return "or";
  case CombKind::Xor:
    return "xor";
  case CombKind::Not:
    return "not";
  case CombKind::Neg:
    return "neg";
  case CombKind::Shl:
    return "shl";
  case CombKind::ShrL:
    return "shrl";
  case CombKind::ShrA:
    return "shra";
  case CombKind::Eq:
    return "eq";
  case CombKind::Ne:
    return "ne";
  case CombKind::LtS:
    return "lts";
  case CombKind::LtU:
    return "ltu";
  case CombKind::LeS:
    return "les";
  case CombKind::LeU:
    return "leu";
  case CombKind::GtS:
    return "gts";
  case CombKind::GtU:
    return "gtu";
  case CombKind::GeS:
    return "ges";
  case CombKind::GeU:
    return "geu";
  case CombKind::Mux:
    return "mux";
  case CombKind::ZExt:
    return "zext";
  case CombKind::SExt:
    return "sext";
  case CombKind::Trunc:
    return "trunc";
  }
  return "?";
}

} // namespace hjc
