//===- EmitVerilog.cpp - Deterministic Verilog-2001 printer ---------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Prints one netlist-level function as a flat, self-contained Verilog-2001
// module. The printer is a pure function of (netlist, config): declarations
// come before uses, combinational assigns are emitted in topological order
// with ties broken by node creation index, and identifiers are sanitized
// deterministically. The cycle simulator executes the same netlist object,
// so simulated results speak for the printed text.
//
//===----------------------------------------------------------------------===//

#include "hjc/Emit.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace hjc;
using namespace hjc::ir;

namespace {

const std::set<std::string> &reservedWords() {
  static const std::set<std::string> words = {
      "always",   "and",      "assign",    "begin",    "buf",     "case",
      "casex",    "casez",    "default",   "defparam", "else",    "end",
      "endcase",  "endfunction", "endgenerate", "endmodule", "endtask",
      "for",      "forever",  "function",  "generate", "if",      "initial",
      "inout",    "input",    "integer",   "localparam", "module", "nand",
      "negedge",  "nor",      "not",       "or",       "output",  "parameter",
      "posedge",  "reg",      "repeat",    "signed",   "task",    "tri",
      "wand",     "while",    "wire",      "wor",      "xnor",    "xor"};
  return words;
}

/// Deterministic identifier sanitizer: non [A-Za-z0-9_] -> '_', leading
/// digit gets a '_' prefix, reserved words get a '_v' suffix, collisions a
/// '_N' suffix.
class Namer {
public:
  std::string assign(const std::string &raw) {
    std::string s;
    for (char c : raw)
      s += (std::isalnum((unsigned char)c) || c == '_') ? c : '_';
    if (s.empty() || std::isdigit((unsigned char)s[0]))
      s = "_" + s;
    if (reservedWords().count(s))
      s += "_v";
    std::string name = s;
    int n = 0;
    while (!used_.insert(name).second)
      name = s + "_" + std::to_string(++n);
    return name;
  }

private:
  std::set<std::string> used_;
};

std::string sizedConst(int width, uint64_t value) {
  uint64_t mask = width >= 64 ? ~0ull : ((1ull << width) - 1);
  std::ostringstream os;
  os << width << "'d" << (value & mask);
  return os.str();
}

class Printer {
public:
  Printer(const IrFunction &fn, const EmitConfig &cfg)
      : fn_(fn), nl_(*fn.netlist), cfg_(cfg) {}

  std::string print() {
    nameEverything();
    os_ << "// hardware-jl-flow " << cfg_.version;
    if (!cfg_.inputSha256.empty())
      os_ << " input-sha256=" << cfg_.inputSha256;
    os_ << "\n";
    os_ << "module " << moduleName_ << " (\n";
    for (size_t i = 0; i < nl_.ports.size(); ++i) {
      const NlPort &p = nl_.ports[i];
      bool regPort = !p.isInput && netIsReg_[(size_t)p.net];
      os_ << "  " << (p.isInput ? "input wire " : regPort ? "output reg "
                                                          : "output wire ")
          << widthSpec(p.width) << portName_[i]
          << (i + 1 < nl_.ports.size() ? "," : "") << "\n";
    }
    os_ << ");\n";
    declareNets();
    declareMemories();
    printAssigns();
    printRegisters();
    printMemories();
    os_ << "endmodule\n";
    return os_.str();
  }

private:
  const IrFunction &fn_;
  const Netlist &nl_;
  const EmitConfig &cfg_;
  Namer namer_;
  std::ostringstream os_;
  std::string moduleName_;
  std::vector<std::string> portName_, netName_, memName_;
  std::vector<bool> netIsReg_;

  static std::string widthSpec(int w) {
    return w == 1 ? std::string() : "[" + std::to_string(w - 1) + ":0] ";
  }

  void nameEverything() {
    moduleName_ = namer_.assign(cfg_.modulePrefix + fn_.name);
    // Ports claim their names first so the interface is stable.
    for (auto &p : nl_.ports)
      portName_.push_back(namer_.assign(p.name));
    netName_.resize(nl_.nets.size());
    netIsReg_.assign(nl_.nets.size(), false);
    // Port nets reuse the port identifier.
    std::vector<bool> isPortNet(nl_.nets.size(), false);
    for (size_t i = 0; i < nl_.ports.size(); ++i) {
      netName_[(size_t)nl_.ports[i].net] = portName_[i];
      isPortNet[(size_t)nl_.ports[i].net] = true;
    }
    for (size_t i = 0; i < nl_.nets.size(); ++i)
      if (!isPortNet[i])
        netName_[i] = namer_.assign(nl_.nets[i].name);
    for (auto &m : nl_.mems)
      memName_.push_back(namer_.assign(m.name));
    for (auto &r : nl_.regs)
      netIsReg_[(size_t)r.q] = true;
    for (auto &m : nl_.mems)
      netIsReg_[(size_t)m.rdata] = true;
  }

  void declareNets() {
    std::vector<bool> isPortNet(nl_.nets.size(), false);
    for (auto &p : nl_.ports)
      isPortNet[(size_t)p.net] = true;
    for (size_t i = 0; i < nl_.nets.size(); ++i) {
      if (isPortNet[i])
        continue;
      os_ << "  " << (netIsReg_[i] ? "reg " : "wire ")
          << widthSpec(nl_.nets[i].width) << netName_[i] << ";\n";
    }
  }

  void declareMemories() {
    if (nl_.mems.empty())
      return;
    for (size_t i = 0; i < nl_.mems.size(); ++i) {
      const NlMemory &m = nl_.mems[i];
      os_ << "  reg " << widthSpec(m.width) << memName_[i] << " [0:"
          << (m.depth - 1) << "];\n";
    }
    os_ << "  integer mem_i;\n";
    os_ << "  initial begin\n";
    for (size_t i = 0; i < nl_.mems.size(); ++i) {
      const NlMemory &m = nl_.mems[i];
      os_ << "    for (mem_i = 0; mem_i < " << m.depth
          << "; mem_i = mem_i + 1) " << memName_[i] << "[mem_i] = "
          << sizedConst(m.width, 0) << ";\n";
    }
    os_ << "  end\n";
  }

  std::string n(NetId id) { return netName_[(size_t)id]; }

  std::string nodeExpr(const CombNode &node) {
    auto a = [&](size_t i) { return n(node.inputs[i]); };
    int wo = nl_.width(node.output);
    switch (node.kind) {
    case CombKind::Const:
      return sizedConst(wo, (uint64_t)node.constVal);
    case CombKind::Add:
      return a(0) + " + " + a(1);
    case CombKind::Sub:
      return a(0) + " - " + a(1);
    case CombKind::Mul:
      return a(0) + " * " + a(1);
    case CombKind::And:
      return a(0) + " & " + a(1);
    case CombKind::Or:
      return a(0) + " | " + a(1);
    case CombKind::Xor:
      return a(0) + " ^ " + a(1);
    case CombKind::Not:
      return "~" + a(0);
    case CombKind::Neg:
      return "-" + a(0);
    case CombKind::Shl:
      return a(0) + " << " + a(1);
    case CombKind::ShrL:
      return a(0) + " >> " + a(1);
    case CombKind::ShrA:
      return "$signed(" + a(0) + ") >>> " + a(1);
    case CombKind::Eq:
      return a(0) + " == " + a(1);
    case CombKind::Ne:
      return a(0) + " != " + a(1);
    case CombKind::LtS:
      return "$signed(" + a(0) + ") < $signed(" + a(1) + ")";
    case CombKind::LtU:
      return a(0) + " < " + a(1);
    case CombKind::LeS:
      return "$signed(" + a(0) + ") <= $signed(" + a(1) + ")";
    case CombKind::LeU:
      return a(0) + " <= " + a(1);
    case CombKind::GtS:
      return "$signed(" + a(0) + ") > $signed(" + a(1) + ")";
    case CombKind::GtU:
      return a(0) + " > " + a(1);
    case CombKind::GeS:
      return "$signed(" + a(0) + ") >= $signed(" + a(1) + ")";
    case CombKind::GeU:
      return a(0) + " >= " + a(1);
    case CombKind::Mux:
      return a(0) + " ? " + a(1) + " : " + a(2);
    case CombKind::ZExt: {
      int wi = nl_.width(node.inputs[0]);
      if (wi == wo)
        return a(0);
      return "{" + std::to_string(wo - wi) + "'d0, " + a(0) + "}";
    }
    case CombKind::SExt: {
      int wi = nl_.width(node.inputs[0]);
      if (wi == wo)
        return a(0);
      return "{{" + std::to_string(wo - wi) + "{" + a(0) + "[" +
             std::to_string(wi - 1) + "]}}, " + a(0) + "}";
    }
    case CombKind::Trunc: {
      int wi = nl_.width(node.inputs[0]);
      if (wi == wo)
        return a(0);
      return a(0) + "[" + std::to_string(wo - 1) + ":0]";
    }
    }
    throw std::logic_error("unhandled comb kind");
  }

  /// Topological order over comb nodes, ties broken by creation index.
  std::vector<int> topoOrder() {
    size_t nn = nl_.nodes.size();
    std::vector<int> driverNode(nl_.nets.size(), -1);
    for (size_t i = 0; i < nn; ++i)
      driverNode[(size_t)nl_.nodes[i].output] = (int)i;
    std::vector<int> unresolved(nn, 0);
    std::vector<std::vector<int>> succ(nn);
    for (size_t i = 0; i < nn; ++i)
      for (NetId in : nl_.nodes[i].inputs)
        if (driverNode[(size_t)in] >= 0) {
          ++unresolved[i];
          succ[(size_t)driverNode[(size_t)in]].push_back((int)i);
        }
    std::set<int> ready;
    for (size_t i = 0; i < nn; ++i)
      if (unresolved[i] == 0)
        ready.insert((int)i);
    std::vector<int> order;
    while (!ready.empty()) {
      int i = *ready.begin();
      ready.erase(ready.begin());
      order.push_back(i);
      for (int s : succ[(size_t)i])
        if (--unresolved[(size_t)s] == 0)
          ready.insert(s);
    }
    if (order.size() != nn)
      throw std::logic_error("combinational cycle while printing Verilog");
    return order;
  }

  void printAssigns() {
    for (int i : topoOrder())
      os_ << "  assign " << n(nl_.nodes[(size_t)i].output) << " = "
          << nodeExpr(nl_.nodes[(size_t)i]) << ";\n";
  }

  void printRegisters() {
    if (nl_.regs.empty())
      return;
    os_ << "  always @(posedge " << portName_[0] << ") begin\n";
    for (auto &r : nl_.regs) {
      os_ << "    if (" << portName_[1] << ") " << n(r.q) << " <= "
          << sizedConst(r.width, (uint64_t)r.resetVal) << ";\n";
      if (r.enable != kNoNet)
        os_ << "    else if (" << n(r.enable) << ") " << n(r.q) << " <= "
            << n(r.next) << ";\n";
      else
        os_ << "    else " << n(r.q) << " <= " << n(r.next) << ";\n";
    }
    os_ << "  end\n";
  }

  void printMemories() {
    for (size_t i = 0; i < nl_.mems.size(); ++i) {
      const NlMemory &m = nl_.mems[i];
      os_ << "  always @(posedge " << portName_[0] << ") begin\n";
      os_ << "    if (" << portName_[1] << ") " << n(m.rdata) << " <= "
          << sizedConst(m.width, 0) << ";\n";
      os_ << "    else if (" << n(m.ren) << ") " << n(m.rdata) << " <= "
          << memName_[i] << "[" << n(m.raddr) << "];\n";
      os_ << "    if (!" << portName_[1] << " && " << n(m.wen) << ") "
          << memName_[i] << "["
          << n(m.waddr) << "] <= " << n(m.wdata) << ";\n";
      os_ << "  end\n";
    }
  }
};

} // namespace

namespace hjc {

std::string printVerilog(const IrModule &module, const EmitConfig &config) {
  if (module.level != Level::Netlist || module.functions.empty() ||
      !module.functions[0].netlist)
    throw std::logic_error("printVerilog: expects a netlist-level module");
  return Printer(module.functions[0], config).print();
}

std::vector<Diagnostic> checkVerilogText(const std::string &text) {
  std::vector<Diagnostic> diags;
  auto err = [&](const std::string &msg, int line) {
    diags.push_back(errorDiag(msg, {"<verilog>", line, 1}, "VerilogCheck"));
  };

  // Token-level scan with begin/end-style pair balancing.
  std::vector<std::pair<std::string, int>> stack; // (opener, line)
  auto expectTop = [&](const std::string &open, const std::string &close,
                       int line) {
    if (stack.empty() || stack.back().first != open) {
      err("unmatched '" + close + "'", line);
      return;
    }
    stack.pop_back();
  };

  int line = 1;
  size_t i = 0, len = text.size();
  while (i < len) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < len && text[i + 1] == '/') {
      while (i < len && text[i] != '\n')
        ++i;
      continue;
    }
    if (std::isspace((unsigned char)c)) {
      ++i;
      continue;
    }
    if (c == '(' || c == '[' || c == '{') {
      stack.push_back({std::string(1, c), line});
      ++i;
      continue;
    }
    if (c == ')') {
      expectTop("(", ")", line);
      ++i;
      continue;
    }
    if (c == ']') {
      expectTop("[", "]", line);
      ++i;
      continue;
    }
    if (c == '}') {
      expectTop("{", "}", line);
      ++i;
      continue;
    }
    if (std::isalpha((unsigned char)c) || c == '_' || c == '$') {
      size_t j = i;
      while (j < len && (std::isalnum((unsigned char)text[j]) ||
                         text[j] == '_' || text[j] == '$'))
        ++j;
      std::string word = text.substr(i, j - i);
      if (word == "module" || word == "begin" || word == "case")
        stack.push_back({word, line});
      else if (word == "endmodule")
        expectTop("module", word, line);
      else if (word == "end")
        expectTop("begin", word, line);
      else if (word == "endcase")
        expectTop("case", word, line);
      i = j;
      continue;
    }
    if (std::isdigit((unsigned char)c)) {
      size_t j = i;
      while (j < len && (std::isalnum((unsigned char)text[j]) ||
                         text[j] == '\''))
        ++j;
      i = j;
      continue;
    }
    if (std::string("+-*/%&|^~!<>=?:;,.#@").find(c) != std::string::npos) {
      ++i;
      continue;
    }
    err(std::string("unexpected character '") + c + "'", line);
    ++i;
  }
  for (auto &[open, ln] : stack)
    err("unclosed '" + open + "'", ln);
  return diags;
}

} // namespace hjc
