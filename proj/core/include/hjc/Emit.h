//===- Emit.h - Netlist lowering and Verilog emission -----------*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef HJC_EMIT_H
#define HJC_EMIT_H

#include "hjc/Diagnostics.h"
#include "hjc/IR.h"

#include <string>
#include <vector>

namespace hjc {

struct EmitConfig {
  std::string modulePrefix;           // prepended to the function name
  std::string version = "0.1.0";      // tool version for the header comment
  std::string inputSha256;            // hex digest of the source file
};

/// Lowers an fsmd-level module to the netlist level. Static port convention:
/// clk, rst, start, done, one arg_<name> input per parameter (latched while
/// start is high in the entry state), result output valid with done.
ir::IrModule lowerFsmdToNetlist(const ir::IrModule &module);

/// Lowers a handshake-level module to the netlist level. Dynamic port
/// convention: clk, rst, per-argument <name>_data/_valid/_ready, and a
/// result_data/_valid/_ready channel.
ir::IrModule lowerHandshakeToNetlist(const ir::IrModule &module);

/// Prints one netlist-level function as a self-contained Verilog-2001
/// module. Deterministic: byte-identical output for identical inputs.
std::string printVerilog(const ir::IrModule &module, const EmitConfig &config);

/// Minimal lexical/bracket well-formedness check for emitted Verilog:
/// token-level scan plus begin/end, module/endmodule, case/endcase and
/// parenthesis/bracket balancing.
std::vector<Diagnostic> checkVerilogText(const std::string &text);

} // namespace hjc

#endif // HJC_EMIT_H
