//===- Passes.h - Core-level rewrite passes ---------------------*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef HJC_PASSES_H
#define HJC_PASSES_H

#include "hjc/IR.h"

#include <string>
#include <vector>

namespace hjc {

/// Folds operations whose operands are all constants, and conditional
/// branches on a constant condition. Runs to a fixpoint.
void constFold(ir::IrModule &module);

/// Removes side-effect-free operations whose results are unused, to a
/// fixpoint. Terminators, memory writes, and calls are always kept.
void deadCodeElim(ir::IrModule &module);

/// Names accepted by runPipeline: "constfold", "dce", "inline".
const std::vector<std::string> &knownPasses();

/// Runs the named passes in order and verifies the module after each one.
/// Throws CompileError with rule UnknownPassName for an unrecognized name,
/// or PassError if a pass leaves the module in a state the verifier rejects.
void runPipeline(ir::IrModule &module, const std::vector<std::string> &passes);

} // namespace hjc

#endif // HJC_PASSES_H
