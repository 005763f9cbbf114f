//===- LowerToCore.h - Typed AST to core-level SSA IR -----------*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef HJC_LOWERTOCORE_H
#define HJC_LOWERTOCORE_H

#include "hjc/IR.h"
#include "hjc/Typecheck.h"

namespace hjc {

/// Translates every function of a typed AST to core-level SSA: mutable
/// locals become block arguments along control-flow edges; structured
/// control flow becomes branches; calls stay as core.call operations.
ir::IrModule buildCoreModule(const TypedAst &ast);

/// Exhaustively inlines all calls bottom-up over the acyclic call graph,
/// then keeps only the entry function. Throws CompileError with
/// InlineBudgetExceeded if the post-inline entry exceeds opBudget
/// operations, EntryNotFound / EntrySignatureError for a bad entry.
void inlineAll(ir::IrModule &module, const std::string &entry,
               int64_t opBudget = 100000);

/// Inlines every core.call in every function (callee-first over the acyclic
/// call graph) but keeps all functions. This is the "inline" pipeline pass.
void inlineAllCalls(ir::IrModule &module);

/// buildCoreModule + inlineAll with the default budget.
ir::IrModule lowerToCore(const TypedAst &ast, const std::string &entry,
                         int64_t opBudget = 100000);

} // namespace hjc

#endif // HJC_LOWERTOCORE_H
