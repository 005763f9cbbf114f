//===- Verifier.h - IR verification -----------------------------*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef HJC_VERIFIER_H
#define HJC_VERIFIER_H

#include "hjc/IR.h"

#include <vector>

namespace hjc::ir {

/// Checks the dialect-generic SSA invariants and the level-specific rules
/// for the module's level. Returns an empty list iff the module is valid;
/// never mutates the module. Every diagnostic names its rule id.
std::vector<Diagnostic> verify(const IrModule &module);

} // namespace hjc::ir

#endif // HJC_VERIFIER_H
