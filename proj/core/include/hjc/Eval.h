//===- Eval.h - Shared two's-complement operator semantics ------*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef HJC_EVAL_H
#define HJC_EVAL_H

#include "hjc/Type.h"

#include <cstdint>
#include <string>
#include <vector>

namespace hjc {

/// Evaluates one datapath operator ("add", "cmp.lt", "cast", ...) under the
/// project-wide integer semantics: two's-complement wraparound, shift
/// amounts modulo operand width, arithmetic vs logical shift-right and
/// comparison signedness from the operand type, cast truncate/extend by
/// source signedness. Values are canonical (wrapped) int64_t.
///
/// Used by the interpreter, the constant folder, and test oracles; the
/// netlist simulator has its own bit-level implementation, which the
/// differential tests check against this one.
int64_t evalOperator(const std::string &kind, const std::vector<int64_t> &args,
                     HwType resultType, const std::vector<HwType> &argTypes);

} // namespace hjc

#endif // HJC_EVAL_H
