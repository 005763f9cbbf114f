//===- Eval.cpp - Shared two's-complement operator semantics --------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "hjc/Eval.h"

#include <cassert>

namespace hjc {

int64_t evalOperator(const std::string &kind, const std::vector<int64_t> &args,
                     HwType resultType, const std::vector<HwType> &argTypes) {
  auto wrap = [&](int64_t v) { return resultType.wrap(v); };

  if (kind == "add")
    return wrap(args[0] + args[1]);
  if (kind == "sub")
    return wrap(args[0] - args[1]);
  if (kind == "mul")
    return wrap(args[0] * args[1]);
  if (kind == "and")
    return wrap(args[0] & args[1]);
  if (kind == "or")
    return wrap(args[0] | args[1]);
  if (kind == "xor")
    return wrap(args[0] ^ args[1]);
  if (kind == "neg")
    return wrap(-args[0]);
  if (kind == "not")
    return wrap(~args[0]);
  if (kind == "shl") {
    int width = argTypes[0].width();
    int amt = (int)(argTypes[1].bits(args[1]) % (uint64_t)width);
    return wrap((int64_t)(argTypes[0].bits(args[0]) << amt));
  }
  if (kind == "shr") {
    int width = argTypes[0].width();
    int amt = (int)(argTypes[1].bits(args[1]) % (uint64_t)width);
    if (argTypes[0].isSigned())
      return wrap(argTypes[0].wrap(args[0]) >> amt); // arithmetic
    return wrap((int64_t)(argTypes[0].bits(args[0]) >> amt)); // logical
  }
  if (kind == "cmp.eq")
    return argTypes[0].bits(args[0]) == argTypes[1].bits(args[1]) ? 1 : 0;
  if (kind == "cmp.ne")
    return argTypes[0].bits(args[0]) != argTypes[1].bits(args[1]) ? 1 : 0;
  if (kind == "cmp.lt" || kind == "cmp.le" || kind == "cmp.gt" ||
      kind == "cmp.ge") {
    bool lt, eq;
    if (argTypes[0].isSigned()) {
      lt = argTypes[0].wrap(args[0]) < argTypes[1].wrap(args[1]);
      eq = argTypes[0].wrap(args[0]) == argTypes[1].wrap(args[1]);
    } else {
      lt = argTypes[0].bits(args[0]) < argTypes[1].bits(args[1]);
      eq = argTypes[0].bits(args[0]) == argTypes[1].bits(args[1]);
    }
    if (kind == "cmp.lt")
      return lt ? 1 : 0;
    if (kind == "cmp.le")
      return (lt || eq) ? 1 : 0;
    if (kind == "cmp.gt")
      return (!lt && !eq) ? 1 : 0;
    return !lt ? 1 : 0; // cmp.ge
  }
  if (kind == "select")
    return wrap(args[0] ? args[1] : args[2]);
  if (kind == "cast") {
    // Source value is canonical for its own type; re-wrapping into the
    // target width performs trunc / sext / zext as appropriate.
    return wrap(argTypes[0].wrap(args[0]));
  }
  assert(false && "unknown operator kind");
  return 0;
}

} // namespace hjc
