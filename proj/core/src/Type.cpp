//===- Type.cpp - Hardware value types ------------------------------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "hjc/Type.h"

namespace hjc {

std::string HwType::str() const {
  switch (kind_) {
  case Kind::Token:
    return "token";
  case Kind::Int:
    return (signed_ ? "i" : "u") + std::to_string(width_);
  case Kind::Array:
    return "[" + elementType().str() + "; " + std::to_string(length_) + "]";
  }
  return "?";
}

uint64_t HwType::bits(int64_t v) const {
  if (width_ == 0)
    return 0;
  uint64_t mask = width_ >= 64 ? ~0ull : ((1ull << width_) - 1);
  return (uint64_t)v & mask;
}

int64_t HwType::wrap(int64_t v) const {
  uint64_t b = bits(v);
  if (signed_ && width_ < 64 && (b >> (width_ - 1)) & 1)
    return (int64_t)(b | ~((1ull << width_) - 1));
  return (int64_t)b;
}

} // namespace hjc
