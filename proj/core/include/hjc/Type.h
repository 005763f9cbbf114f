//===- Type.h - Hardware value types ----------------------------*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef HJC_TYPE_H
#define HJC_TYPE_H

#include <cassert>
#include <cstdint>
#include <string>

namespace hjc {

/// A concrete hardware value type. Every value in every IR level carries one.
///
/// Ints are restricted to widths 1/8/16/32. Arrays are one-dimensional with a
/// compile-time length and integer elements. Bool is u1. Token is the 0-width
/// control payload used on handshake channels.
class HwType {
public:
  enum class Kind : uint8_t { Int, Array, Token };

  HwType() : kind_(Kind::Int), width_(32), signed_(true), length_(0) {}

  static HwType makeInt(int width, bool isSigned) {
    assert(width == 1 || width == 8 || width == 16 || width == 32);
    HwType t;
    t.kind_ = Kind::Int;
    t.width_ = width;
    t.signed_ = isSigned;
    return t;
  }
  static HwType i8() { return makeInt(8, true); }
  static HwType i16() { return makeInt(16, true); }
  static HwType i32() { return makeInt(32, true); }
  static HwType u1() { return makeInt(1, false); }
  static HwType u8() { return makeInt(8, false); }
  static HwType u16() { return makeInt(16, false); }
  static HwType u32() { return makeInt(32, false); }

  static HwType makeArray(HwType element, uint32_t length) {
    assert(element.isInt() && length >= 1);
    HwType t;
    t.kind_ = Kind::Array;
    t.width_ = element.width_;
    t.signed_ = element.signed_;
    t.length_ = length;
    return t;
  }

  static HwType token() {
    HwType t;
    t.kind_ = Kind::Token;
    t.width_ = 0;
    t.signed_ = false;
    return t;
  }

  Kind kind() const { return kind_; }
  bool isInt() const { return kind_ == Kind::Int; }
  bool isArray() const { return kind_ == Kind::Array; }
  bool isToken() const { return kind_ == Kind::Token; }
  bool isBool() const { return isInt() && width_ == 1 && !signed_; }

  /// Bit width of an Int, or of an Array element. 0 for Token.
  int width() const { return width_; }
  bool isSigned() const { return signed_; }
  uint32_t arrayLength() const {
    assert(isArray());
    return length_;
  }
  HwType elementType() const {
    assert(isArray());
    return makeInt(width_, signed_);
  }

  bool operator==(const HwType &o) const {
    return kind_ == o.kind_ && width_ == o.width_ && signed_ == o.signed_ &&
           length_ == o.length_;
  }
  bool operator!=(const HwType &o) const { return !(*this == o); }

  /// Prints as it appears in source and IR text: i32, u1, [i8; 16], token.
  std::string str() const;

  /// Reduce an arbitrary 64-bit value into this Int type's range
  /// (two's-complement wraparound). Result is the signed interpretation.
  int64_t wrap(int64_t v) const;

  /// Reinterpret as the unsigned bit pattern of this width.
  uint64_t bits(int64_t v) const;

private:
  Kind kind_;
  int width_;
  bool signed_;
  uint32_t length_ = 0;
};

} // namespace hjc

#endif // HJC_TYPE_H
