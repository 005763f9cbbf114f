//===- Sha256.h - SHA-256 digest for output fingerprints --------*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef HJC_SHA256_H
#define HJC_SHA256_H

#include <string>

namespace hjc {

/// Hex-encoded SHA-256 digest of `data`. Used to fingerprint the source
/// text in emitted Verilog headers so outputs are traceable to inputs.
std::string sha256Hex(const std::string &data);

} // namespace hjc

#endif // HJC_SHA256_H
