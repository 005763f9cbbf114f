//===- TestUtil.h - Shared test helpers -------------------------*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef HJC_TESTS_TESTUTIL_H
#define HJC_TESTS_TESTUTIL_H

#include "hjc/LowerToCore.h"
#include "hjc/Parser.h"
#include "hjc/Typecheck.h"

#include <fstream>
#include <sstream>
#include <string>

namespace hjc::test {

/// Front end through inlining: source text to a single-entry core module.
inline ir::IrModule compileCore(const std::string &source,
                                const std::string &entry = "main") {
  return lowerToCore(typecheck(parse(source, "test.hj")), entry);
}

/// Front end without inlining; keeps the full call graph.
inline ir::IrModule compileCorePreInline(const std::string &source) {
  return buildCoreModule(typecheck(parse(source, "test.hj")));
}

inline std::string readFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace hjc::test

#endif // HJC_TESTS_TESTUTIL_H
