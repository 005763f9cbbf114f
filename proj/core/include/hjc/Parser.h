//===- Parser.h - .hj lexer and parser --------------------------*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef HJC_PARSER_H
#define HJC_PARSER_H

#include "hjc/Ast.h"

#include <string>
#include <string_view>

namespace hjc {

/// Parses source text into an AST. Throws CompileError with a SyntaxError
/// diagnostic (span + expected-token set) on malformed input; total on any
/// byte sequence.
ast::SourceModule parse(std::string_view sourceText, std::string fileName);

} // namespace hjc

#endif // HJC_PARSER_H
