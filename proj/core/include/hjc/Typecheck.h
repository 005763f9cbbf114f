//===- Typecheck.h - Type checking and monomorphization ---------*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef HJC_TYPECHECK_H
#define HJC_TYPECHECK_H

#include "hjc/Ast.h"

namespace hjc {

/// A SourceModule whose type parameters are gone, whose every expression
/// carries a concrete HwType, and whose call edges name monomorphized
/// instances (`base$T1$T2...`).
using TypedAst = ast::SourceModule;

/// Type-checks and monomorphizes a parsed module. Non-generic functions are
/// the instantiation roots; generic functions reachable from them are
/// instantiated once per distinct type-argument tuple and appended in
/// creation order. Unreachable generics produce no instances.
///
/// Throws CompileError with one of: TypeError, RecursionError,
/// UnknownIdentifier, NonConstArrayLength, ArrayIndexTypeError.
TypedAst typecheck(const ast::SourceModule &module);

} // namespace hjc

#endif // HJC_TYPECHECK_H
