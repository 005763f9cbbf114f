//===- Diagnostics.h - Source spans and diagnostics -------------*- C++ -*-===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef HJC_DIAGNOSTICS_H
#define HJC_DIAGNOSTICS_H

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hjc {

struct Span {
  std::string file;
  int line = 0; // 1-based; 0 = unknown
  int col = 0;

  std::string str() const {
    if (line == 0)
      return file.empty() ? "<unknown>" : file;
    return file + ":" + std::to_string(line) + ":" + std::to_string(col);
  }
};

enum class Severity { Error, Warning, Note };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  Span span;
  /// Pass name or verifier rule id (e.g. "ssa.dominance").
  std::string rule;

  std::string str() const {
    std::ostringstream os;
    os << span.str() << ": ";
    switch (severity) {
    case Severity::Error:
      os << "error: ";
      break;
    case Severity::Warning:
      os << "warning: ";
      break;
    case Severity::Note:
      os << "note: ";
      break;
    }
    os << message;
    if (!rule.empty())
      os << " [" << rule << "]";
    return os.str();
  }
};

/// Thrown by the front end and pipeline stages on user errors. Carries the
/// diagnostics that should be printed; never a stack trace.
class CompileError : public std::runtime_error {
public:
  explicit CompileError(Diagnostic d)
      : std::runtime_error(d.str()), diags_{std::move(d)} {}
  explicit CompileError(std::vector<Diagnostic> ds)
      : std::runtime_error(join(ds)), diags_(std::move(ds)) {}

  const std::vector<Diagnostic> &diagnostics() const { return diags_; }

private:
  static std::string join(const std::vector<Diagnostic> &ds) {
    std::string out;
    for (size_t i = 0; i < ds.size(); ++i) {
      if (i)
        out += "\n";
      out += ds[i].str();
    }
    return out;
  }
  std::vector<Diagnostic> diags_;
};

inline Diagnostic errorDiag(std::string message, Span span = {},
                            std::string rule = {}) {
  return Diagnostic{Severity::Error, std::move(message), std::move(span),
                    std::move(rule)};
}

} // namespace hjc

#endif // HJC_DIAGNOSTICS_H
