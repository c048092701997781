#pragma once

#include <string>
#include <vector>

#include "loopw/ast.hpp"

namespace loopw {

enum class DiagCode {
  // well-formedness
  ImpureExpr,
  UnboundIndexVar,
  LabelInAssertion,
  DuplicateName,
  ShadowedIndexVar,
  BadEquation,
  ArityError,
  NonDataMuteAssertion,
  // typing
  TypeMismatch,
  InvariantEntryMismatch,
  InvariantPreservationMismatch,
  FootprintViolation,
  NotALabel,
  NotAProc,
  NotMutable,
  UseBeforeAssign,
  UnboundName,
  // obligations
  RefutedObligation,
  UnprovenObligation,
};

const char* to_string(DiagCode c);

struct Diagnostic {
  enum class Severity { Error, Warning };

  Severity severity = Severity::Error;
  DiagCode code = DiagCode::TypeMismatch;
  Span span;
  std::string rule;  // e.g. "for-entry", "jump-arity"
  std::string message;
  std::string expected;
  std::string found;
  std::string proc;

  bool is_error() const { return severity == Severity::Error; }
};

/// `severity<TAB>line:col<TAB>rule<TAB>code<TAB>message<TAB>expected<TAB>found`
std::string format_tsv(const Diagnostic& d);
/// `line:col: error[rule]: message (expected ..., found ...)`
std::string format_human(const Diagnostic& d);

bool has_errors(const std::vector<Diagnostic>& ds);

}  // namespace loopw
