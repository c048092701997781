#include "loopw/diagnostic.hpp"

#include <algorithm>

namespace loopw {

const char* to_string(DiagCode c) {
  switch (c) {
    case DiagCode::ImpureExpr: return "ImpureExpr";
    case DiagCode::UnboundIndexVar: return "UnboundIndexVar";
    case DiagCode::LabelInAssertion: return "LabelInAssertion";
    case DiagCode::DuplicateName: return "DuplicateName";
    case DiagCode::ShadowedIndexVar: return "ShadowedIndexVar";
    case DiagCode::BadEquation: return "BadEquation";
    case DiagCode::ArityError: return "ArityError";
    case DiagCode::NonDataMuteAssertion: return "NonDataMuteAssertion";
    case DiagCode::TypeMismatch: return "TypeMismatch";
    case DiagCode::InvariantEntryMismatch: return "InvariantEntryMismatch";
    case DiagCode::InvariantPreservationMismatch: return "InvariantPreservationMismatch";
    case DiagCode::FootprintViolation: return "FootprintViolation";
    case DiagCode::NotALabel: return "NotALabel";
    case DiagCode::NotAProc: return "NotAProc";
    case DiagCode::NotMutable: return "NotMutable";
    case DiagCode::UseBeforeAssign: return "UseBeforeAssign";
    case DiagCode::UnboundName: return "UnboundName";
    case DiagCode::RefutedObligation: return "RefutedObligation";
    case DiagCode::UnprovenObligation: return "UnprovenObligation";
  }
  return "?";
}

namespace {

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\t', ' ');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

std::string format_tsv(const Diagnostic& d) {
  return std::string(d.is_error() ? "error" : "warning") + "\t" + std::to_string(d.span.line) +
         ":" + std::to_string(d.span.col) + "\t" + d.rule + "\t" + to_string(d.code) + "\t" +
         one_line(d.message) + "\t" + one_line(d.expected) + "\t" + one_line(d.found);
}

std::string format_human(const Diagnostic& d) {
  std::string out = std::to_string(d.span.line) + ":" + std::to_string(d.span.col) + ": " +
                    (d.is_error() ? "error" : "warning") + "[" + d.rule + "] " +
                    to_string(d.code) + ": " + d.message;
  if (!d.expected.empty() || !d.found.empty())
    out += " (expected " + d.expected + ", found " + d.found + ")";
  return out;
}

bool has_errors(const std::vector<Diagnostic>& ds) {
  return std::any_of(ds.begin(), ds.end(), [](const Diagnostic& d) { return d.is_error(); });
}

}  // namespace loopw
