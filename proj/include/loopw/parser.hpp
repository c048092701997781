#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "loopw/ast.hpp"

namespace loopw {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, Arity, UnboundName };

  ParseError(Kind kind, Span span, std::string message)
      : std::runtime_error(format(kind, span, message)), kind_(kind), span_(span),
        message_(std::move(message)) {}

  Kind kind() const { return kind_; }
  Span span() const { return span_; }
  const std::string& detail() const { return message_; }

 private:
  static std::string format(Kind kind, Span span, const std::string& msg);

  Kind kind_;
  Span span_;
  std::string message_;
};

/// Parses a `.loopw` source. Value and label names are resolved here (a
/// name bound by a `label` becomes a LabelRef); index-variable scoping is
/// left to well_formed.
Program parse_program(std::string_view text);

/// Parses a single formula over the given signature; handy in tests.
IndexFormula parse_formula(std::string_view text, const Program& signature_from = {});
IndexTerm parse_term(std::string_view text, const Program& signature_from = {});
Ty parse_type(std::string_view text, const Program& signature_from = {});

}  // namespace loopw
