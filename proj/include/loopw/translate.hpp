#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "loopw/ast.hpp"
#include "loopw/core.hpp"

namespace loopw {

class TranslateError : public std::runtime_error {
 public:
  enum class Kind { UntranslatableEquation, Unsupported };

  TranslateError(Kind kind, std::string what)
      : std::runtime_error(std::move(what)), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// One `(define name term)` per E-function (`fn:<f>`) and per procedure, in
/// declaration order.
struct TranslationUnit {
  std::vector<std::pair<std::string, CoreRef>> defines;
  std::string entry;
  std::size_t entry_ins = 0;
  std::size_t entry_outs = 0;
};

/// State-passing for mutable variables, CPS for control. A procedure is
/// `λp. ...` with p = (ins, return continuation); its body threads a state
/// tuple holding the frame's parameters, ins then outs.
TranslationUnit translate(const Program& p);

/// E-functions compiled to curried core functions by primitive recursion on
/// one argument position.
CoreRef translate_function(const Program& p, const std::string& fsym);

/// `entry((inputs), λr. r)`; evaluates to the tuple of out values. Throws
/// std::invalid_argument when the input count is not the entry's arity.
CoreRef build_entry_application(const TranslationUnit& u, const std::vector<std::uint64_t>& inputs);

/// Evaluates every define, then the entry application; one rendered value
/// per out parameter.
std::vector<std::string> run_core(const TranslationUnit& u, const std::vector<std::uint64_t>& inputs,
                                  const EvalOptions& opts = {});

Globals load_unit(const TranslationUnit& u, const EvalOptions& opts = {});

std::string print_unit(const TranslationUnit& u);

}  // namespace loopw
