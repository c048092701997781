#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loopw/ast.hpp"

namespace loopw {

/// User equations E, oriented left to right as written.
struct EqSystem {
  std::vector<Equation> rules;
  std::size_t step_cap = 10000;

  static EqSystem from(const Program& p, std::size_t step_cap = 10000) {
    return {p.equations, step_cap};
  }
};

struct ProofStatus {
  enum class Kind { Proven, Refuted, Unproven };

  Kind kind = Kind::Unproven;
  std::string reason;  // Unproven only: "cap", "bounded", "skipped", ...

  static ProofStatus proven() { return {Kind::Proven, {}}; }
  static ProofStatus refuted() { return {Kind::Refuted, {}}; }
  static ProofStatus unproven(std::string why) { return {Kind::Unproven, std::move(why)}; }

  bool is_proven() const { return kind == Kind::Proven; }
  bool is_refuted() const { return kind == Kind::Refuted; }

  bool operator==(const ProofStatus&) const = default;
};

std::string to_string(const ProofStatus& s);

enum class Strategy { LeftmostOutermost, RightmostInnermost };

struct NormalizeResult {
  IndexTerm term;
  bool capped = false;  // the step cap ran out; `term` is the last one reached
  std::size_t steps = 0;
};

NormalizeResult normalize(const IndexTerm& t, const EqSystem& e,
                          Strategy strategy = Strategy::LeftmostOutermost);

/// Matches `pattern` against `t`, extending `bindings`.
bool match(const IndexTerm& pattern, const IndexTerm& t, std::map<std::string, IndexTerm>& bindings);

ProofStatus terms_equal(const IndexTerm& a, const IndexTerm& b, const EqSystem& e);

struct EntailOptions {
  int bound = 8;  // bounded-testing ceiling B
  std::size_t max_valuations = 200000;
};

/// Sound semi-decision of `hyps |- goal` over the naturals: Proven is only
/// returned when the entailment holds for every valuation.
ProofStatus entails(const std::vector<IndexFormula>& hyps, const IndexFormula& goal,
                    const EqSystem& e, const EntailOptions& opts = {});

/// Three-valued evaluation of a formula under a numeral valuation of its
/// free variables (nullopt: unknown, e.g. a ∀ that holds up to the bound).
std::optional<bool> evaluate(const IndexFormula& f, const std::map<std::string, std::uint64_t>& val,
                             const EqSystem& e, int bound);

/// Membership in the assertion fragment {=, &&, =>, forall, true}.
bool is_data_mute(const IndexFormula& f);

}  // namespace loopw
