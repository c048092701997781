#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "loopw/ast.hpp"
#include "loopw/obligation.hpp"
#include "loopw/typecheck.hpp"

namespace loopw {

/// {pre} seq ▷ omega_out {post}
struct Triple {
  IndexFormula pre;
  Seq seq;
  std::optional<Omega> omega_out;
  IndexFormula post;
};

struct TripleResult {
  SeqResult result;
  std::vector<Obligation> obligations;  // discharged, source order
  std::vector<Diagnostic> diagnostics;
  bool accepted = false;  // typed, and every obligation Proven
};

/// Checks `t` with the assertion slot starting at t.pre. When the end of the
/// sequence is reachable a `triple-post` obligation slot => post is added,
/// even when post is `true`.
TripleResult check_triple(TypeChecker& tc, const Context& ctx, const Triple& t, Span span = {});

struct ConsequenceResult {
  Triple widened;
  std::array<Obligation, 2> obligations;  // wider_pre => pre, post => wider_post
  TripleResult inner;
  ProofStatus verdict;  // Proven iff accepted; Refuted if anything was refuted
  bool accepted = false;
};

ConsequenceResult apply_consequence(TypeChecker& tc, const Context& ctx,
                                    const IndexFormula& wider_pre, const Triple& t,
                                    const IndexFormula& wider_post, Span span = {});

/// Every obligation of the program, discharged and in source order.
std::vector<Obligation> vcgen(const Program& p, const CheckOptions& opts = {});

/// SMT-LIB2 rendering of one obligation: `Nat` as a datatype, E-functions as
/// uninterpreted functions with quantified defining equations, the goal
/// negated before `(check-sat)`.
std::string to_smtlib(const Obligation& o, const Program& p);

/// Writes `<proc>_<n>.smt2` for every obligation (n counts from 1 within
/// each procedure). Returns the paths written.
std::vector<std::filesystem::path> export_smt(const std::vector<Obligation>& obs, const Program& p,
                                              const std::filesystem::path& dir);

}  // namespace loopw
