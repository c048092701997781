#pragma once

#include <array>
#include <string>
#include <vector>

#include "loopw/ast.hpp"
#include "loopw/index_engine.hpp"

namespace loopw {

/// A verification condition `hyps |- goal`. Discharge happens entirely in
/// the index engine; no program-level term is ever built for it.
struct Obligation {
  std::vector<IndexFormula> hyps;
  IndexFormula goal;
  Span span;
  std::string rule;  // claim, call-pre, post, triple-post, consequence-pre, consequence-post
  std::string proc;
  ProofStatus status = ProofStatus::unproven("pending");
};

/// The two side conditions of the consequence rule when widening
/// `{pre} s {post}` to `{wider_pre} s {wider_post}`:
/// `wider_pre => pre` and `post => wider_post`.
std::array<Obligation, 2> consequence_obligations(const IndexFormula& wider_pre,
                                                  const IndexFormula& pre,
                                                  const IndexFormula& post,
                                                  const IndexFormula& wider_post, Span span,
                                                  const std::string& proc);

void discharge(std::vector<Obligation>& obs, const EqSystem& e, const EntailOptions& opts);

/// Source order, then rule name for ties.
void sort_obligations(std::vector<Obligation>& obs);

std::string describe(const Obligation& o);

}  // namespace loopw
