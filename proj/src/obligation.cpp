#include "loopw/obligation.hpp"

#include <algorithm>

#include "loopw/printer.hpp"

namespace loopw {

std::array<Obligation, 2> consequence_obligations(const IndexFormula& wider_pre,
                                                  const IndexFormula& pre,
                                                  const IndexFormula& post,
                                                  const IndexFormula& wider_post, Span span,
                                                  const std::string& proc) {
  Obligation strengthen;
  strengthen.hyps = {wider_pre};
  strengthen.goal = pre;
  strengthen.span = span;
  strengthen.rule = "consequence-pre";
  strengthen.proc = proc;

  Obligation weaken;
  weaken.hyps = {post};
  weaken.goal = wider_post;
  weaken.span = span;
  weaken.rule = "consequence-post";
  weaken.proc = proc;
  return {strengthen, weaken};
}

void discharge(std::vector<Obligation>& obs, const EqSystem& e, const EntailOptions& opts) {
  for (auto& o : obs) o.status = entails(o.hyps, o.goal, e, opts);
}

void sort_obligations(std::vector<Obligation>& obs) {
  std::stable_sort(obs.begin(), obs.end(), [](const Obligation& a, const Obligation& b) {
    if (a.span.line != b.span.line) return a.span.line < b.span.line;
    return a.span.col < b.span.col;
  });
}

std::string describe(const Obligation& o) {
  std::string out;
  for (std::size_t i = 0; i < o.hyps.size(); ++i) {
    if (i) out += ", ";
    out += to_string(o.hyps[i]);
  }
  return out + (out.empty() ? "|- " : " |- ") + to_string(o.goal);
}

}  // namespace loopw
