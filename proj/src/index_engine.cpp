#include "loopw/index_engine.hpp"

#include <functional>
#include <set>

#include "loopw/printer.hpp"
#include "loopw/terms.hpp"

namespace loopw {

std::string to_string(const ProofStatus& s) {
  switch (s.kind) {
    case ProofStatus::Kind::Proven:
      return "PROVEN";
    case ProofStatus::Kind::Refuted:
      return "REFUTED";
    case ProofStatus::Kind::Unproven:
      return "UNPROVEN";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Rewriting

bool match(const IndexTerm& pattern, const IndexTerm& t, std::map<std::string, IndexTerm>& b) {
  switch (pattern.kind) {
    case IndexTerm::Kind::Var: {
      auto [it, fresh] = b.emplace(pattern.name, t);
      return fresh || it->second == t;
    }
    case IndexTerm::Kind::Zero:
      return t.kind == IndexTerm::Kind::Zero;
    case IndexTerm::Kind::Succ:
      return t.kind == IndexTerm::Kind::Succ && match(pattern.args[0], t.args[0], b);
    case IndexTerm::Kind::App:
      if (t.kind != IndexTerm::Kind::App || t.name != pattern.name ||
          t.args.size() != pattern.args.size())
        return false;
      for (std::size_t i = 0; i < t.args.size(); ++i)
        if (!match(pattern.args[i], t.args[i], b)) return false;
      return true;
  }
  return false;
}

namespace {

bool rewrite_root(IndexTerm& t, const EqSystem& e) {
  if (t.kind != IndexTerm::Kind::App) return false;
  for (const auto& rule : e.rules) {
    std::map<std::string, IndexTerm> b;
    if (match(rule.lhs, t, b)) {
      t = substitute(rule.rhs, b);
      return true;
    }
  }
  return false;
}

bool step_outermost(IndexTerm& t, const EqSystem& e) {
  if (rewrite_root(t, e)) return true;
  for (auto& a : t.args)
    if (step_outermost(a, e)) return true;
  return false;
}

bool step_innermost(IndexTerm& t, const EqSystem& e) {
  for (auto it = t.args.rbegin(); it != t.args.rend(); ++it)
    if (step_innermost(*it, e)) return true;
  return rewrite_root(t, e);
}

}  // namespace

NormalizeResult normalize(const IndexTerm& t, const EqSystem& e, Strategy strategy) {
  NormalizeResult r{t, false, 0};
  auto step = strategy == Strategy::LeftmostOutermost ? step_outermost : step_innermost;
  while (true) {
    if (r.steps >= e.step_cap) {
      // One more probe tells a fixpoint reached exactly at the cap apart
      // from a genuinely capped run.
      IndexTerm probe = r.term;
      r.capped = step(probe, e);
      return r;
    }
    if (!step(r.term, e)) return r;
    ++r.steps;
  }
}

ProofStatus terms_equal(const IndexTerm& a, const IndexTerm& b, const EqSystem& e) {
  auto na = normalize(a, e);
  auto nb = normalize(b, e);
  if (na.capped || nb.capped) return ProofStatus::unproven("cap");
  if (na.term == nb.term) return ProofStatus::proven();
  // Successors are injective and never zero; x = s^k(x) has no solution for k > 0.
  const IndexTerm* x = &na.term;
  const IndexTerm* y = &nb.term;
  while (x->kind == IndexTerm::Kind::Succ && y->kind == IndexTerm::Kind::Succ) {
    x = &x->args[0];
    y = &y->args[0];
  }
  if (y->kind == IndexTerm::Kind::Succ) std::swap(x, y);
  if (x->kind == IndexTerm::Kind::Succ) {
    if (y->kind == IndexTerm::Kind::Zero) return ProofStatus::refuted();
    const IndexTerm* base = x;
    while (base->kind == IndexTerm::Kind::Succ) base = &base->args[0];
    if (y->kind == IndexTerm::Kind::Var && *base == *y) return ProofStatus::refuted();
  }
  return ProofStatus::unproven("distinct normal forms");
}

// ---------------------------------------------------------------------------
// Evaluation under a valuation

std::optional<bool> evaluate(const IndexFormula& f, const std::map<std::string, std::uint64_t>& val,
                             const EqSystem& e, int bound) {
  using K = IndexFormula::Kind;
  switch (f.kind) {
    case K::Truth:
      return true;
    case K::Eq: {
      Subst s;
      for (const auto& [k, v] : val) s[k] = IndexTerm::numeral(v);
      auto a = normalize(substitute(f.terms[0], s), e);
      auto b = normalize(substitute(f.terms[1], s), e);
      if (a.capped || b.capped) return std::nullopt;
      auto va = numeral_value(a.term);
      auto vb = numeral_value(b.term);
      if (!va || !vb) return std::nullopt;
      return *va == *vb;
    }
    case K::And: {
      auto a = evaluate(f.subs[0], val, e, bound);
      auto b = evaluate(f.subs[1], val, e, bound);
      if (a == false || b == false) return false;
      if (a && b) return true;
      return std::nullopt;
    }
    case K::Or: {
      auto a = evaluate(f.subs[0], val, e, bound);
      auto b = evaluate(f.subs[1], val, e, bound);
      if (a == true || b == true) return true;
      if (a && b) return false;
      return std::nullopt;
    }
    case K::Implies: {
      auto a = evaluate(f.subs[0], val, e, bound);
      if (a == false) return true;
      auto b = evaluate(f.subs[1], val, e, bound);
      if (b == true) return true;
      if (a == true && b == false) return false;
      return std::nullopt;
    }
    case K::Forall: {
      if (!free_vars(f.subs[0]).count(f.binder)) return evaluate(f.subs[0], val, e, bound);
      auto inner = val;
      for (int v = 0; v <= bound; ++v) {
        inner[f.binder] = static_cast<std::uint64_t>(v);
        if (evaluate(f.subs[0], inner, e, bound) == false) return false;
      }
      // Holding up to the bound proves nothing about the rest of N.
      return std::nullopt;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Entailment

namespace {

using EqPair = std::pair<IndexTerm, IndexTerm>;

void flatten_hyp(const IndexFormula& f, std::vector<IndexFormula>& out) {
  if (f.kind == IndexFormula::Kind::Truth) return;
  if (f.kind == IndexFormula::Kind::And) {
    flatten_hyp(f.subs[0], out);
    flatten_hyp(f.subs[1], out);
    return;
  }
  out.push_back(f);
}

IndexTerm norm(const IndexTerm& t, const EqSystem& e) { return normalize(t, e).term; }

// Congruence closure over the subterms of `eqs` and the goal, with
// injectivity of successor and the 0 / s(_) clash.
class Closure {
 public:
  void add_term(const IndexTerm& t) {
    std::string k = to_string(t);
    if (ids_.count(k)) return;
    for (const auto& a : t.args) add_term(a);
    int id = static_cast<int>(terms_.size());
    ids_[k] = id;
    terms_.push_back(t);
    parent_.push_back(id);
  }
  int id(const IndexTerm& t) const { return ids_.at(to_string(t)); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

  // Returns false when the equations are contradictory.
  bool saturate() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < terms_.size(); ++i) {
        for (std::size_t j = i + 1; j < terms_.size(); ++j) {
          const auto& a = terms_[i];
          const auto& b = terms_[j];
          bool same = find(static_cast<int>(i)) == find(static_cast<int>(j));
          if (a.kind == IndexTerm::Kind::Succ && b.kind == IndexTerm::Kind::Succ && same) {
            if (unite(id(a.args[0]), id(b.args[0]))) changed = true;
          }
          if (!same && a.kind == b.kind && a.name == b.name && a.args.size() == b.args.size() &&
              !a.args.empty()) {
            bool congruent = true;
            for (std::size_t k = 0; k < a.args.size() && congruent; ++k)
              congruent = find(id(a.args[k])) == find(id(b.args[k]));
            if (congruent && unite(static_cast<int>(i), static_cast<int>(j))) changed = true;
          }
        }
      }
    }
    for (std::size_t i = 0; i < terms_.size(); ++i)
      for (std::size_t j = 0; j < terms_.size(); ++j)
        if (terms_[i].kind == IndexTerm::Kind::Zero && terms_[j].kind == IndexTerm::Kind::Succ &&
            find(static_cast<int>(i)) == find(static_cast<int>(j)))
          return false;
    return true;
  }

 private:
  std::map<std::string, int> ids_;
  std::vector<IndexTerm> terms_;
  std::vector<int> parent_;
};

// Tries to close `lhs = rhs` from the atomic equations among `hyps`.
// Only ever answers "proven" or "don't know".
bool close_equation(const std::vector<IndexFormula>& hyps, IndexTerm lhs, IndexTerm rhs,
                    const EqSystem& e) {
  std::vector<EqPair> eqs;
  for (const auto& h : hyps)
    if (h.kind == IndexFormula::Kind::Eq) eqs.emplace_back(norm(h.terms[0], e), norm(h.terms[1], e));
  lhs = norm(lhs, e);
  rhs = norm(rhs, e);

  // Eliminate x = t hypotheses by substitution, decomposing s(a) = s(b).
  bool progress = true;
  while (progress) {
    progress = false;
    if (lhs == rhs) return true;
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      auto [a, b] = eqs[i];
      if (a == b) {
        eqs.erase(eqs.begin() + static_cast<long>(i));
        progress = true;
        break;
      }
      if (a.kind == IndexTerm::Kind::Succ && b.kind == IndexTerm::Kind::Succ) {
        eqs[i] = {a.args[0], b.args[0]};
        progress = true;
        break;
      }
      if ((a.kind == IndexTerm::Kind::Zero && b.kind == IndexTerm::Kind::Succ) ||
          (a.kind == IndexTerm::Kind::Succ && b.kind == IndexTerm::Kind::Zero))
        return true;  // contradictory hypotheses
      std::optional<std::pair<std::string, IndexTerm>> def;
      if (a.kind == IndexTerm::Kind::Var && !occurs(a.name, b)) def.emplace(a.name, b);
      else if (b.kind == IndexTerm::Kind::Var && !occurs(b.name, a)) def.emplace(b.name, a);
      if (!def) continue;
      Subst s{{def->first, def->second}};
      eqs.erase(eqs.begin() + static_cast<long>(i));
      for (auto& [x, y] : eqs) {
        x = norm(substitute(x, s), e);
        y = norm(substitute(y, s), e);
      }
      lhs = norm(substitute(lhs, s), e);
      rhs = norm(substitute(rhs, s), e);
      progress = true;
      break;
    }
  }

  Closure cc;
  for (const auto& [a, b] : eqs) {
    cc.add_term(a);
    cc.add_term(b);
  }
  cc.add_term(lhs);
  cc.add_term(rhs);
  for (const auto& [a, b] : eqs) cc.unite(cc.id(a), cc.id(b));
  if (!cc.saturate()) return true;
  return cc.find(cc.id(lhs)) == cc.find(cc.id(rhs));
}

// Searches numeral valuations up to the bound for one that makes every
// hypothesis true and the goal false.
bool find_counterexample(const std::vector<IndexFormula>& hyps, const IndexFormula& goal,
                         const EqSystem& e, const EntailOptions& opts, bool& exhausted) {
  std::set<std::string> vars = free_vars(goal);
  for (const auto& h : hyps) collect_free_vars(h, vars);
  std::vector<std::string> names(vars.begin(), vars.end());
  double total = 1;
  for (std::size_t i = 0; i < names.size(); ++i) total *= opts.bound + 1;
  exhausted = total <= static_cast<double>(opts.max_valuations);
  if (!exhausted) return false;

  std::map<std::string, std::uint64_t> val;
  for (const auto& n : names) val[n] = 0;
  while (true) {
    bool hyps_hold = true;
    for (const auto& h : hyps) {
      if (evaluate(h, val, e, opts.bound) != true) {
        hyps_hold = false;
        break;
      }
    }
    if (hyps_hold && evaluate(goal, val, e, opts.bound) == false) return true;
    std::size_t k = 0;
    for (; k < names.size(); ++k) {
      auto& v = val[names[k]];
      if (v < static_cast<std::uint64_t>(opts.bound)) {
        ++v;
        break;
      }
      v = 0;
    }
    if (k == names.size()) return false;
  }
}

ProofStatus prove(std::vector<IndexFormula> hyps, const IndexFormula& goal, const EqSystem& e,
                  const EntailOptions& opts) {
  using K = IndexFormula::Kind;
  switch (goal.kind) {
    case K::Truth:
      return ProofStatus::proven();
    case K::And: {
      auto a = prove(hyps, goal.subs[0], e, opts);
      if (a.is_refuted()) return a;
      auto b = prove(hyps, goal.subs[1], e, opts);
      if (b.is_refuted()) return b;
      if (a.is_proven() && b.is_proven()) return a;
      return a.is_proven() ? b : a;
    }
    case K::Implies:
      flatten_hyp(goal.subs[0], hyps);
      return prove(std::move(hyps), goal.subs[1], e, opts);
    case K::Forall: {
      std::set<std::string> avoid = free_vars(goal);
      for (const auto& h : hyps) collect_free_vars(h, avoid);
      std::string x = fresh_name(goal.binder, avoid);
      IndexFormula body = substitute(goal.subs[0], Subst{{goal.binder, IndexTerm::var(x)}});
      return prove(std::move(hyps), body, e, opts);
    }
    case K::Eq:
      if (close_equation(hyps, goal.terms[0], goal.terms[1], e)) return ProofStatus::proven();
      break;
    case K::Or:
      break;
  }
  bool exhausted = false;
  if (find_counterexample(hyps, goal, e, opts, exhausted)) return ProofStatus::refuted();
  return ProofStatus::unproven("bounded");
}

}  // namespace

ProofStatus entails(const std::vector<IndexFormula>& hyps, const IndexFormula& goal,
                    const EqSystem& e, const EntailOptions& opts) {
  std::vector<IndexFormula> flat;
  for (const auto& h : hyps) flatten_hyp(h, flat);
  return prove(std::move(flat), goal, e, opts);
}

bool is_data_mute(const IndexFormula& f) {
  if (f.kind == IndexFormula::Kind::Or) return false;
  for (const auto& s : f.subs)
    if (!is_data_mute(s)) return false;
  return true;
}

}  // namespace loopw
