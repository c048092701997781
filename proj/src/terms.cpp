#include "loopw/terms.hpp"

namespace loopw {

std::optional<std::uint64_t> numeral_value(const IndexTerm& t) {
  std::uint64_t n = 0;
  const IndexTerm* cur = &t;
  while (cur->kind == IndexTerm::Kind::Succ) {
    ++n;
    cur = &cur->args[0];
  }
  if (cur->kind != IndexTerm::Kind::Zero) return std::nullopt;
  return n;
}

bool occurs(const std::string& var, const IndexTerm& t) {
  if (t.kind == IndexTerm::Kind::Var) return t.name == var;
  for (const auto& a : t.args)
    if (occurs(var, a)) return true;
  return false;
}

std::size_t term_size(const IndexTerm& t) {
  std::size_t n = 1;
  for (const auto& a : t.args) n += term_size(a);
  return n;
}

void collect_free_vars(const IndexTerm& t, std::set<std::string>& out) {
  if (t.kind == IndexTerm::Kind::Var) {
    out.insert(t.name);
    return;
  }
  for (const auto& a : t.args) collect_free_vars(a, out);
}

void collect_free_vars(const IndexFormula& f, std::set<std::string>& out) {
  for (const auto& t : f.terms) collect_free_vars(t, out);
  if (f.kind == IndexFormula::Kind::Forall) {
    std::set<std::string> inner;
    collect_free_vars(f.subs[0], inner);
    inner.erase(f.binder);
    out.insert(inner.begin(), inner.end());
    return;
  }
  for (const auto& s : f.subs) collect_free_vars(s, out);
}

void collect_free_vars(const Ty& ty, std::set<std::string>& out) {
  std::set<std::string> inner;
  for (const auto& t : ty.terms) collect_free_vars(t, inner);
  for (const auto& x : ty.ins) collect_free_vars(x, inner);
  for (const auto& x : ty.outs) collect_free_vars(x, inner);
  for (const auto& x : ty.comps) collect_free_vars(x, inner);
  if (ty.kind == Ty::Kind::Proc) {
    collect_free_vars(ty.pre, inner);
    collect_free_vars(ty.post, inner);
  }
  for (const auto& b : ty.binders) inner.erase(b);
  out.insert(inner.begin(), inner.end());
}

std::set<std::string> free_vars(const IndexTerm& t) {
  std::set<std::string> out;
  collect_free_vars(t, out);
  return out;
}

std::set<std::string> free_vars(const IndexFormula& f) {
  std::set<std::string> out;
  collect_free_vars(f, out);
  return out;
}

std::set<std::string> free_vars(const Ty& ty) {
  std::set<std::string> out;
  collect_free_vars(ty, out);
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + "'" + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

IndexTerm substitute(const IndexTerm& t, const Subst& s) {
  if (t.kind == IndexTerm::Kind::Var) {
    auto it = s.find(t.name);
    return it == s.end() ? t : it->second;
  }
  if (t.args.empty()) return t;
  IndexTerm r = t;
  for (auto& a : r.args) a = substitute(a, s);
  return r;
}

namespace {

// Names that a binder must avoid when pushing `s` under it.
std::set<std::string> range_vars(const Subst& s) {
  std::set<std::string> out;
  for (const auto& [k, v] : s) collect_free_vars(v, out);
  return out;
}

// Drops the mappings for `bound`, renaming each binder that would capture a
// variable of the substitution's range. Returns the (possibly renamed)
// binders and the substitution to apply underneath.
std::pair<std::vector<std::string>, Subst> enter_binders(const std::vector<std::string>& bound,
                                                          const Subst& s,
                                                          const std::set<std::string>& body_fvs) {
  Subst inner = s;
  for (const auto& b : bound) inner.erase(b);
  const std::set<std::string> captured = range_vars(inner);
  std::set<std::string> avoid = captured;
  avoid.insert(body_fvs.begin(), body_fvs.end());
  std::vector<std::string> renamed;
  for (const auto& b : bound) {
    if (captured.count(b)) {
      std::set<std::string> av = avoid;
      av.insert(renamed.begin(), renamed.end());
      av.insert(bound.begin(), bound.end());
      std::string fresh = fresh_name(b, av);
      inner[b] = IndexTerm::var(fresh);
      renamed.push_back(fresh);
    } else {
      renamed.push_back(b);
    }
  }
  return {renamed, inner};
}

}  // namespace

IndexFormula substitute(const IndexFormula& f, const Subst& s) {
  if (s.empty()) return f;
  IndexFormula r = f;
  switch (f.kind) {
    case IndexFormula::Kind::Truth:
      return r;
    case IndexFormula::Kind::Eq:
      for (auto& t : r.terms) t = substitute(t, s);
      return r;
    case IndexFormula::Kind::Forall: {
      auto [names, inner] = enter_binders({f.binder}, s, free_vars(f.subs[0]));
      r.binder = names[0];
      r.subs[0] = substitute(f.subs[0], inner);
      return r;
    }
    default:
      for (auto& x : r.subs) x = substitute(x, s);
      return r;
  }
}

Ty substitute(const Ty& ty, const Subst& s) {
  if (s.empty()) return ty;
  Ty r = ty;
  Subst inner = s;
  if (!ty.binders.empty()) {
    std::set<std::string> body;
    Ty unbound = ty;
    unbound.binders.clear();
    collect_free_vars(unbound, body);
    auto [names, sub] = enter_binders(ty.binders, s, body);
    r.binders = names;
    inner = std::move(sub);
  }
  for (auto& t : r.terms) t = substitute(t, inner);
  for (auto& x : r.ins) x = substitute(x, inner);
  for (auto& x : r.outs) x = substitute(x, inner);
  for (auto& x : r.comps) x = substitute(x, inner);
  if (ty.kind == Ty::Kind::Proc) {
    r.pre = substitute(ty.pre, inner);
    r.post = substitute(ty.post, inner);
  }
  return r;
}

}  // namespace loopw
