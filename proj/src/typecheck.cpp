#include "loopw/typecheck.hpp"

#include <algorithm>

#include "loopw/printer.hpp"
#include "loopw/terms.hpp"

namespace loopw {

Context& Context::bind_index(const std::string& name) {
  gamma[name] = GammaEntry{GammaEntry::Kind::Index, Ty::undef()};
  return *this;
}

Context& Context::bind_value(const std::string& name, Ty ty) {
  gamma[name] = GammaEntry{GammaEntry::Kind::Value, std::move(ty)};
  return *this;
}

Context& Context::bind_mutable(const std::string& name, Ty ty) {
  omega[name] = std::move(ty);
  hidden.erase(name);
  return *this;
}

bool CheckReport::has_type_errors() const { return has_errors(diagnostics); }

bool CheckReport::ok(bool strict) const {
  if (has_errors(diagnostics)) return false;
  for (const auto& o : obligations) {
    if (o.status.is_refuted()) return false;
    if (strict && !o.status.is_proven()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Type equality modulo E

namespace {

void combine(ProofStatus& acc, const ProofStatus& s) {
  if (acc.is_refuted()) return;
  if (s.is_refuted() || (acc.is_proven() && !s.is_proven())) acc = s;
}

// Renames the binders of `a` and `b` to a shared set of fresh names and
// returns both bodies with the binder lists dropped.
std::pair<Ty, Ty> open_binders(const Ty& a, const Ty& b) {
  std::set<std::string> avoid = free_vars(a);
  collect_free_vars(b, avoid);
  avoid.insert(a.binders.begin(), a.binders.end());
  avoid.insert(b.binders.begin(), b.binders.end());
  Subst sa, sb;
  for (std::size_t i = 0; i < a.binders.size(); ++i) {
    std::string fresh = fresh_name(b.binders[i], avoid);
    avoid.insert(fresh);
    sa[a.binders[i]] = IndexTerm::var(fresh);
    sb[b.binders[i]] = IndexTerm::var(fresh);
  }
  Ty oa = a, ob = b;
  oa.binders.clear();
  ob.binders.clear();
  return {substitute(oa, sa), substitute(ob, sb)};
}

void compare_into(const Ty& a, const Ty& b, const EqSystem& e, TyComparison& out);

void compare_lists(const std::vector<Ty>& as, const std::vector<Ty>& bs, const EqSystem& e,
                   TyComparison& out) {
  if (as.size() != bs.size()) {
    combine(out.status, ProofStatus::refuted());
    return;
  }
  for (std::size_t i = 0; i < as.size(); ++i) compare_into(as[i], bs[i], e, out);
}

void compare_into(const Ty& a, const Ty& b, const EqSystem& e, TyComparison& out) {
  if (a.kind != b.kind || a.kind == Ty::Kind::Undef) {
    combine(out.status, ProofStatus::refuted());
    return;
  }
  switch (a.kind) {
    case Ty::Kind::Nat:
      combine(out.status, terms_equal(a.terms[0], b.terms[0], e));
      return;
    case Ty::Kind::Eq:
      combine(out.status, terms_equal(a.terms[0], b.terms[0], e));
      combine(out.status, terms_equal(a.terms[1], b.terms[1], e));
      return;
    case Ty::Kind::Label:
      compare_lists(a.comps, b.comps, e, out);
      return;
    case Ty::Kind::Exists:
    case Ty::Kind::Proc: {
      if (a.binders.size() != b.binders.size()) {
        combine(out.status, ProofStatus::refuted());
        return;
      }
      auto [oa, ob] = open_binders(a, b);
      compare_lists(oa.comps, ob.comps, e, out);
      compare_lists(oa.ins, ob.ins, e, out);
      compare_lists(oa.outs, ob.outs, e, out);
      if (a.kind == Ty::Kind::Proc) {
        bool same_pre = formulas_equal(oa.pre, ob.pre, e).is_proven();
        bool same_post = formulas_equal(oa.post, ob.post, e).is_proven();
        if (!same_pre || !same_post) out.pending.push_back({ob.pre, oa.pre, oa.post, ob.post});
      }
      return;
    }
    case Ty::Kind::Undef:
      return;
  }
}

IndexTerm replace_term(const IndexTerm& t, const IndexTerm& what, const IndexTerm& with) {
  if (t == what) return with;
  IndexTerm r = t;
  for (auto& a : r.args) a = replace_term(a, what, with);
  return r;
}

// Replaces every occurrence of `what` in `ty` by `with`, not descending
// under binders that would capture one of `what`'s variables.
Ty abstract_type(const Ty& ty, const IndexTerm& what, const IndexTerm& with) {
  for (const auto& b : ty.binders)
    if (occurs(b, what)) return ty;
  Ty r = ty;
  for (auto& t : r.terms) t = replace_term(t, what, with);
  for (auto& x : r.ins) x = abstract_type(x, what, with);
  for (auto& x : r.outs) x = abstract_type(x, what, with);
  for (auto& x : r.comps) x = abstract_type(x, what, with);
  return r;
}

std::string status_text(const ProofStatus& s) {
  if (s.is_refuted()) return "types differ";
  return "could not prove the types equal modulo E (" + s.reason + ")";
}

}  // namespace

ProofStatus formulas_equal(const IndexFormula& a, const IndexFormula& b, const EqSystem& e) {
  if (a.kind != b.kind) return ProofStatus::refuted();
  ProofStatus acc = ProofStatus::proven();
  switch (a.kind) {
    case IndexFormula::Kind::Truth:
      return acc;
    case IndexFormula::Kind::Eq:
      combine(acc, terms_equal(a.terms[0], b.terms[0], e));
      combine(acc, terms_equal(a.terms[1], b.terms[1], e));
      return acc;
    case IndexFormula::Kind::Forall: {
      std::set<std::string> avoid = free_vars(a);
      collect_free_vars(b, avoid);
      std::string x = fresh_name(b.binder, avoid);
      auto ba = substitute(a.subs[0], Subst{{a.binder, IndexTerm::var(x)}});
      auto bb = substitute(b.subs[0], Subst{{b.binder, IndexTerm::var(x)}});
      return formulas_equal(ba, bb, e);
    }
    default:
      combine(acc, formulas_equal(a.subs[0], b.subs[0], e));
      combine(acc, formulas_equal(a.subs[1], b.subs[1], e));
      return acc;
  }
}

TyComparison compare_types(const Ty& actual, const Ty& expected, const EqSystem& e) {
  TyComparison out{ProofStatus::proven(), {}};
  compare_into(actual, expected, e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Checker plumbing

TypeChecker::TypeChecker(const Program& p, CheckOptions opts)
    : prog_(p), opts_(opts), eqs_(EqSystem::from(p, opts.step_cap)) {}

void TypeChecker::record(Diagnostic d) {
  if (d.proc.empty()) d.proc = current_proc_;
  report_.diagnostics.push_back(std::move(d));
}

void TypeChecker::fail(DiagCode code, Span sp, std::string rule, std::string msg,
                       std::string expected, std::string found) {
  Diagnostic d;
  d.code = code;
  d.span = sp;
  d.rule = std::move(rule);
  d.message = std::move(msg);
  d.expected = std::move(expected);
  d.found = std::move(found);
  d.proc = current_proc_;
  throw TypeError(std::move(d));
}

void TypeChecker::emit(const Context& ctx, std::vector<IndexFormula> hyps, IndexFormula goal,
                       Span sp, std::string rule) {
  Obligation o;
  o.hyps = std::move(hyps);
  o.goal = std::move(goal);
  o.span = sp;
  o.rule = std::move(rule);
  o.proc = ctx.proc;
  report_.obligations.push_back(std::move(o));
}

bool TypeChecker::conforms(const Context& ctx, const Ty& actual, const Ty& expected, Span sp,
                           const std::string& rule, DiagCode code, const std::string& what) {
  TyComparison cmp = compare_types(actual, expected, eqs_);
  if (!cmp.status.is_proven()) {
    Diagnostic d;
    d.code = code;
    d.span = sp;
    d.rule = rule;
    d.message = what + ": " + status_text(cmp.status);
    d.expected = to_string(expected);
    d.found = to_string(actual);
    record(std::move(d));
    return false;
  }
  for (const auto& [wider_pre, pre, post, wider_post] : cmp.pending) {
    for (auto& o : consequence_obligations(wider_pre, pre, post, wider_post, sp, ctx.proc))
      report_.obligations.push_back(std::move(o));
  }
  return true;
}

const Ty& TypeChecker::mutable_type(const Context& ctx, const std::string& x, Span sp) {
  auto it = ctx.omega.find(x);
  if (it != ctx.omega.end()) return it->second;
  auto h = ctx.hidden.find(x);
  if (h != ctx.hidden.end()) {
    if (h->second == Context::Hidden::OutsideFootprint)
      fail(DiagCode::FootprintViolation, sp, "footprint",
           "mutable variable `" + x + "` is outside the enclosing footprint");
    fail(DiagCode::FootprintViolation, sp, "proc-capture",
         "procedure literal cannot capture mutable variable `" + x + "` of an enclosing frame");
  }
  if (ctx.gamma.count(x))
    fail(DiagCode::NotMutable, sp, "assign", "`" + x + "` is immutable");
  fail(DiagCode::UnboundName, sp, "scope", "`" + x + "` is not bound");
}

void TypeChecker::require_fresh(const Context& ctx, const std::string& name, Span sp) {
  if (ctx.is_bound(name))
    fail(DiagCode::DuplicateName, sp, "scope", "`" + name + "` is already bound");
}

Context TypeChecker::body_context(const Context& ctx, const std::vector<Param>& footprint,
                                  Span sp) {
  Context inner = ctx;
  inner.omega.clear();
  for (const auto& [name, ty] : ctx.omega) inner.hidden[name] = Context::Hidden::OutsideFootprint;
  for (const auto& p : footprint) inner.bind_mutable(p.name, mutable_type(ctx, p.name, sp));
  return inner;
}

// ---------------------------------------------------------------------------
// Expressions

Ty TypeChecker::infer_expr(const Context& ctx, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Zero:
      return Ty::nat(IndexTerm::zero());
    case Expr::Kind::Succ: {
      Ty inner = infer_expr(ctx, e.args[0]);
      if (inner.kind != Ty::Kind::Nat)
        fail(DiagCode::TypeMismatch, e.span, "succ", "successor of a non-numeral", "nat(_)",
             to_string(inner));
      return Ty::nat(IndexTerm::succ(inner.terms[0]));
    }
    case Expr::Kind::Var: {
      auto it = ctx.omega.find(e.name);
      if (it != ctx.omega.end()) {
        if (it->second.kind == Ty::Kind::Undef)
          fail(DiagCode::UseBeforeAssign, e.span, "definite-assignment",
               "`" + e.name + "` is read before it is assigned");
        return it->second;
      }
      auto g = ctx.gamma.find(e.name);
      if (g != ctx.gamma.end()) {
        if (g->second.kind == GammaEntry::Kind::Index)
          fail(DiagCode::TypeMismatch, e.span, "var",
               "`" + e.name + "` is an index variable, not a value");
        return g->second.type;
      }
      return mutable_type(ctx, e.name, e.span);
    }
    case Expr::Kind::LabelRef: {
      auto g = ctx.gamma.find(e.name);
      if (g == ctx.gamma.end() || g->second.type.kind != Ty::Kind::Label)
        fail(DiagCode::NotALabel, e.span, "label-ref", "`" + e.name + "` is not a label in scope");
      return g->second.type;
    }
    case Expr::Kind::Pack: {
      std::vector<Ty> comps;
      for (const auto& a : e.args) comps.push_back(infer_expr(ctx, a));
      std::set<std::string> avoid;
      for (const auto& c : comps) collect_free_vars(c, avoid);
      for (const auto& t : e.idx_args) collect_free_vars(t, avoid);
      for (const auto& [name, entry] : ctx.gamma) avoid.insert(name);
      std::vector<std::string> binders;
      for (const auto& t : e.idx_args) {
        std::string b = fresh_name("m", avoid);
        avoid.insert(b);
        binders.push_back(b);
        for (auto& c : comps) c = abstract_type(c, t, IndexTerm::var(b));
      }
      return Ty::exists(std::move(binders), std::move(comps));
    }
    case Expr::Kind::ProcLit:
      check_proc_lit(ctx, *e.proc);
      return e.proc->type();
    case Expr::Kind::Impure:
      fail(DiagCode::ImpureExpr, e.span, "purity",
           "control statement in expression position");
  }
  fail(DiagCode::TypeMismatch, e.span, "expr", "unknown expression");
}

void TypeChecker::check_expr(const Context& ctx, const Expr& e, const Ty& expected,
                             const std::string& rule) {
  if (e.kind == Expr::Kind::Pack && expected.kind == Ty::Kind::Exists) {
    if (e.idx_args.size() != expected.binders.size() || e.args.size() != expected.comps.size())
      fail(DiagCode::TypeMismatch, e.span, rule, "pack shape does not match the existential",
           to_string(expected), to_string(e));
    Subst s;
    for (std::size_t i = 0; i < e.idx_args.size(); ++i) s[expected.binders[i]] = e.idx_args[i];
    for (std::size_t i = 0; i < e.args.size(); ++i)
      check_expr(ctx, e.args[i], substitute(expected.comps[i], s), rule);
    return;
  }
  Ty actual = infer_expr(ctx, e);
  conforms(ctx, actual, expected, e.span, rule, DiagCode::TypeMismatch,
           "`" + to_string(e) + "` has the wrong type");
}

// ---------------------------------------------------------------------------
// Procedures

Context TypeChecker::proc_context(const Context& outer, const ProcLit& p) {
  Context ctx;
  ctx.gamma = outer.gamma;
  ctx.proc = outer.proc;
  for (const auto& [name, ty] : outer.omega) ctx.hidden[name] = Context::Hidden::EnclosingFrame;
  for (const auto& [name, h] : outer.hidden) ctx.hidden[name] = Context::Hidden::EnclosingFrame;
  for (const auto& b : p.binders) {
    if (ctx.gamma.count(b)) fail(DiagCode::DuplicateName, p.span, "scope", "`" + b + "` is already bound");
    ctx.bind_index(b);
  }
  for (const auto& x : p.ins) {
    if (ctx.gamma.count(x.name) || ctx.omega.count(x.name))
      fail(DiagCode::DuplicateName, x.span, "scope", "`" + x.name + "` is already bound");
    ctx.bind_mutable(x.name, x.type);
  }
  for (const auto& x : p.outs) {
    if (ctx.gamma.count(x.name) || ctx.omega.count(x.name))
      fail(DiagCode::DuplicateName, x.span, "scope", "`" + x.name + "` is already bound");
    ctx.bind_mutable(x.name, Ty::undef());
  }
  ctx.assertion = p.pre;
  return ctx;
}

Context TypeChecker::top_context(std::size_t index) const {
  Context top;
  for (std::size_t i = 0; i < index && i < prog_.procs.size(); ++i)
    top.bind_value(prog_.procs[i].name, prog_.procs[i].proc.type());
  if (index < prog_.procs.size()) top.proc = prog_.procs[index].name;
  return top;
}

void TypeChecker::check_proc_lit(const Context& outer, const ProcLit& p) {
  Context ctx = proc_context(outer, p);

  SeqResult r = check_seq(ctx, p.body);
  if (!r.reachable) return;
  for (const auto& x : p.outs) {
    conforms(ctx, r.omega_out.at(x.name), x.type, p.span, "proc-out", DiagCode::TypeMismatch,
             "out parameter `" + x.name + "` at procedure exit");
  }
  if (p.post.kind != IndexFormula::Kind::Truth) emit(ctx, {r.assertion}, p.post, p.span, "post");
}

// ---------------------------------------------------------------------------
// Sequences

SeqResult TypeChecker::run_seq(Context& ctx, std::span<const Stmt> stmts) {
  for (const auto& s : stmts) {
    if (!check_stmt(ctx, s)) return {ctx.omega, false, ctx.assertion};
    report_.after[&s] = ctx.omega;
  }
  return {ctx.omega, true, ctx.assertion};
}

SeqResult TypeChecker::check_seq(Context ctx, const Seq& s, const std::optional<Omega>& expected) {
  SeqResult r = run_seq(ctx, s);
  if (r.reachable && expected) {
    for (const auto& [x, ty] : *expected) {
      auto it = r.omega_out.find(x);
      if (it == r.omega_out.end())
        fail(DiagCode::UnboundName, s.empty() ? Span{} : s.back().span, "seq-out",
             "`" + x + "` is not in the outgoing environment");
      conforms(ctx, it->second, ty, s.empty() ? Span{} : s.back().span, "seq-out",
               DiagCode::TypeMismatch, "`" + x + "` at the end of the sequence");
    }
  }
  return r;
}

bool TypeChecker::check_stmt(Context& ctx, const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::Skip:
      return true;
    case Stmt::Kind::Assign: {
      mutable_type(ctx, s.name, s.span);
      ctx.omega[s.name] = infer_expr(ctx, s.expr);
      return true;
    }
    case Stmt::Kind::Call:
      call(ctx, s);
      return true;
    case Stmt::Kind::For:
      for_loop(ctx, s);
      return true;
    case Stmt::Kind::LabelBlock:
      label_block(ctx, s);
      return true;
    case Stmt::Kind::Jump:
      check_jump(ctx, s);
      return false;
    case Stmt::Kind::Claim:
      if (!is_data_mute(s.claim))
        fail(DiagCode::NonDataMuteAssertion, s.span, "claim",
             "assertion is outside the data-mute fragment");
      emit(ctx, {ctx.assertion}, s.claim, s.span, "claim");
      ctx.assertion = s.claim;
      return true;
    case Stmt::Kind::Unpack:
      unpack(ctx, s);
      return true;
  }
  return true;
}

void TypeChecker::call(Context& ctx, const Stmt& s) {
  Ty target = infer_expr(ctx, s.expr);
  if (target.kind != Ty::Kind::Proc)
    fail(DiagCode::NotAProc, s.span, "call", "call target is not a procedure", "proc(...)",
         to_string(target));
  if (s.idx_args.size() != target.binders.size())
    fail(DiagCode::TypeMismatch, s.span, "call-arity",
         "wrong number of index arguments", std::to_string(target.binders.size()),
         std::to_string(s.idx_args.size()));
  if (s.args.size() != target.ins.size() || s.names.size() != target.outs.size())
    fail(DiagCode::TypeMismatch, s.span, "call-arity", "wrong number of arguments",
         std::to_string(target.ins.size()) + " in / " + std::to_string(target.outs.size()) + " out",
         std::to_string(s.args.size()) + " in / " + std::to_string(s.names.size()) + " out");
  Subst theta;
  for (std::size_t i = 0; i < s.idx_args.size(); ++i) theta[target.binders[i]] = s.idx_args[i];
  Ty inst = target;
  inst.binders.clear();
  inst = substitute(inst, theta);

  for (std::size_t i = 0; i < s.args.size(); ++i) check_expr(ctx, s.args[i], inst.ins[i], "call-arg");
  for (const auto& x : s.names) mutable_type(ctx, x, s.span);
  if (inst.pre.kind != IndexFormula::Kind::Truth)
    emit(ctx, {ctx.assertion}, inst.pre, s.span, "call-pre");
  for (std::size_t i = 0; i < s.names.size(); ++i) ctx.omega[s.names[i]] = inst.outs[i];
  if (inst.post.kind != IndexFormula::Kind::Truth) {
    ctx.assertion = ctx.assertion.kind == IndexFormula::Kind::Truth
                        ? inst.post
                        : IndexFormula::conj(ctx.assertion, inst.post);
  }
}

void TypeChecker::for_loop(Context& ctx, const Stmt& s) {
  Ty bound = infer_expr(ctx, s.expr);
  if (bound.kind != Ty::Kind::Nat)
    fail(DiagCode::TypeMismatch, s.expr.span, "for-bound", "loop bound is not a numeral",
         "nat(_)", to_string(bound));
  require_fresh(ctx, s.name, s.span);
  require_fresh(ctx, s.inv_binder, s.span);

  const IndexTerm i = IndexTerm::var(s.inv_binder);
  auto at = [&](const Ty& ty, IndexTerm t) { return substitute(ty, Subst{{s.inv_binder, t}}); };

  // Entry: the current types must be the invariant at 0.
  for (const auto& p : s.footprint) {
    const Ty& current = mutable_type(ctx, p.name, p.span);
    conforms(ctx, current, at(p.type, IndexTerm::zero()), p.span, "for-entry",
             DiagCode::InvariantEntryMismatch, "loop invariant does not hold on entry for `" + p.name + "`");
  }

  // Body: Γ, y : nat(i) ; x̄ : σ̄  ⊢  body ▷ x̄ : σ̄[s(i)/i]
  Context body = body_context(ctx, {}, s.span);
  body.bind_index(s.inv_binder);
  body.bind_value(s.name, Ty::nat(i));
  for (const auto& p : s.footprint) body.bind_mutable(p.name, p.type);
  SeqResult r = check_seq(body, s.body);
  if (r.reachable) {
    for (const auto& p : s.footprint) {
      conforms(ctx, r.omega_out.at(p.name), at(p.type, IndexTerm::succ(i)), s.span, "for-preserve",
               DiagCode::InvariantPreservationMismatch,
               "loop body does not re-establish the invariant for `" + p.name + "`");
    }
  }

  // Result: footprint at σ̄[n/i], everything else framed.
  for (const auto& p : s.footprint) ctx.omega[p.name] = at(p.type, bound.terms[0]);
}

void TypeChecker::label_block(Context& ctx, const Stmt& s) {
  require_fresh(ctx, s.name, s.span);
  std::vector<Ty> payload;
  for (const auto& p : s.footprint) payload.push_back(p.type);

  Context body = body_context(ctx, s.footprint, s.span);
  body.bind_value(s.name, Ty::label(payload));
  SeqResult r = check_seq(body, s.body);
  if (r.reachable) {
    for (const auto& p : s.footprint) {
      conforms(ctx, r.omega_out.at(p.name), p.type, p.span, "label-out", DiagCode::TypeMismatch,
               "label block `" + s.name + "` exits normally with the wrong type for `" + p.name + "`");
    }
  }
  for (const auto& p : s.footprint) ctx.omega[p.name] = p.type;
}

void TypeChecker::unpack(Context& ctx, const Stmt& s) {
  Ty ty = infer_expr(ctx, s.expr);
  if (ty.kind != Ty::Kind::Exists)
    fail(DiagCode::TypeMismatch, s.span, "unpack", "unpacking a non-existential", "exists[...](...)",
         to_string(ty));
  if (ty.binders.size() != s.idx_names.size() || ty.comps.size() != s.names.size())
    fail(DiagCode::TypeMismatch, s.span, "unpack", "unpack pattern does not match the existential",
         to_string(ty), std::to_string(s.idx_names.size()) + " index / " +
                            std::to_string(s.names.size()) + " value names");
  Subst rename;
  for (std::size_t i = 0; i < s.idx_names.size(); ++i) {
    require_fresh(ctx, s.idx_names[i], s.span);
    rename[ty.binders[i]] = IndexTerm::var(s.idx_names[i]);
  }
  Ty opened = ty;
  opened.binders.clear();
  opened = substitute(opened, rename);
  for (const auto& n : s.idx_names) ctx.bind_index(n);
  for (std::size_t i = 0; i < s.names.size(); ++i) {
    require_fresh(ctx, s.names[i], s.span);
    ctx.bind_value(s.names[i], opened.comps[i]);
  }
}

SeqResult TypeChecker::check_for(Context ctx, const Stmt& s) {
  for_loop(ctx, s);
  return {ctx.omega, true, ctx.assertion};
}

SeqResult TypeChecker::check_label_block(Context ctx, const Stmt& s, std::span<const Stmt> rest) {
  label_block(ctx, s);
  return run_seq(ctx, rest);
}

SeqResult TypeChecker::check_jump(const Context& ctx, const Stmt& s) {
  Ty k = infer_expr(ctx, s.expr);
  if (k.kind != Ty::Kind::Label)
    fail(DiagCode::NotALabel, s.span, "jump", "jump target is not a label", "~(...)", to_string(k));
  if (k.comps.size() != s.args.size())
    fail(DiagCode::TypeMismatch, s.span, "jump-arity", "jump payload has the wrong arity",
         std::to_string(k.comps.size()), std::to_string(s.args.size()));
  for (std::size_t i = 0; i < s.args.size(); ++i) check_expr(ctx, s.args[i], k.comps[i], "jump-arg");
  return {ctx.omega, false, ctx.assertion};
}

// ---------------------------------------------------------------------------
// Programs

CheckReport TypeChecker::check_program() {
  report_ = CheckReport{};
  Context top;
  for (const auto& d : prog_.procs) {
    current_proc_ = d.name;
    top.proc = d.name;
    try {
      check_proc_lit(top, d.proc);
    } catch (const TypeError& err) {
      record(err.diagnostic());
    }
    top.bind_value(d.name, d.proc.type());
  }
  sort_obligations(report_.obligations);
  if (opts_.discharge) {
    discharge(report_.obligations, eqs_, EntailOptions{opts_.bound});
  } else {
    for (auto& o : report_.obligations) o.status = ProofStatus::unproven("skipped");
  }
  for (const auto& o : report_.obligations) {
    if (o.status.is_proven() || !opts_.discharge) continue;
    Diagnostic d;
    d.severity = o.status.is_refuted() ? Diagnostic::Severity::Error : Diagnostic::Severity::Warning;
    d.code = o.status.is_refuted() ? DiagCode::RefutedObligation : DiagCode::UnprovenObligation;
    d.span = o.span;
    d.rule = o.rule;
    d.message = (o.status.is_refuted() ? "obligation refuted: " : "obligation not proven (" +
                                                                       o.status.reason + "): ") +
                describe(o);
    d.proc = o.proc;
    report_.diagnostics.push_back(std::move(d));
  }
  std::stable_sort(report_.diagnostics.begin(), report_.diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     if (a.span.line != b.span.line) return a.span.line < b.span.line;
                     return a.span.col < b.span.col;
                   });
  return report_;
}

CheckReport check_program(const Program& p, const CheckOptions& opts) {
  TypeChecker tc(p, opts);
  return tc.check_program();
}

}  // namespace loopw
