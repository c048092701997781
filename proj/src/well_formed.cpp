#include "loopw/well_formed.hpp"

#include <set>

#include "loopw/index_engine.hpp"
#include "loopw/printer.hpp"
#include "loopw/terms.hpp"

namespace loopw {

namespace {

struct Scope {
  std::set<std::string> index;   // index variables in scope
  std::set<std::string> labels;  // label names in scope
};

class Checker {
 public:
  explicit Checker(const Program& p) : prog_(p) {}

  std::vector<Diagnostic> run() {
    check_signature();
    for (const auto& eq : prog_.equations) check_equation(eq);
    std::set<std::string> proc_names;
    for (const auto& d : prog_.procs) {
      proc_ = d.name;
      if (!proc_names.insert(d.name).second)
        report(DiagCode::DuplicateName, d.span, "wf-duplicate",
               "procedure `" + d.name + "` is declared twice");
      check_proc(d.proc, Scope{});
    }
    return std::move(out_);
  }

 private:
  void report(DiagCode code, Span sp, std::string rule, std::string msg) {
    Diagnostic d;
    d.code = code;
    d.span = sp;
    d.rule = std::move(rule);
    d.message = std::move(msg);
    d.proc = proc_;
    out_.push_back(std::move(d));
  }

  void check_signature() {
    std::set<std::string> seen;
    for (const auto& f : prog_.signature) {
      if (!seen.insert(f.name).second)
        report(DiagCode::DuplicateName, f.span, "wf-duplicate",
               "function symbol `" + f.name + "` is declared twice");
      if (f.arity < 0)
        report(DiagCode::ArityError, f.span, "wf-signature", "negative arity for `" + f.name + "`");
    }
  }

  static bool is_pattern(const IndexTerm& t) {
    if (t.kind == IndexTerm::Kind::App) return false;
    for (const auto& a : t.args)
      if (!is_pattern(a)) return false;
    return true;
  }

  void check_equation(const Equation& eq) {
    if (eq.lhs.kind != IndexTerm::Kind::App) {
      report(DiagCode::BadEquation, eq.span, "wf-equation",
             "left-hand side `" + to_string(eq.lhs) + "` must apply a declared symbol");
      return;
    }
    check_arities(eq.lhs, eq.span);
    check_arities(eq.rhs, eq.span);
    for (const auto& a : eq.lhs.args) {
      if (!is_pattern(a)) {
        report(DiagCode::BadEquation, eq.span, "wf-equation",
               "argument `" + to_string(a) + "` is not a constructor pattern");
      }
    }
    auto lhs_vars = free_vars(eq.lhs);
    for (const auto& v : free_vars(eq.rhs)) {
      if (!lhs_vars.count(v))
        report(DiagCode::BadEquation, eq.span, "wf-equation",
               "variable `" + v + "` occurs on the right but not on the left");
    }
  }

  void check_arities(const IndexTerm& t, Span sp) {
    if (t.kind == IndexTerm::Kind::App) {
      int arity = prog_.arity_of(t.name);
      if (arity < 0)
        report(DiagCode::ArityError, sp, "wf-arity", "function symbol `" + t.name + "` is not declared");
      else if (static_cast<std::size_t>(arity) != t.args.size())
        report(DiagCode::ArityError, sp, "wf-arity",
               "`" + t.name + "` expects " + std::to_string(arity) + " argument(s)");
    }
    for (const auto& a : t.args) check_arities(a, sp);
  }

  void check_term(const IndexTerm& t, const Scope& sc, Span sp, const char* rule) {
    check_arities(t, sp);
    for (const auto& v : free_vars(t)) {
      if (sc.index.count(v)) continue;
      if (sc.labels.count(v))
        report(DiagCode::LabelInAssertion, sp, rule,
               "label `" + v + "` used as an index term; labels are not index terms");
      else
        report(DiagCode::UnboundIndexVar, sp, rule, "index variable `" + v + "` is not bound");
    }
  }

  void check_formula(const IndexFormula& f, const Scope& sc, Span sp, const char* rule) {
    if (!is_data_mute(f))
      report(DiagCode::NonDataMuteAssertion, sp, rule,
             "assertion `" + to_string(f) + "` is outside the data-mute fragment");
    switch (f.kind) {
      case IndexFormula::Kind::Truth:
        return;
      case IndexFormula::Kind::Eq:
        for (const auto& t : f.terms) check_term(t, sc, sp, rule);
        return;
      case IndexFormula::Kind::Forall: {
        Scope inner = sc;
        inner.index.insert(f.binder);
        inner.labels.erase(f.binder);
        check_formula(f.subs[0], inner, sp, rule);
        return;
      }
      default:
        for (const auto& s : f.subs) check_formula(s, sc, sp, rule);
    }
  }

  void check_type(const Ty& ty, const Scope& sc, Span sp) {
    Scope inner = sc;
    std::set<std::string> seen;
    for (const auto& b : ty.binders) {
      if (!seen.insert(b).second)
        report(DiagCode::DuplicateName, sp, "wf-duplicate", "binder `" + b + "` repeated");
      inner.index.insert(b);
      inner.labels.erase(b);
    }
    for (const auto& t : ty.terms) check_term(t, inner, sp, "wf-type");
    for (const auto& x : ty.ins) check_type(x, inner, sp);
    for (const auto& x : ty.outs) check_type(x, inner, sp);
    for (const auto& x : ty.comps) check_type(x, inner, sp);
    if (ty.kind == Ty::Kind::Proc) {
      check_formula(ty.pre, inner, sp, "wf-type");
      check_formula(ty.post, inner, sp, "wf-type");
    }
  }

  void bind_index(Scope& sc, const std::string& name, Span sp) {
    if (sc.index.count(name))
      report(DiagCode::ShadowedIndexVar, sp, "wf-shadow",
             "index variable `" + name + "` is already bound");
    sc.index.insert(name);
  }

  void check_distinct(const std::vector<std::string>& names, Span sp, const std::string& what) {
    std::set<std::string> seen;
    for (const auto& n : names)
      if (!seen.insert(n).second)
        report(DiagCode::DuplicateName, sp, "wf-duplicate", what + " `" + n + "` repeated");
  }

  void check_params(const std::vector<Param>& ps, const Scope& sc) {
    for (const auto& p : ps) check_type(p.type, sc, p.span);
  }

  void check_proc(const ProcLit& p, Scope sc) {
    check_distinct(p.binders, p.span, "procedure binder");
    for (const auto& b : p.binders) bind_index(sc, b, p.span);
    std::vector<std::string> names;
    for (const auto& x : p.ins) names.push_back(x.name);
    for (const auto& x : p.outs) names.push_back(x.name);
    check_distinct(names, p.span, "parameter");
    check_params(p.ins, sc);
    check_params(p.outs, sc);
    check_formula(p.pre, sc, p.span, "wf-pre");
    check_formula(p.post, sc, p.span, "wf-post");
    check_seq(p.body, sc);
  }

  void check_seq(const Seq& seq, Scope sc) {
    for (const auto& s : seq) check_stmt(s, sc);
  }

  // `sc` is updated for statements that bind for the rest of the sequence.
  void check_stmt(const Stmt& s, Scope& sc) {
    switch (s.kind) {
      case Stmt::Kind::Skip:
        return;
      case Stmt::Kind::Assign:
        check_expr(s.expr, sc);
        return;
      case Stmt::Kind::Call:
        check_expr(s.expr, sc);
        for (const auto& t : s.idx_args) check_term(t, sc, s.span, "wf-call");
        for (const auto& a : s.args) check_expr(a, sc);
        check_distinct(s.names, s.span, "out variable");
        return;
      case Stmt::Kind::For: {
        check_expr(s.expr, sc);
        Scope inner = sc;
        bind_index(inner, s.inv_binder, s.span);
        std::vector<std::string> names;
        for (const auto& p : s.footprint) names.push_back(p.name);
        check_distinct(names, s.span, "footprint variable");
        check_params(s.footprint, inner);
        check_seq(s.body, inner);
        return;
      }
      case Stmt::Kind::LabelBlock: {
        std::vector<std::string> names;
        for (const auto& p : s.footprint) names.push_back(p.name);
        check_distinct(names, s.span, "footprint variable");
        check_params(s.footprint, sc);
        Scope inner = sc;
        inner.labels.insert(s.name);
        check_seq(s.body, inner);
        return;
      }
      case Stmt::Kind::Jump:
        check_expr(s.expr, sc);
        for (const auto& a : s.args) check_expr(a, sc);
        return;
      case Stmt::Kind::Claim:
        check_formula(s.claim, sc, s.span, "wf-claim");
        return;
      case Stmt::Kind::Unpack:
        check_expr(s.expr, sc);
        check_distinct(s.idx_names, s.span, "index name");
        check_distinct(s.names, s.span, "value name");
        for (const auto& n : s.idx_names) bind_index(sc, n, s.span);
        return;
    }
  }

  void check_expr(const Expr& e, const Scope& sc) {
    switch (e.kind) {
      case Expr::Kind::Var:
      case Expr::Kind::Zero:
      case Expr::Kind::LabelRef:
        return;
      case Expr::Kind::Succ:
        check_expr(e.args[0], sc);
        return;
      case Expr::Kind::Pack:
        for (const auto& t : e.idx_args) check_term(t, sc, e.span, "wf-pack");
        for (const auto& a : e.args) check_expr(a, sc);
        return;
      case Expr::Kind::ProcLit:
        check_proc(*e.proc, sc);
        return;
      case Expr::Kind::Impure: {
        const Stmt& inner = *e.impure;
        const char* what = inner.kind == Stmt::Kind::Jump ? "jump" : "label block";
        report(DiagCode::ImpureExpr, inner.span, "wf-impure",
               std::string("impure expression: ") + what +
                   " in expression position (only procedure bodies may contain control)");
        return;
      }
    }
  }

  const Program& prog_;
  std::string proc_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> well_formed(const Program& p) { return Checker(p).run(); }

}  // namespace loopw
