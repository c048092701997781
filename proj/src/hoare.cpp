#include "loopw/hoare.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "loopw/terms.hpp"

namespace loopw {

namespace {

void require_data_mute(const IndexFormula& f, Span sp, const std::string& proc) {
  if (is_data_mute(f)) return;
  Diagnostic d;
  d.code = DiagCode::NonDataMuteAssertion;
  d.span = sp;
  d.rule = "triple";
  d.message = "assertion is outside the data-mute fragment";
  d.proc = proc;
  throw TypeError(std::move(d));
}

bool all_proven(const std::vector<Obligation>& obs) {
  for (const auto& o : obs)
    if (!o.status.is_proven()) return false;
  return true;
}

}  // namespace

TripleResult check_triple(TypeChecker& tc, const Context& ctx, const Triple& t, Span span) {
  require_data_mute(t.pre, span, ctx.proc);
  require_data_mute(t.post, span, ctx.proc);

  TripleResult out;
  auto& report = tc.report();
  const std::size_t first_ob = report.obligations.size();
  const std::size_t first_diag = report.diagnostics.size();

  Context start = ctx;
  start.assertion = t.pre;
  try {
    out.result = tc.check_seq(start, t.seq, t.omega_out);
    if (out.result.reachable) {
      Obligation o;
      o.hyps = {out.result.assertion};
      o.goal = t.post;
      o.span = span;
      o.rule = "triple-post";
      o.proc = ctx.proc;
      report.obligations.push_back(std::move(o));
    }
  } catch (const TypeError& err) {
    out.diagnostics.push_back(err.diagnostic());
  }

  out.obligations.assign(report.obligations.begin() + first_ob, report.obligations.end());
  out.diagnostics.insert(out.diagnostics.begin(), report.diagnostics.begin() + first_diag,
                         report.diagnostics.end());
  report.obligations.resize(first_ob);
  report.diagnostics.resize(first_diag);

  sort_obligations(out.obligations);
  const auto& opts = tc.options();
  if (opts.discharge) {
    discharge(out.obligations, tc.equations(), EntailOptions{opts.bound});
  } else {
    for (auto& o : out.obligations) o.status = ProofStatus::unproven("skipped");
  }
  out.accepted = !has_errors(out.diagnostics) && all_proven(out.obligations);
  return out;
}

ConsequenceResult apply_consequence(TypeChecker& tc, const Context& ctx,
                                    const IndexFormula& wider_pre, const Triple& t,
                                    const IndexFormula& wider_post, Span span) {
  require_data_mute(wider_pre, span, ctx.proc);
  require_data_mute(wider_post, span, ctx.proc);

  ConsequenceResult out{
      Triple{wider_pre, t.seq, t.omega_out, wider_post},
      consequence_obligations(wider_pre, t.pre, t.post, wider_post, span, ctx.proc),
      check_triple(tc, ctx, t, span),
      ProofStatus::proven(),
      false,
  };
  const auto& opts = tc.options();
  for (auto& o : out.obligations) {
    o.status = opts.discharge ? entails(o.hyps, o.goal, tc.equations(), EntailOptions{opts.bound})
                              : ProofStatus::unproven("skipped");
  }

  auto fold = [&](const ProofStatus& s) {
    if (out.verdict.is_refuted()) return;
    if (s.is_refuted() || (out.verdict.is_proven() && !s.is_proven())) out.verdict = s;
  };
  if (has_errors(out.inner.diagnostics)) fold(ProofStatus::refuted());
  for (const auto& o : out.inner.obligations) fold(o.status);
  for (const auto& o : out.obligations) fold(o.status);
  out.accepted = out.verdict.is_proven();
  return out;
}

std::vector<Obligation> vcgen(const Program& p, const CheckOptions& opts) {
  return check_program(p, opts).obligations;
}

// ---------------------------------------------------------------------------
// SMT-LIB2 export

namespace {

std::string smt_symbol(const std::string& name) {
  static const std::string extra = "~!@$%^&*_-+=<>.?/";
  bool simple = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0]));
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && extra.find(c) == std::string::npos)
      simple = false;
  return simple ? name : "|" + name + "|";
}

std::string smt(const IndexTerm& t) {
  switch (t.kind) {
    case IndexTerm::Kind::Var:
      return smt_symbol(t.name);
    case IndexTerm::Kind::Zero:
      return "zero";
    case IndexTerm::Kind::Succ:
      return "(succ " + smt(t.args[0]) + ")";
    case IndexTerm::Kind::App: {
      if (t.args.empty()) return smt_symbol(t.name);
      std::string out = "(" + smt_symbol(t.name);
      for (const auto& a : t.args) out += " " + smt(a);
      return out + ")";
    }
  }
  return {};
}

std::string smt(const IndexFormula& f) {
  switch (f.kind) {
    case IndexFormula::Kind::Truth:
      return "true";
    case IndexFormula::Kind::Eq:
      return "(= " + smt(f.terms[0]) + " " + smt(f.terms[1]) + ")";
    case IndexFormula::Kind::And:
      return "(and " + smt(f.subs[0]) + " " + smt(f.subs[1]) + ")";
    case IndexFormula::Kind::Or:
      return "(or " + smt(f.subs[0]) + " " + smt(f.subs[1]) + ")";
    case IndexFormula::Kind::Implies:
      return "(=> " + smt(f.subs[0]) + " " + smt(f.subs[1]) + ")";
    case IndexFormula::Kind::Forall:
      return "(forall ((" + smt_symbol(f.binder) + " Nat)) " + smt(f.subs[0]) + ")";
  }
  return {};
}

std::string quantified(const std::set<std::string>& vars, const std::string& body) {
  if (vars.empty()) return body;
  std::string out = "(forall (";
  bool first = true;
  for (const auto& v : vars) {
    out += (first ? "(" : " (") + smt_symbol(v) + " Nat)";
    first = false;
  }
  return out + ") " + body + ")";
}

}  // namespace

std::string to_smtlib(const Obligation& o, const Program& p) {
  std::ostringstream out;
  out << "; " << o.proc << " " << o.rule << " " << o.span.line << ":" << o.span.col << "\n";
  out << "(set-logic ALL)\n";
  out << "(declare-datatypes ((Nat 0)) (((zero) (succ (pred Nat)))))\n";
  for (const auto& f : p.signature) {
    out << "(declare-fun " << smt_symbol(f.name) << " (";
    for (int i = 0; i < f.arity; ++i) out << (i ? " Nat" : "Nat");
    out << ") Nat)\n";
  }
  for (const auto& eq : p.equations) {
    std::set<std::string> vars = free_vars(eq.lhs);
    collect_free_vars(eq.rhs, vars);
    out << "(assert " << quantified(vars, "(= " + smt(eq.lhs) + " " + smt(eq.rhs) + ")") << ")\n";
  }
  std::set<std::string> free;
  for (const auto& h : o.hyps) collect_free_vars(h, free);
  collect_free_vars(o.goal, free);
  for (const auto& v : free) out << "(declare-const " << smt_symbol(v) << " Nat)\n";
  for (const auto& h : o.hyps)
    if (h.kind != IndexFormula::Kind::Truth) out << "(assert " << smt(h) << ")\n";
  out << "(assert (not " << smt(o.goal) << "))\n";
  out << "(check-sat)\n";
  return out.str();
}

std::vector<std::filesystem::path> export_smt(const std::vector<Obligation>& obs, const Program& p,
                                              const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::map<std::string, int> counter;
  std::vector<std::filesystem::path> written;
  for (const auto& o : obs) {
    auto path = dir / (o.proc + "_" + std::to_string(++counter[o.proc]) + ".smt2");
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << to_smtlib(o, p);
    written.push_back(path);
  }
  return written;
}

}  // namespace loopw
