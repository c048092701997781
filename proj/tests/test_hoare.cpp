#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loopw/hoare.hpp"
#include "loopw/parser.hpp"
#include "loopw/printer.hpp"
#include "support.hpp"

using namespace loopw;

namespace {

const Program& sys() {
  static const Program p = loopw::test::add_system();
  return p;
}

IndexFormula f(const char* s) { return parse_formula(s, sys()); }

Triple skip_triple(const char* pre, const char* post) { return {f(pre), {Stmt::skip()}, {}, f(post)}; }

Context with_n() {
  Context ctx;
  ctx.bind_index("n");
  ctx.proc = "t";
  return ctx;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("loopw_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("triple: true skip true") {
  TypeChecker tc(sys());
  auto r = check_triple(tc, with_n(), skip_triple("true", "true"));
  REQUIRE(r.obligations.size() == 1);
  CHECK(r.obligations[0].rule == "triple-post");
  CHECK(r.obligations[0].goal == IndexFormula::truth());
  CHECK(r.obligations[0].status.is_proven());
  CHECK(r.accepted);
}

TEST_CASE("triple: symmetric equation after skip") {
  TypeChecker tc(sys());
  auto r = check_triple(tc, with_n(), skip_triple("n = 0", "0 = n"));
  REQUIRE(r.obligations.size() == 1);
  CHECK(r.obligations[0].hyps == std::vector<IndexFormula>{f("n = 0")});
  CHECK(r.obligations[0].status.is_proven());
  CHECK(r.accepted);
}

TEST_CASE("triple: false postcondition") {
  TypeChecker tc(sys());
  auto r = check_triple(tc, with_n(), skip_triple("true", "0 = s(0)"));
  REQUIRE(r.obligations.size() == 1);
  CHECK(r.obligations[0].status.is_refuted());
  CHECK_FALSE(r.accepted);
}

TEST_CASE("triple: claims are threaded through the slot") {
  TypeChecker tc(sys());
  Triple t{f("n = s(0)"), {Stmt::claim_stmt(f("add(0, n) = s(0)")), Stmt::skip()}, {}, f("add(n, 0) = s(0)")};
  auto r = check_triple(tc, with_n(), t);
  REQUIRE(r.obligations.size() == 2);
  CHECK(r.obligations[0].rule == "claim");
  CHECK(r.obligations[1].hyps == std::vector<IndexFormula>{f("add(0, n) = s(0)")});
  CHECK(r.accepted);
}

TEST_CASE("triple: unreachable end yields no post obligation") {
  TypeChecker tc(sys());
  Context ctx = with_n();
  ctx.bind_value("k", Ty::label({}));
  Triple t{f("true"), {Stmt::jump(Expr::label_ref("k"), {})}, {}, f("0 = s(0)")};
  auto r = check_triple(tc, ctx, t);
  CHECK(r.obligations.empty());
  CHECK_FALSE(r.result.reachable);
  CHECK(r.accepted);
}

TEST_CASE("triple: type errors make it rejected") {
  TypeChecker tc(sys());
  Context ctx = with_n();
  ctx.bind_mutable("x", Ty::nat(IndexTerm::zero()));
  Triple t{f("true"), {Stmt::assign("x", Expr::succ(Expr::var("x")))}, Omega{{"x", Ty::nat(IndexTerm::zero())}},
           f("true")};
  auto r = check_triple(tc, ctx, t);
  CHECK(has_errors(r.diagnostics));
  CHECK_FALSE(r.accepted);
}

TEST_CASE("non data-mute assertions are refused") {
  TypeChecker tc(sys());
  Triple t = skip_triple("true", "true");
  t.post = IndexFormula::disj(f("true"), f("true"));
  try {
    check_triple(tc, with_n(), t);
    FAIL("expected a type error");
  } catch (const TypeError& e) {
    CHECK(e.diagnostic().code == DiagCode::NonDataMuteAssertion);
  }
  CHECK_THROWS_AS(apply_consequence(tc, with_n(), IndexFormula::disj(f("true"), f("true")),
                                    skip_triple("true", "true"), f("true")),
                  TypeError);
}

TEST_CASE("consequence: identical bounds") {
  TypeChecker tc(sys());
  Triple t = skip_triple("n = 0", "n = 0");
  auto r = apply_consequence(tc, with_n(), t.pre, t, t.post);
  for (const auto& o : r.obligations) {
    REQUIRE(o.hyps.size() == 1);
    CHECK(o.hyps[0] == o.goal);
    CHECK(o.status.is_proven());
  }
  CHECK(r.obligations[0].rule == "consequence-pre");
  CHECK(r.obligations[1].rule == "consequence-post");
  CHECK(r.accepted);
  CHECK(r.verdict.is_proven());
  CHECK(r.widened.pre == t.pre);
}

TEST_CASE("consequence: strengthen the precondition") {
  TypeChecker tc(sys());
  auto r = apply_consequence(tc, with_n(), f("n = 0"), skip_triple("true", "true"), f("true"));
  CHECK(r.obligations[0].hyps == std::vector<IndexFormula>{f("n = 0")});
  CHECK(r.obligations[0].goal == f("true"));
  CHECK(r.obligations[0].status.is_proven());
  CHECK(r.accepted);
  CHECK(r.widened.pre == f("n = 0"));
}

TEST_CASE("consequence: a post that needs induction stays Unproven") {
  TypeChecker tc(sys());
  auto r = apply_consequence(tc, with_n(), f("true"), skip_triple("true", "true"), f("add(n, 0) = n"));
  CHECK(r.obligations[1].status.kind == ProofStatus::Kind::Unproven);
  CHECK(r.obligations[1].status.reason == "bounded");
  CHECK(r.verdict.kind == ProofStatus::Kind::Unproven);
  CHECK_FALSE(r.accepted);
}

TEST_CASE("consequence: a false weakening is Refuted") {
  TypeChecker tc(sys());
  auto r = apply_consequence(tc, with_n(), f("true"), skip_triple("true", "true"), f("n = s(n)"));
  CHECK(r.verdict.is_refuted());
}

TEST_CASE("vcgen on the claims program") {
  auto obs = vcgen(loopw::test::load("claims.loopw"));
  REQUIRE(obs.size() == 3);
  CHECK(obs[0].status.is_proven());
  CHECK(obs[1].status.is_proven());
  CHECK(obs[2].status.is_refuted());
  CHECK(obs[0].span.line < obs[1].span.line);
  CHECK(obs[1].span.line < obs[2].span.line);
  CHECK(to_string(obs[2].goal) == "0 = s(0)");
}

TEST_CASE("vcgen: program without assertions") {
  CHECK(vcgen(parse_program("proc main(in; out) { skip; }")).empty());
  CHECK(vcgen(loopw::test::load("double.loopw")).empty());
}

TEST_CASE("vcgen: a single false claim") {
  auto obs = vcgen(loopw::test::load("negative/bad_claim.loopw"));
  std::size_t refuted = 0;
  for (const auto& o : obs) refuted += o.status.is_refuted();
  CHECK(refuted == 1);
}

TEST_CASE("vcgen: pre, post and call obligations") {
  auto p = parse_program(
      "sig add/2;\n"
      "eq add(0, m) = m;\n"
      "eq add(s(n), m) = s(add(n, m));\n"
      "proc inc[n](in a : nat(n); out b : nat(s(n))) pre n = n post add(s(0), n) = s(n) { b := s(a); }\n"
      "proc main(in; out r : nat(s(0))) { call inc[0](0; r); claim add(s(0), 0) = s(0); }\n");
  auto obs = vcgen(p);
  REQUIRE(obs.size() == 3);
  CHECK(obs[0].rule == "post");
  CHECK(obs[1].rule == "call-pre");
  CHECK(obs[2].rule == "claim");
  for (const auto& o : obs) CHECK(o.status.is_proven());
  CHECK(vcgen(p).size() == obs.size());
}

TEST_CASE("monotonicity of consequence over the corpus") {
  std::size_t tried = 0;
  for (const auto& file : loopw::test::corpus_programs()) {
    Program p = parse_program(loopw::test::read_file(file));
    for (std::size_t i = 0; i < p.procs.size(); ++i) {
      const ProcLit& lit = p.procs[i].proc;
      TypeChecker tc(p);
      Context ctx = tc.proc_context(tc.top_context(i), lit);
      Omega outs;
      for (const auto& x : lit.outs) outs[x.name] = x.type;
      Triple t{lit.pre, lit.body, outs, lit.post};
      TripleResult base = check_triple(tc, ctx, t);
      if (!base.accepted) continue;

      IndexFormula stronger = IndexFormula::conj(lit.pre, IndexFormula::eq(IndexTerm::zero(), IndexTerm::zero()));
      IndexFormula weaker = IndexFormula::truth();
      EqSystem e = EqSystem::from(p);
      REQUIRE(entails({stronger}, lit.pre, e).is_proven());
      REQUIRE(entails({lit.post}, weaker, e).is_proven());
      TypeChecker tc2(p);
      Context ctx2 = tc2.proc_context(tc2.top_context(i), lit);
      auto widened = apply_consequence(tc2, ctx2, stronger, t, weaker);
      CAPTURE(file.string());
      CAPTURE(p.procs[i].name);
      CHECK(widened.accepted);
      TypeChecker tc3(p);
      Context ctx3 = tc3.proc_context(tc3.top_context(i), lit);
      CHECK(check_triple(tc3, ctx3, {stronger, lit.body, outs, weaker}).accepted);
      ++tried;
    }
  }
  CHECK(tried >= 10);
}

TEST_CASE("SMT-LIB rendering") {
  Program p = loopw::test::load("claims.loopw");
  auto obs = vcgen(p);
  std::string smt = to_smtlib(obs[1], p);
  CHECK(smt.find("(declare-datatypes ((Nat 0)) (((zero) (succ (pred Nat)))))") != std::string::npos);
  CHECK(smt.find("(declare-fun add (Nat Nat) Nat)") != std::string::npos);
  CHECK(smt.find("forall") != std::string::npos);
  CHECK(smt.find("(declare-const n Nat)") != std::string::npos);
  CHECK(smt.find("(assert (not ") != std::string::npos);
  CHECK(smt.rfind("(check-sat)") != std::string::npos);
  CHECK(smt.find("(assert (not ") < smt.find("(check-sat)"));
}

TEST_CASE("SMT export writes one file per obligation") {
  Program p = loopw::test::load("claims.loopw");
  auto dir = scratch_dir("smt");
  auto paths = export_smt(vcgen(p), p, dir);
  REQUIRE(paths.size() == 3);
  CHECK(paths[0].filename() == "main_1.smt2");
  CHECK(paths[2].filename() == "main_3.smt2");
  for (const auto& path : paths) CHECK(std::filesystem::exists(path));
  CHECK(loopw::test::read_file(paths[2]).find("(check-sat)") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("discharge only changes obligation statuses") {
  for (const auto& file : loopw::test::corpus_programs()) {
    Program p = parse_program(loopw::test::read_file(file));
    CheckOptions off;
    off.discharge = false;
    CheckReport lazy = check_program(p, off);
    CheckReport eager = check_program(p);
    CAPTURE(file.string());
    REQUIRE(lazy.obligations.size() == eager.obligations.size());
    for (std::size_t i = 0; i < lazy.obligations.size(); ++i) {
      CHECK(lazy.obligations[i].goal == eager.obligations[i].goal);
      CHECK(lazy.obligations[i].hyps == eager.obligations[i].hyps);
      CHECK(lazy.obligations[i].status.reason == "skipped");
    }
    std::vector<std::string> a, b;
    for (const auto& d : lazy.diagnostics) a.push_back(format_tsv(d));
    for (const auto& d : eager.diagnostics)
      if (d.code != DiagCode::RefutedObligation && d.code != DiagCode::UnprovenObligation)
        b.push_back(format_tsv(d));
    CHECK(a == b);
    CHECK(lazy.after.size() == eager.after.size());
  }
}
