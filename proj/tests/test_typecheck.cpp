#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "loopw/parser.hpp"
#include "loopw/printer.hpp"
#include "loopw/typecheck.hpp"
#include "support.hpp"

using namespace loopw;

namespace {

const Program& sys() {
  static const Program p = loopw::test::add_system();
  return p;
}

IndexTerm t(const char* s) { return parse_term(s, sys()); }
Ty nat(const char* s) { return Ty::nat(t(s)); }

// Runs `f` and collects every diagnostic it produced, fatal or recorded.
std::vector<Diagnostic> diags(TypeChecker& tc, const std::function<void()>& f) {
  std::size_t before = tc.report().diagnostics.size();
  std::vector<Diagnostic> out;
  try {
    f();
  } catch (const TypeError& e) {
    out.push_back(e.diagnostic());
  }
  const auto& all = tc.report().diagnostics;
  out.insert(out.end(), all.begin() + static_cast<std::ptrdiff_t>(before), all.end());
  return out;
}

bool has(const std::vector<Diagnostic>& ds, DiagCode c, const std::string& rule = {}) {
  for (const auto& d : ds)
    if (d.code == c && (rule.empty() || d.rule == rule)) return true;
  return false;
}

std::vector<Diagnostic> check_source(const std::string& src) {
  return check_program(parse_program(src)).diagnostics;
}

const char* kAdd =
    "sig add/2;\n"
    "eq add(0, m) = m;\n"
    "eq add(s(n), m) = s(add(n, m));\n"
    "eq add(n, s(m)) = s(add(n, m));\n";

}  // namespace

TEST_CASE("infer_expr axioms") {
  TypeChecker tc(sys());
  Context empty;
  CHECK(tc.infer_expr(empty, Expr::zero()) == nat("0"));
  CHECK(tc.infer_expr(empty, Expr::succ(Expr::succ(Expr::zero()))) == nat("s(s(0))"));
}

TEST_CASE("pack checks against an existential by instantiating its binder") {
  TypeChecker tc(sys());
  Context ctx;
  ctx.bind_index("n").bind_mutable("x", nat("n"));
  Expr e = Expr::pack({t("n")}, {Expr::var("x")});
  Ty ex = Ty::exists({"m"}, {nat("m")});
  auto ds = diags(tc, [&] { tc.check_expr(ctx, e, ex, "test"); });
  CHECK(ds.empty());
  auto bad = diags(tc, [&] { tc.check_expr(ctx, Expr::pack({t("s(n)")}, {Expr::var("x")}), ex, "test"); });
  CHECK(has(bad, DiagCode::TypeMismatch));
}

TEST_CASE("check_seq: skip and assignment") {
  TypeChecker tc(sys());
  Context ctx;
  ctx.bind_index("n").bind_mutable("x", nat("n"));
  auto r = tc.check_seq(ctx, {Stmt::skip()});
  CHECK(r.reachable);
  CHECK(r.omega_out == ctx.omega);

  auto r2 = tc.check_seq(ctx, {Stmt::assign("x", Expr::succ(Expr::var("x")))});
  CHECK(r2.omega_out.at("x") == nat("s(n)"));
}

TEST_CASE("check_seq: code after a jump is unreachable and absorbed") {
  TypeChecker tc(sys());
  Context ctx;
  ctx.bind_value("k", Ty::label({})).bind_mutable("x", nat("0"));
  Seq s = {Stmt::assign("x", Expr::zero()), Stmt::jump(Expr::label_ref("k"), {}),
           Stmt::assign("x", Expr::succ(Expr::var("nowhere")))};
  SeqResult r;
  auto ds = diags(tc, [&] { r = tc.check_seq(ctx, s); });
  CHECK(ds.empty());
  CHECK_FALSE(r.reachable);

  // Any expected outgoing environment is accepted.
  Omega anything{{"x", nat("s(s(0))")}, {"ghost", Ty::exists({"m"}, {nat("m")})}};
  auto ds2 = diags(tc, [&] { r = tc.check_seq(ctx, s, anything); });
  CHECK(ds2.empty());
}

TEST_CASE("check_seq with an expected environment") {
  TypeChecker tc(sys());
  Context ctx;
  ctx.bind_mutable("x", nat("0"));
  Seq s = {Stmt::assign("x", Expr::succ(Expr::zero()))};
  CHECK(diags(tc, [&] { tc.check_seq(ctx, s, Omega{{"x", nat("add(0, s(0))")}}); }).empty());
  CHECK(has(diags(tc, [&] { tc.check_seq(ctx, s, Omega{{"x", nat("0")}}); }), DiagCode::TypeMismatch));
}

TEST_CASE("for rule: double loop") {
  TypeChecker tc(sys());
  Context ctx;
  ctx.bind_index("n").bind_mutable("a", nat("n")).bind_mutable("b", nat("0"));
  Stmt loop = Stmt::for_loop("y", Expr::var("a"), "i", {{"b", nat("add(i, i)"), {}}},
                             {Stmt::assign("b", Expr::succ(Expr::succ(Expr::var("b"))))});
  SeqResult r;
  auto ds = diags(tc, [&] { r = tc.check_for(ctx, loop); });
  CHECK(ds.empty());
  CHECK(r.omega_out.at("b") == nat("add(n, n)"));
  CHECK(r.omega_out.at("a") == nat("n"));
}

TEST_CASE("for rule: invariant that fails on entry") {
  TypeChecker tc(sys());
  Context ctx;
  ctx.bind_index("n").bind_mutable("a", nat("n")).bind_mutable("b", nat("0"));
  Stmt loop = Stmt::for_loop("y", Expr::var("a"), "i", {{"b", nat("add(i, s(i))"), {}}},
                             {Stmt::assign("b", Expr::succ(Expr::succ(Expr::var("b"))))});
  auto ds = diags(tc, [&] { tc.check_for(ctx, loop); });
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].code == DiagCode::InvariantEntryMismatch);
  CHECK(ds[0].rule == "for-entry");
}

TEST_CASE("for rule: body that breaks the invariant") {
  TypeChecker tc(sys());
  Context ctx;
  ctx.bind_index("n").bind_mutable("a", nat("n")).bind_mutable("b", nat("0"));
  Stmt loop = Stmt::for_loop("y", Expr::var("a"), "i", {{"b", nat("add(i, i)"), {}}},
                             {Stmt::assign("b", Expr::succ(Expr::var("b")))});
  auto ds = diags(tc, [&] { tc.check_for(ctx, loop); });
  CHECK(has(ds, DiagCode::InvariantPreservationMismatch, "for-preserve"));
}

TEST_CASE("label rule") {
  TypeChecker tc(sys());
  Context ctx;
  ctx.bind_mutable("r", nat("0"));
  std::vector<Param> fp = {{"r", nat("s(0)"), {}}};

  SUBCASE("normal exit") {
    Stmt blk = Stmt::label_block("k", fp, {Stmt::assign("r", Expr::succ(Expr::zero()))});
    SeqResult r;
    CHECK(diags(tc, [&] { r = tc.check_label_block(ctx, blk); }).empty());
    CHECK(r.reachable);
    CHECK(r.omega_out.at("r") == nat("s(0)"));
  }
  SUBCASE("exit by jump") {
    Stmt blk = Stmt::label_block("k", fp, {Stmt::jump(Expr::label_ref("k"), {Expr::succ(Expr::zero())})});
    Seq rest = {Stmt::skip()};
    SeqResult r;
    CHECK(diags(tc, [&] { r = tc.check_label_block(ctx, blk, rest); }).empty());
    CHECK(r.reachable);
    CHECK(r.omega_out.at("r") == nat("s(0)"));
  }
  SUBCASE("normal exit at the wrong type") {
    Stmt blk = Stmt::label_block("k", fp, {Stmt::skip()});
    auto ds = diags(tc, [&] { tc.check_label_block(ctx, blk); });
    CHECK(has(ds, DiagCode::TypeMismatch, "label-out"));
  }
}

TEST_CASE("jump rule") {
  TypeChecker tc(sys());
  Context ctx;
  ctx.bind_value("k0", Ty::label({}))
      .bind_value("k1", Ty::label({nat("0")}))
      .bind_value("k2", Ty::label({nat("s(0)")}));
  SeqResult r;
  CHECK(diags(tc, [&] { r = tc.check_jump(ctx, Stmt::jump(Expr::label_ref("k0"), {})); }).empty());
  CHECK_FALSE(r.reachable);
  CHECK(diags(tc, [&] { tc.check_jump(ctx, Stmt::jump(Expr::label_ref("k1"), {Expr::zero()})); }).empty());
  auto bad = diags(tc, [&] { tc.check_jump(ctx, Stmt::jump(Expr::label_ref("k2"), {Expr::zero()})); });
  CHECK(has(bad, DiagCode::TypeMismatch, "jump-arg"));
  auto arity = diags(tc, [&] { tc.check_jump(ctx, Stmt::jump(Expr::label_ref("k0"), {Expr::zero()})); });
  CHECK(has(arity, DiagCode::TypeMismatch, "jump-arity"));
}

TEST_CASE("error codes") {
  SUBCASE("reading outside a label footprint") {
    auto ds = check_source(
        "proc main(in a : nat(0); out r : nat(0)) {\n"
        "  r := 0;\n"
        "  label k out (r : nat(0)) { r := a; };\n"
        "}\n");
    CHECK(has(ds, DiagCode::FootprintViolation, "footprint"));
  }
  SUBCASE("procedure literal capturing a mutable") {
    auto ds = check_source(
        "proc main(in a : nat(0); out f : proc(in; out nat(0))) {\n"
        "  f := proc(in; out r : nat(0)) { r := a; };\n"
        "}\n");
    CHECK(has(ds, DiagCode::FootprintViolation, "proc-capture"));
  }
  SUBCASE("read before assignment") {
    auto ds = check_source("proc main(in; out r : nat(0), q : nat(0)) { q := r; r := 0; }\n");
    CHECK(has(ds, DiagCode::UseBeforeAssign));
  }
  SUBCASE("out parameter never assigned") {
    auto ds = check_source("proc main(in; out r : nat(0)) { skip; }\n");
    CHECK(has_errors(ds));
  }
  SUBCASE("jump to a number") {
    auto ds = check_source("proc main(in a : nat(0); out) { jump a(); }\n");
    CHECK(has(ds, DiagCode::NotALabel));
  }
  SUBCASE("call a number") {
    auto ds = check_source("proc main(in a : nat(0); out) { call a[](;); }\n");
    CHECK(has(ds, DiagCode::NotAProc));
  }
  SUBCASE("assign to a loop counter") {
    auto ds = check_source(
        "proc main(in a : nat(0); out) {\n"
        "  for y := 0 until a invariant [i](a : nat(0)) { y := 0; };\n"
        "}\n");
    CHECK(has(ds, DiagCode::NotMutable));
  }
  SUBCASE("wrong call arity") {
    auto ds = check_source(
        "proc f(in x : nat(0); out) { skip; }\n"
        "proc main(in; out) { call f[](0, 0;); }\n");
    CHECK(has(ds, DiagCode::TypeMismatch, "call-arity"));
  }
  SUBCASE("errors in one procedure do not hide another's") {
    auto ds = check_source(
        "proc f(in a : nat(0); out) { jump a(); }\n"
        "proc main(in; out r : nat(0)) { r := s(0); }\n");
    CHECK(has(ds, DiagCode::NotALabel));
    CHECK(has(ds, DiagCode::TypeMismatch, "proc-out"));
  }
}

TEST_CASE("the corpus type-checks") {
  for (const auto& f : loopw::test::corpus_programs()) {
    CAPTURE(f.string());
    CheckReport r = check_program(parse_program(loopw::test::read_file(f)));
    // claims.loopw carries a deliberately false claim
    bool expect_ok = f.filename() != "claims.loopw";
    CHECK(r.ok(false) == expect_ok);
  }
}

TEST_CASE("negative corpus is rejected for the documented reason") {
  auto d1 = check_program(loopw::test::load("negative/double_bad_invariant.loopw")).diagnostics;
  std::size_t entry = 0;
  for (const auto& d : d1) entry += d.code == DiagCode::InvariantEntryMismatch;
  CHECK(entry == 1);
  auto d2 = check_program(loopw::test::load("negative/early_exit_arity.loopw")).diagnostics;
  CHECK(has(d2, DiagCode::TypeMismatch, "jump-arity"));
}

TEST_CASE("frame property over the corpus") {
  std::size_t checked = 0;
  for (const auto& f : loopw::test::corpus_programs()) {
    Program p = parse_program(loopw::test::read_file(f));
    CheckReport r = check_program(p);
    std::function<void(const Seq&)> walk = [&](const Seq& s) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        walk(s[i].body);
        if (i == 0 || s[i].footprint.empty()) continue;
        auto before = r.after.find(&s[i - 1]);
        auto after = r.after.find(&s[i]);
        if (before == r.after.end() || after == r.after.end()) continue;
        for (const auto& [x, ty] : before->second) {
          bool in_fp = false;
          for (const auto& p : s[i].footprint) in_fp |= p.name == x;
          if (in_fp) continue;
          ++checked;
          CAPTURE(f.string());
          CAPTURE(x);
          REQUIRE(after->second.count(x));
          CHECK(after->second.at(x) == ty);
        }
      }
    };
    for (const auto& d : p.procs) walk(d.proc.body);
  }
  CHECK(checked > 5);
}

TEST_CASE("checking is deterministic") {
  for (const auto& f : loopw::test::corpus_programs()) {
    Program p = parse_program(loopw::test::read_file(f));
    CheckReport a = check_program(p);
    CheckReport b = check_program(p);
    REQUIRE(a.diagnostics.size() == b.diagnostics.size());
    for (std::size_t i = 0; i < a.diagnostics.size(); ++i)
      CHECK(format_tsv(a.diagnostics[i]) == format_tsv(b.diagnostics[i]));
    REQUIRE(a.obligations.size() == b.obligations.size());
    for (std::size_t i = 0; i < a.obligations.size(); ++i) {
      CHECK(a.obligations[i].goal == b.obligations[i].goal);
      CHECK(a.obligations[i].status == b.obligations[i].status);
    }
    CHECK(a.after.size() == b.after.size());
    for (const auto& [stmt, omega] : a.after) CHECK(b.after.at(stmt) == omega);
  }
  TypeChecker tc(sys());
  Context ctx;
  ctx.bind_index("n").bind_mutable("x", nat("n"));
  Expr e = Expr::pack({t("add(n, 0)")}, {Expr::succ(Expr::var("x"))});
  CHECK(tc.infer_expr(ctx, e) == tc.infer_expr(ctx, e));
}

TEST_CASE("compare_types") {
  EqSystem e = EqSystem::from(sys());
  Ty a = Ty::exists({"m"}, {nat("m")});
  Ty b = Ty::exists({"k"}, {Ty::nat(IndexTerm::var("k"))});
  CHECK(compare_types(a, b, e).status.is_proven());
  CHECK(compare_types(nat("add(s(0), m)"), nat("s(m)"), e).status.is_proven());
  CHECK(compare_types(nat("0"), nat("s(0)"), e).status.is_refuted());
  CHECK(compare_types(nat("0"), Ty::label({}), e).status.is_refuted());

  Program sp = parse_program(std::string(kAdd) + "proc main(in; out) { skip; }");
  Ty p1 = parse_type("proc[n](in nat(n); out nat(n)) pre n = 0", sp);
  Ty p2 = parse_type("proc[j](in nat(j); out nat(j)) pre j = 0", sp);
  Ty p3 = parse_type("proc[j](in nat(j); out nat(j))", sp);
  auto same = compare_types(p1, p2, e);
  CHECK(same.status.is_proven());
  CHECK(same.pending.empty());
  auto differ = compare_types(p1, p3, e);
  CHECK(differ.pending.size() == 1);
}

TEST_CASE("formulas_equal modulo E and alpha") {
  EqSystem e = EqSystem::from(sys());
  auto f = [](const char* s) { return parse_formula(s, sys()); };
  CHECK(formulas_equal(f("forall i. add(0, i) = i"), f("forall j. j = j"), e).is_proven());
  CHECK(formulas_equal(f("forall i. i = 0"), f("forall j. j = 0"), e).is_proven());
  CHECK(formulas_equal(f("forall i. i = 0"), f("forall j. j = s(0)"), e).is_refuted());
  CHECK(formulas_equal(f("add(s(0), 0) = n"), f("s(0) = n"), e).is_proven());
}
