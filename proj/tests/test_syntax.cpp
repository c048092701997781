#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <set>

#include "loopw/parser.hpp"
#include "loopw/printer.hpp"
#include "loopw/well_formed.hpp"
#include "support.hpp"

using namespace loopw;
using loopw::test::load;

namespace {

IndexTerm v(const char* n) { return IndexTerm::var(n); }
IndexTerm add(IndexTerm a, IndexTerm b) { return IndexTerm::app("add", {std::move(a), std::move(b)}); }

// The double program, written out node by node.
Program double_ast() {
  Program p;
  p.signature = {{"add", 2, {}}};
  p.equations = {
      {add(IndexTerm::zero(), v("m")), v("m"), {}},
      {add(IndexTerm::succ(v("n")), v("m")), IndexTerm::succ(add(v("n"), v("m"))), {}},
      {add(v("n"), IndexTerm::succ(v("m"))), IndexTerm::succ(add(v("n"), v("m"))), {}},
  };
  ProcLit lit;
  lit.binders = {"n"};
  lit.ins = {{"a", Ty::nat(v("n")), {}}};
  lit.outs = {{"b", Ty::nat(add(v("n"), v("n"))), {}}};
  Seq loop_body = {Stmt::assign("b", Expr::succ(Expr::succ(Expr::var("b"))))};
  lit.body = {
      Stmt::assign("b", Expr::zero()),
      Stmt::for_loop("y", Expr::var("a"), "i", {{"b", Ty::nat(add(v("i"), v("i"))), {}}}, loop_body),
  };
  p.procs = {{"double", lit, {}}};
  p.entry = "double";
  return p;
}

bool has_code(const std::vector<Diagnostic>& ds, DiagCode c) {
  for (const auto& d : ds)
    if (d.code == c) return true;
  return false;
}

// Counts statements sitting in expression position anywhere in the program.
struct PurityWalk {
  std::size_t impure = 0;

  void expr(const Expr& e) {
    if (e.kind == Expr::Kind::Impure) ++impure;
    for (const auto& a : e.args) expr(a);
    if (e.kind == Expr::Kind::ProcLit) seq(e.proc->body);
  }
  void seq(const Seq& s) {
    for (const auto& st : s) stmt(st);
  }
  void stmt(const Stmt& s) {
    expr(s.expr);
    for (const auto& a : s.args) expr(a);
    seq(s.body);
  }
  void program(const Program& p) {
    for (const auto& d : p.procs) seq(d.proc.body);
  }
};

void footprints(const Seq& s, const std::function<void(const std::vector<Param>&)>& f) {
  for (const auto& st : s) {
    if (st.kind == Stmt::Kind::For || st.kind == Stmt::Kind::LabelBlock) f(st.footprint);
    footprints(st.body, f);
  }
}

// ---------------------------------------------------------------------------
// Random programs for the round-trip property

class ProgramGen {
 public:
  explicit ProgramGen(unsigned seed) : terms_(seed, {"n", "q"}), rng_(seed * 7919u + 1) {}

  Program program() {
    Program p;
    p.signature = {{"add", 2, {}}, {"f", 1, {}}};
    p.equations = {{add(IndexTerm::zero(), v("m")), v("m"), {}}};
    int procs = 1 + pick(2);
    for (int i = 0; i < procs; ++i) {
      std::string name = "p" + std::to_string(i);
      p.procs.push_back({name, proc(2), {}});
      globals_.push_back(name);
    }
    p.entry = default_entry(p.procs);
    return p;
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  IndexTerm term() { return terms_.term(2); }
  IndexFormula formula() { return terms_.formula(2); }

  Ty type(int depth) {
    switch (depth <= 0 ? pick(2) : pick(5)) {
      case 0:
        return Ty::nat(term());
      case 1:
        return Ty::eq(term(), term());
      case 2:
        return Ty::exists({"e" + std::to_string(pick(3))}, {type(depth - 1)});
      case 3:
        return Ty::proc({"b"}, {type(depth - 1)}, {type(depth - 1)}, formula(), IndexFormula::truth());
      default:
        return Ty::nat(IndexTerm::app("f", {term()}));
    }
  }

  Expr expr(const std::vector<std::string>& scope, int depth) {
    switch (depth <= 0 ? pick(2) : pick(5)) {
      case 0:
        return Expr::zero();
      case 1:
        return scope.empty() ? Expr::zero() : Expr::var(scope[pick(static_cast<int>(scope.size()))]);
      case 2:
        return Expr::succ(expr(scope, depth - 1));
      case 3:
        return Expr::pack({term()}, {expr(scope, depth - 1)});
      default: {
        if (depth < 2) return Expr::zero();
        return Expr::proc_lit(proc(0));
      }
    }
  }

  ProcLit proc(int depth) {
    ProcLit lit;
    lit.binders = pick(2) ? std::vector<std::string>{"n"} : std::vector<std::string>{};
    lit.ins = {{"a", type(1), {}}};
    lit.outs = {{"r", type(1), {}}};
    if (pick(2)) lit.pre = formula();
    if (pick(2)) lit.post = formula();
    std::vector<std::string> scope = globals_;
    scope.push_back("a");
    scope.push_back("r");
    lit.body = seq(scope, {}, depth);
    if (lit.body.empty()) lit.body.push_back(Stmt::skip());
    return lit;
  }

  Seq seq(std::vector<std::string> scope, std::vector<std::string> labels, int depth) {
    Seq out;
    int n = 1 + pick(3);
    for (int i = 0; i < n; ++i) {
      switch (depth <= 0 ? pick(3) : pick(8)) {
        case 0:
          out.push_back(Stmt::skip());
          break;
        case 1:
          out.push_back(Stmt::assign(pick(2) ? "r" : "a", expr(scope, 2)));
          break;
        case 2:
          out.push_back(Stmt::claim_stmt(formula()));
          break;
        case 3: {
          auto inner = scope;
          inner.push_back("y");
          out.push_back(Stmt::for_loop("y", expr(scope, 1), "i", {{"r", type(1), {}}},
                                       seq(inner, labels, depth - 1)));
          break;
        }
        case 4: {
          std::string k = "k" + std::to_string(labels.size());
          auto inner = labels;
          inner.push_back(k);
          Seq body = seq(scope, inner, depth - 1);
          body.push_back(Stmt::jump(Expr::label_ref(k), {expr(scope, 1)}));
          out.push_back(Stmt::label_block(k, {{"r", type(1), {}}}, body));
          break;
        }
        case 5:
          if (!labels.empty()) {
            out.push_back(Stmt::jump(Expr::label_ref(labels[pick(static_cast<int>(labels.size()))]), {}));
            break;
          }
          [[fallthrough]];
        case 6:
          out.push_back(Stmt::call(expr(scope, 0), {term()}, {expr(scope, 1)}, {"r"}));
          break;
        default: {
          std::string x = "u" + std::to_string(out.size());
          out.push_back(Stmt::unpack({"c"}, {x}, expr(scope, 1)));
          scope.push_back(x);
          break;
        }
      }
    }
    return out;
  }

  loopw::test::TermGen terms_;
  std::mt19937 rng_;
  std::vector<std::string> globals_;
};

}  // namespace

TEST_CASE("minimal program has one procedure with empty footprints") {
  Program p = parse_program("proc main(in; out){ skip; }");
  REQUIRE(p.procs.size() == 1);
  CHECK(p.procs[0].name == "main");
  CHECK(p.procs[0].proc.ins.empty());
  CHECK(p.procs[0].proc.outs.empty());
  CHECK(p.procs[0].proc.body == Seq{Stmt::skip()});
  CHECK(well_formed(p).empty());
}

TEST_CASE("equation over an undeclared symbol is an arity error") {
  try {
    parse_program("eq add(0,m)=m;\nproc main(in; out){ skip; }");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::Arity);
  }
}

TEST_CASE("arity mismatch against the signature") {
  CHECK_THROWS_AS(parse_program("sig add/2;\neq add(0)=0;\nproc main(in; out){ skip; }"), ParseError);
}

TEST_CASE("unbound value name") {
  try {
    parse_program("proc main(in; out r : nat(0)){ r := x; }");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::UnboundName);
    CHECK(e.span().line == 1);
  }
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_program("proc main(in; out) {\n  skip\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::Syntax);
    CHECK(e.span().line == 3);
  }
}

TEST_CASE("double parses to its documented tree") {
  Program p = load("double.loopw");
  CHECK(p == double_ast());
  CHECK(well_formed(p).empty());
}

TEST_CASE("comments and numeral sugar") {
  Program a = parse_program("-- c\nproc main(in; out r : nat(3)) { r := s(s(s(0))); } -- trailing");
  Program b = parse_program("proc main(in; out r : nat(s(s(s(0))))) { r := s(s(s(0))); }");
  CHECK(a == b);
}

TEST_CASE("jump inside a pack is an impure expression") {
  Program p = load("negative/jump_in_pack.loopw");
  auto ds = well_formed(p);
  REQUIRE(has_code(ds, DiagCode::ImpureExpr));
  for (const auto& d : ds)
    if (d.code == DiagCode::ImpureExpr) {
      CHECK(d.message.find("impure expression") != std::string::npos);
      CHECK(d.span.line > 0);
    }
}

TEST_CASE("label inside a claim is rejected") {
  auto ds = well_formed(load("negative/label_in_claim.loopw"));
  CHECK(has_code(ds, DiagCode::LabelInAssertion));
}

TEST_CASE("unbound index variable in a nat type") {
  Program p = parse_program("proc main(in a : nat(n); out) { skip; }");
  CHECK(has_code(well_formed(p), DiagCode::UnboundIndexVar));
}

TEST_CASE("duplicate footprint names") {
  Program p = parse_program(
      "proc main(in; out r : nat(0)) { r := 0; label k out (r : nat(0), r : nat(0)) { skip; }; }");
  CHECK(has_code(well_formed(p), DiagCode::DuplicateName));
}

TEST_CASE("duplicate procedure names") {
  Program p = parse_program("proc f(in; out) { skip; }\nproc f(in; out) { skip; }");
  CHECK(has_code(well_formed(p), DiagCode::DuplicateName));
}

TEST_CASE("non data-mute formula is outside the fragment") {
  Program p = parse_program("proc main[n](in; out) { skip; }");
  Program q = p;
  q.procs[0].proc.pre = IndexFormula::disj(IndexFormula::truth(), IndexFormula::truth());
  CHECK(well_formed(p).empty());
  CHECK(has_code(well_formed(q), DiagCode::NonDataMuteAssertion));
}

TEST_CASE("round trip over the corpus") {
  std::vector<std::filesystem::path> files = loopw::test::corpus_programs();
  for (const char* sub : {"negative", "divergent"})
    for (const auto& e : std::filesystem::directory_iterator(loopw::test::corpus_dir() / sub))
      files.push_back(e.path());
  REQUIRE(files.size() >= 10);
  for (const auto& f : files) {
    CAPTURE(f.string());
    Program p = parse_program(loopw::test::read_file(f));
    std::string printed = print_program(p);
    Program q = parse_program(printed);
    CHECK(p == q);
    CHECK(print_program(q) == printed);
  }
}

TEST_CASE("round trip over random trees") {
  for (unsigned seed = 1; seed <= 300; ++seed) {
    ProgramGen gen(seed);
    Program p = gen.program();
    std::string printed = print_program(p);
    CAPTURE(printed);
    Program q;
    REQUIRE_NOTHROW(q = parse_program(printed));
    CHECK(p == q);
  }
}

TEST_CASE("purity: no jump or label reachable from an expression in well-formed programs") {
  for (const auto& f : loopw::test::corpus_programs()) {
    Program p = parse_program(loopw::test::read_file(f));
    if (!well_formed(p).empty()) continue;
    PurityWalk w;
    w.program(p);
    CHECK_MESSAGE(w.impure == 0, f.string());
  }
  PurityWalk bad;
  bad.program(load("negative/jump_in_pack.loopw"));
  CHECK(bad.impure == 1);
}

TEST_CASE("corpus footprints have distinct names") {
  for (const auto& f : loopw::test::corpus_programs()) {
    Program p = parse_program(loopw::test::read_file(f));
    for (const auto& d : p.procs)
      footprints(d.proc.body, [&](const std::vector<Param>& fp) {
        std::set<std::string> names;
        for (const auto& x : fp) names.insert(x.name);
        CHECK_MESSAGE(names.size() == fp.size(), f.string());
      });
  }
}
