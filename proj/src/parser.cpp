#include "loopw/parser.hpp"

#include <cctype>
#include <map>
#include <set>

namespace loopw {

std::string ParseError::format(Kind kind, Span span, const std::string& msg) {
  const char* what = kind == Kind::Syntax  ? "syntax error"
                     : kind == Kind::Arity ? "arity error"
                                           : "unbound name";
  return std::to_string(span.line) + ":" + std::to_string(span.col) + ": " + what + ": " + msg;
}

namespace {

enum class Tok { Ident, Keyword, Nat, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {
      "sig",   "eq",    "proc",  "in",    "out",    "pre",    "post", "skip",
      "call",  "for",   "until", "invariant", "label", "jump", "claim", "unpack",
      "pack",  "nat",   "exists", "true", "forall", "s"};
  return kw;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Span sp{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string word(src.substr(i, j - i));
      Tok kind = keywords().count(word) ? Tok::Keyword : Tok::Ident;
      out.push_back({kind, word, sp});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Nat, std::string(src.substr(i, j - i)), sp});
      advance(j - i);
      continue;
    }
    static const char* two[] = {":=", "&&", "=>"};
    bool matched = false;
    for (const char* t : two) {
      if (src.substr(i, 2) == t) {
        out.push_back({Tok::Sym, t, sp});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("()[]{};,:=./").find(c) != std::string_view::npos) {
      out.push_back({Tok::Sym, std::string(1, c), sp});
      advance(1);
      continue;
    }
    throw ParseError(ParseError::Kind::Syntax, sp, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

enum class NameKind { Value, Label };

class Parser {
 public:
  Parser(std::vector<Token> toks, const std::vector<FunSym>* sig, bool lenient)
      : toks_(std::move(toks)), lenient_(lenient) {
    if (sig) signature_ = *sig;
  }

  Program program() {
    Program p;
    while (is_kw("sig")) p.signature.push_back(sig_decl());
    signature_ = p.signature;
    while (is_kw("eq")) p.equations.push_back(eq_decl());
    scopes_.emplace_back();
    do {
      p.procs.push_back(proc_decl());
      scopes_.back()[p.procs.back().name] = NameKind::Value;
    } while (is_kw("proc"));
    expect_end();
    p.entry = default_entry(p.procs);
    return p;
  }

  IndexFormula formula_only() {
    auto f = formula();
    expect_end();
    return f;
  }
  IndexTerm term_only() {
    auto t = term();
    expect_end();
    return t;
  }
  Ty type_only() {
    auto t = type();
    expect_end();
    return t;
  }

 private:
  // -- token helpers ---------------------------------------------------------
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool is_sym(const char* s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Sym && peek(k).text == s;
  }
  bool is_kw(const char* s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Keyword && peek(k).text == s;
  }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(ParseError::Kind::Syntax, t.span, "expected " + expected + ", found " + found);
  }
  Token expect_sym(const char* s) {
    if (!is_sym(s)) fail(std::string("'") + s + "'");
    return next();
  }
  Token expect_kw(const char* s) {
    if (!is_kw(s)) fail(std::string("'") + s + "'");
    return next();
  }
  std::string ident() {
    if (peek().kind != Tok::Ident) fail("identifier");
    return next().text;
  }
  void expect_end() {
    if (peek().kind != Tok::End) fail("end of input");
  }

  // -- scopes ----------------------------------------------------------------
  void bind(const std::string& n, NameKind k = NameKind::Value) { scopes_.back()[n] = k; }
  const NameKind* lookup(const std::string& n) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(n);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }
  void require_bound(const std::string& n, Span sp) const {
    if (!lookup(n)) throw ParseError(ParseError::Kind::UnboundName, sp, "`" + n + "` is not bound");
  }

  // -- declarations ----------------------------------------------------------
  FunSym sig_decl() {
    Span sp = expect_kw("sig").span;
    std::string name = ident();
    expect_sym("/");
    if (peek().kind != Tok::Nat) fail("arity");
    int arity = std::stoi(next().text);
    expect_sym(";");
    return {name, arity, sp};
  }

  Equation eq_decl() {
    Span sp = expect_kw("eq").span;
    IndexTerm lhs = term();
    expect_sym("=");
    IndexTerm rhs = term();
    expect_sym(";");
    return {std::move(lhs), std::move(rhs), sp};
  }

  ProcDecl proc_decl() {
    Span sp = expect_kw("proc").span;
    std::string name = ident();
    ProcLit lit = proc_rest(sp);
    return {name, std::move(lit), sp};
  }

  // After the `proc` keyword (and name, for declarations).
  ProcLit proc_rest(Span sp) {
    ProcLit p;
    p.span = sp;
    if (is_sym("[")) p.binders = bracket_idents();
    expect_sym("(");
    expect_kw("in");
    if (!is_sym(";")) p.ins = params();
    expect_sym(";");
    expect_kw("out");
    if (!is_sym(")")) p.outs = params();
    expect_sym(")");
    if (is_kw("pre")) {
      next();
      p.pre = formula();
    }
    if (is_kw("post")) {
      next();
      p.post = formula();
    }
    scopes_.emplace_back();
    for (const auto& x : p.ins) bind(x.name);
    for (const auto& x : p.outs) bind(x.name);
    p.body = block();
    scopes_.pop_back();
    return p;
  }

  std::vector<std::string> bracket_idents() {
    expect_sym("[");
    std::vector<std::string> out;
    if (!is_sym("]")) {
      out.push_back(ident());
      while (is_sym(",")) {
        next();
        out.push_back(ident());
      }
    }
    expect_sym("]");
    return out;
  }

  std::vector<Param> params() {
    std::vector<Param> out;
    do {
      if (!out.empty()) next();
      Span sp = peek().span;
      std::string n = ident();
      expect_sym(":");
      out.push_back({n, type(), sp});
    } while (is_sym(","));
    return out;
  }

  // -- statements ------------------------------------------------------------
  Seq block() {
    expect_sym("{");
    scopes_.emplace_back();
    Seq out;
    while (!is_sym("}")) {
      out.push_back(stmt());
      expect_sym(";");
    }
    next();
    scopes_.pop_back();
    return out;
  }

  Stmt stmt() {
    const Token& t = peek();
    Span sp = t.span;
    if (is_kw("skip")) {
      next();
      return Stmt::skip(sp);
    }
    if (is_kw("call")) {
      next();
      Expr target = expr();
      std::vector<IndexTerm> idx;
      if (is_sym("[")) {
        next();
        if (!is_sym("]")) idx = terms();
        expect_sym("]");
      }
      expect_sym("(");
      std::vector<Expr> ins;
      if (!is_sym(";")) ins = exprs();
      expect_sym(";");
      std::vector<std::string> outs;
      if (!is_sym(")")) outs = idents_resolved();
      expect_sym(")");
      return Stmt::call(std::move(target), std::move(idx), std::move(ins), std::move(outs), sp);
    }
    if (is_kw("for")) {
      next();
      std::string y = ident();
      expect_sym(":=");
      if (peek().kind != Tok::Nat || peek().text != "0") fail("'0' (loops start at 0)");
      next();
      expect_kw("until");
      Expr bound = expr();
      expect_kw("invariant");
      expect_sym("[");
      std::string binder = ident();
      expect_sym("]");
      expect_sym("(");
      auto fp = params();
      expect_sym(")");
      for (const auto& p : fp) require_bound(p.name, p.span);
      scopes_.emplace_back();
      bind(y);
      Seq body = block();
      scopes_.pop_back();
      return Stmt::for_loop(y, std::move(bound), binder, std::move(fp), std::move(body), sp);
    }
    if (is_kw("label")) {
      next();
      std::string k = ident();
      expect_kw("out");
      expect_sym("(");
      std::vector<Param> fp;
      if (!is_sym(")")) fp = params();
      expect_sym(")");
      for (const auto& p : fp) require_bound(p.name, p.span);
      scopes_.emplace_back();
      bind(k, NameKind::Label);
      Seq body = block();
      scopes_.pop_back();
      return Stmt::label_block(k, std::move(fp), std::move(body), sp);
    }
    if (is_kw("jump")) {
      next();
      Expr k = expr();
      expect_sym("(");
      std::vector<Expr> args;
      if (!is_sym(")")) args = exprs();
      expect_sym(")");
      return Stmt::jump(std::move(k), std::move(args), sp);
    }
    if (is_kw("claim")) {
      next();
      return Stmt::claim_stmt(formula(), sp);
    }
    if (is_kw("unpack")) {
      next();
      auto idx = bracket_idents();
      expect_sym("(");
      std::vector<std::string> vals;
      if (!is_sym(")")) {
        vals.push_back(ident());
        while (is_sym(",")) {
          next();
          vals.push_back(ident());
        }
      }
      expect_sym(")");
      expect_sym(":=");
      Expr e = expr();
      for (const auto& v : vals) bind(v);
      return Stmt::unpack(std::move(idx), std::move(vals), std::move(e), sp);
    }
    if (t.kind == Tok::Ident && is_sym(":=", 1)) {
      std::string x = next().text;
      require_bound(x, sp);
      next();
      return Stmt::assign(x, expr(), sp);
    }
    fail("statement");
  }

  std::vector<std::string> idents_resolved() {
    std::vector<std::string> out;
    do {
      if (!out.empty()) next();
      Span sp = peek().span;
      out.push_back(ident());
      require_bound(out.back(), sp);
    } while (is_sym(","));
    return out;
  }

  // -- expressions -----------------------------------------------------------
  std::vector<Expr> exprs() {
    std::vector<Expr> out;
    out.push_back(expr());
    while (is_sym(",")) {
      next();
      out.push_back(expr());
    }
    return out;
  }

  Expr expr() {
    const Token& t = peek();
    Span sp = t.span;
    if (t.kind == Tok::Nat) {
      next();
      Expr e = Expr::zero(sp);
      for (unsigned long n = std::stoul(t.text); n > 0; --n) e = Expr::succ(std::move(e), sp);
      return e;
    }
    if (is_kw("s")) {
      next();
      expect_sym("(");
      Expr inner = expr();
      expect_sym(")");
      return Expr::succ(std::move(inner), sp);
    }
    if (is_kw("pack")) {
      next();
      expect_sym("[");
      std::vector<IndexTerm> idx;
      if (!is_sym("]")) idx = terms();
      expect_sym("]");
      expect_sym("(");
      std::vector<Expr> comps;
      if (!is_sym(")")) comps = exprs();
      expect_sym(")");
      return Expr::pack(std::move(idx), std::move(comps), sp);
    }
    if (is_kw("proc")) {
      next();
      return Expr::proc_lit(proc_rest(sp), sp);
    }
    if (is_kw("jump") || is_kw("label")) {
      return Expr::impure_stmt(stmt(), sp);
    }
    if (t.kind == Tok::Ident) {
      std::string n = next().text;
      const NameKind* k = lookup(n);
      if (!k) throw ParseError(ParseError::Kind::UnboundName, sp, "`" + n + "` is not bound");
      return *k == NameKind::Label ? Expr::label_ref(n, sp) : Expr::var(n, sp);
    }
    fail("expression");
  }

  // -- index layer -----------------------------------------------------------
  std::vector<IndexTerm> terms() {
    std::vector<IndexTerm> out;
    out.push_back(term());
    while (is_sym(",")) {
      next();
      out.push_back(term());
    }
    return out;
  }

  IndexTerm term() {
    const Token& t = peek();
    Span sp = t.span;
    if (t.kind == Tok::Nat) {
      next();
      return IndexTerm::numeral(std::stoull(t.text));
    }
    if (is_kw("s")) {
      next();
      expect_sym("(");
      IndexTerm inner = term();
      expect_sym(")");
      return IndexTerm::succ(std::move(inner));
    }
    if (t.kind == Tok::Ident) {
      std::string n = next().text;
      if (!is_sym("(")) return IndexTerm::var(n);
      next();
      std::vector<IndexTerm> args;
      if (!is_sym(")")) args = terms();
      expect_sym(")");
      check_arity(n, args.size(), sp);
      return IndexTerm::app(n, std::move(args));
    }
    fail("index term");
  }

  void check_arity(const std::string& f, std::size_t n, Span sp) const {
    for (const auto& s : signature_) {
      if (s.name != f) continue;
      if (static_cast<std::size_t>(s.arity) != n)
        throw ParseError(ParseError::Kind::Arity, sp,
                         "`" + f + "` expects " + std::to_string(s.arity) + " argument(s), got " +
                             std::to_string(n));
      return;
    }
    if (lenient_ && signature_.empty()) return;
    throw ParseError(ParseError::Kind::Arity, sp, "function symbol `" + f + "` is not declared");
  }

  IndexFormula formula() {
    IndexFormula lhs = conjunction();
    if (is_sym("=>")) {
      next();
      return IndexFormula::implies(std::move(lhs), formula());
    }
    return lhs;
  }

  IndexFormula conjunction() {
    IndexFormula lhs = atom();
    while (is_sym("&&")) {
      next();
      lhs = IndexFormula::conj(std::move(lhs), atom());
    }
    return lhs;
  }

  IndexFormula atom() {
    if (is_kw("true")) {
      next();
      return IndexFormula::truth();
    }
    if (is_kw("forall")) {
      next();
      std::string x = ident();
      expect_sym(".");
      return IndexFormula::forall(x, formula());
    }
    if (is_sym("(")) {
      next();
      IndexFormula f = formula();
      expect_sym(")");
      return f;
    }
    IndexTerm a = term();
    expect_sym("=");
    IndexTerm b = term();
    return IndexFormula::eq(std::move(a), std::move(b));
  }

  // -- types -----------------------------------------------------------------
  std::vector<Ty> types() {
    std::vector<Ty> out;
    out.push_back(type());
    while (is_sym(",")) {
      next();
      out.push_back(type());
    }
    return out;
  }

  Ty type() {
    if (is_kw("nat")) {
      next();
      expect_sym("(");
      IndexTerm t = term();
      expect_sym(")");
      return Ty::nat(std::move(t));
    }
    if (is_kw("proc")) {
      next();
      std::vector<std::string> bs;
      if (is_sym("[")) bs = bracket_idents();
      expect_sym("(");
      expect_kw("in");
      std::vector<Ty> ins, outs;
      if (!is_sym(";")) ins = types();
      expect_sym(";");
      expect_kw("out");
      if (!is_sym(")")) outs = types();
      expect_sym(")");
      IndexFormula pre, post;
      if (is_kw("pre")) {
        next();
        pre = formula();
      }
      if (is_kw("post")) {
        next();
        post = formula();
      }
      return Ty::proc(std::move(bs), std::move(ins), std::move(outs), std::move(pre),
                      std::move(post));
    }
    if (is_kw("exists")) {
      next();
      auto bs = bracket_idents();
      expect_sym("(");
      std::vector<Ty> comps;
      if (!is_sym(")")) comps = types();
      expect_sym(")");
      return Ty::exists(std::move(bs), std::move(comps));
    }
    if (peek().kind == Tok::Ident || peek().kind == Tok::Nat || is_kw("s")) {
      IndexTerm a = term();
      expect_sym("=");
      IndexTerm b = term();
      return Ty::eq(std::move(a), std::move(b));
    }
    fail("type");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<FunSym> signature_;
  bool lenient_ = false;
  std::vector<std::map<std::string, NameKind>> scopes_;
};

}  // namespace

Program parse_program(std::string_view text) {
  Parser p(lex(text), nullptr, false);
  return p.program();
}

IndexFormula parse_formula(std::string_view text, const Program& sig) {
  Parser p(lex(text), &sig.signature, true);
  return p.formula_only();
}

IndexTerm parse_term(std::string_view text, const Program& sig) {
  Parser p(lex(text), &sig.signature, true);
  return p.term_only();
}

Ty parse_type(std::string_view text, const Program& sig) {
  Parser p(lex(text), &sig.signature, true);
  return p.type_only();
}

}  // namespace loopw
