#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace loopw {

/// Source position (1-based). Spans never take part in structural equality,
/// so a reparsed program compares equal to the tree it was printed from.
struct Span {
  int line = 0;
  int col = 0;

  friend bool operator==(const Span&, const Span&) { return true; }
};

/// Immutable heap cell with value semantics: copies share, `==` compares
/// the pointees.
template <class T>
class Box {
 public:
  Box() = default;
  Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}

  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  const T* get() const { return ptr_.get(); }
  explicit operator bool() const { return ptr_ != nullptr; }

  friend bool operator==(const Box& a, const Box& b) {
    if (a.ptr_ == b.ptr_) return true;
    if (!a.ptr_ || !b.ptr_) return false;
    return *a.ptr_ == *b.ptr_;
  }

 private:
  std::shared_ptr<const T> ptr_;
};

// ---------------------------------------------------------------------------
// Index layer

struct IndexTerm {
  enum class Kind { Var, Zero, Succ, App };

  Kind kind = Kind::Zero;
  std::string name;             // Var: variable, App: function symbol
  std::vector<IndexTerm> args;  // Succ: exactly one, App: arity many

  static IndexTerm var(std::string n) { return {Kind::Var, std::move(n), {}}; }
  static IndexTerm zero() { return {Kind::Zero, {}, {}}; }
  static IndexTerm succ(IndexTerm t) { return {Kind::Succ, {}, {std::move(t)}}; }
  static IndexTerm app(std::string f, std::vector<IndexTerm> a) {
    return {Kind::App, std::move(f), std::move(a)};
  }
  static IndexTerm numeral(std::uint64_t n);

  bool operator==(const IndexTerm&) const = default;
};

/// Assertion language. Everything except `Or` is the data-mute fragment;
/// `Or` exists so the fragment guard has something to reject and is never
/// produced by the parser.
struct IndexFormula {
  enum class Kind { Truth, Eq, And, Implies, Forall, Or };

  Kind kind = Kind::Truth;
  std::string binder;              // Forall
  std::vector<IndexTerm> terms;    // Eq: lhs, rhs
  std::vector<IndexFormula> subs;  // And/Implies/Or: two, Forall: one

  static IndexFormula truth() { return {}; }
  static IndexFormula eq(IndexTerm a, IndexTerm b) {
    return {Kind::Eq, {}, {std::move(a), std::move(b)}, {}};
  }
  static IndexFormula conj(IndexFormula a, IndexFormula b) {
    return {Kind::And, {}, {}, {std::move(a), std::move(b)}};
  }
  static IndexFormula implies(IndexFormula a, IndexFormula b) {
    return {Kind::Implies, {}, {}, {std::move(a), std::move(b)}};
  }
  static IndexFormula forall(std::string x, IndexFormula body) {
    return {Kind::Forall, std::move(x), {}, {std::move(body)}};
  }
  static IndexFormula disj(IndexFormula a, IndexFormula b) {
    return {Kind::Or, {}, {}, {std::move(a), std::move(b)}};
  }

  bool operator==(const IndexFormula&) const = default;
};

// ---------------------------------------------------------------------------
// Types

struct Ty {
  /// `Label` is the negation type of a first-class label. `Undef` marks a
  /// mutable variable that has been declared but not yet assigned; neither
  /// has concrete syntax.
  enum class Kind { Nat, Proc, Exists, Eq, Label, Undef };

  Kind kind = Kind::Undef;
  std::vector<IndexTerm> terms;       // Nat: one, Eq: two
  std::vector<std::string> binders;   // Proc, Exists
  std::vector<Ty> ins;                // Proc
  std::vector<Ty> outs;               // Proc
  std::vector<Ty> comps;              // Exists components, Label payload
  IndexFormula pre;                   // Proc
  IndexFormula post;                  // Proc

  static Ty nat(IndexTerm t) {
    Ty ty;
    ty.kind = Kind::Nat;
    ty.terms = {std::move(t)};
    return ty;
  }
  static Ty eq(IndexTerm a, IndexTerm b) {
    Ty ty;
    ty.kind = Kind::Eq;
    ty.terms = {std::move(a), std::move(b)};
    return ty;
  }
  static Ty proc(std::vector<std::string> binders, std::vector<Ty> ins, std::vector<Ty> outs,
                 IndexFormula pre = {}, IndexFormula post = {}) {
    Ty ty;
    ty.kind = Kind::Proc;
    ty.binders = std::move(binders);
    ty.ins = std::move(ins);
    ty.outs = std::move(outs);
    ty.pre = std::move(pre);
    ty.post = std::move(post);
    return ty;
  }
  static Ty exists(std::vector<std::string> binders, std::vector<Ty> comps) {
    Ty ty;
    ty.kind = Kind::Exists;
    ty.binders = std::move(binders);
    ty.comps = std::move(comps);
    return ty;
  }
  static Ty label(std::vector<Ty> payload) {
    Ty ty;
    ty.kind = Kind::Label;
    ty.comps = std::move(payload);
    return ty;
  }
  static Ty undef() { return Ty{}; }

  bool operator==(const Ty&) const = default;
};

struct Param {
  std::string name;
  Ty type;
  Span span;

  bool operator==(const Param&) const = default;
};

// ---------------------------------------------------------------------------
// Programs

struct Stmt;
struct ProcLit;

struct Expr {
  /// `Impure` wraps a statement written in expression position. The parser
  /// accepts it so that well-formedness can report the stratification
  /// violation with a precise span; it is never well formed.
  enum class Kind { Var, Zero, Succ, Pack, ProcLit, LabelRef, Impure };

  Kind kind = Kind::Zero;
  std::string name;                  // Var, LabelRef
  std::vector<Expr> args;            // Succ: one, Pack: components
  std::vector<IndexTerm> idx_args;   // Pack witnesses
  Box<ProcLit> proc;                 // ProcLit
  Box<Stmt> impure;                  // Impure
  Span span;

  static Expr var(std::string n, Span sp = {});
  static Expr zero(Span sp = {});
  static Expr succ(Expr e, Span sp = {});
  static Expr pack(std::vector<IndexTerm> idx, std::vector<Expr> comps, Span sp = {});
  static Expr label_ref(std::string n, Span sp = {});
  static Expr proc_lit(ProcLit p, Span sp = {});
  static Expr impure_stmt(Stmt s, Span sp = {});

  bool operator==(const Expr&) const = default;
};

using Seq = std::vector<Stmt>;

struct ProcLit {
  std::vector<std::string> binders;
  std::vector<Param> ins;
  std::vector<Param> outs;
  IndexFormula pre;
  IndexFormula post;
  Seq body;
  Span span;

  /// The procedure type this literal is declared at.
  Ty type() const;

  bool operator==(const ProcLit&) const = default;
};

struct Stmt {
  enum class Kind { Skip, Assign, Call, For, LabelBlock, Jump, Claim, Unpack };

  Kind kind = Kind::Skip;
  std::string name;                  // Assign target, For counter, LabelBlock label
  Expr expr;                         // Assign rhs, Call target, For bound, Jump label, Unpack rhs
  std::vector<IndexTerm> idx_args;   // Call
  std::vector<Expr> args;            // Call in-args, Jump payload
  std::vector<std::string> names;    // Call out-vars, Unpack value names
  std::vector<std::string> idx_names;  // Unpack index names
  std::string inv_binder;            // For
  std::vector<Param> footprint;      // For invariant, LabelBlock out
  Seq body;                          // For, LabelBlock
  IndexFormula claim;                // Claim
  Span span;

  static Stmt skip(Span sp = {});
  static Stmt assign(std::string x, Expr e, Span sp = {});
  static Stmt call(Expr target, std::vector<IndexTerm> idx, std::vector<Expr> ins,
                   std::vector<std::string> outs, Span sp = {});
  static Stmt for_loop(std::string counter, Expr bound, std::string binder,
                       std::vector<Param> footprint, Seq body, Span sp = {});
  static Stmt label_block(std::string k, std::vector<Param> footprint, Seq body, Span sp = {});
  static Stmt jump(Expr k, std::vector<Expr> args, Span sp = {});
  static Stmt claim_stmt(IndexFormula f, Span sp = {});
  static Stmt unpack(std::vector<std::string> idx, std::vector<std::string> vals, Expr e,
                     Span sp = {});

  bool operator==(const Stmt&) const = default;
};

struct FunSym {
  std::string name;
  int arity = 0;
  Span span;

  bool operator==(const FunSym&) const = default;
};

struct Equation {
  IndexTerm lhs;
  IndexTerm rhs;
  Span span;

  bool operator==(const Equation&) const = default;
};

struct ProcDecl {
  std::string name;
  ProcLit proc;
  Span span;

  bool operator==(const ProcDecl&) const = default;
};

struct Program {
  std::vector<FunSym> signature;
  std::vector<Equation> equations;
  std::vector<ProcDecl> procs;
  std::string entry;

  const ProcDecl* find_proc(const std::string& name) const;
  const ProcDecl& entry_proc() const;
  int arity_of(const std::string& fsym) const;  // -1 when undeclared

  bool operator==(const Program&) const = default;
};

/// The entry procedure is `main` when present, otherwise the last one.
std::string default_entry(const std::vector<ProcDecl>& procs);

}  // namespace loopw
