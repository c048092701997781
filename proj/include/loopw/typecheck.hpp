#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "loopw/ast.hpp"
#include "loopw/diagnostic.hpp"
#include "loopw/index_engine.hpp"
#include "loopw/obligation.hpp"

namespace loopw {

using Omega = std::map<std::string, Ty>;

/// Immutable binding: an index variable, or a value of some type (procedure
/// names, loop counters, labels, unpacked components).
struct GammaEntry {
  enum class Kind { Index, Value };

  Kind kind = Kind::Value;
  Ty type;
};

/// Γ;Ω plus the hidden assertion slot. `hidden` records mutable variables
/// of the current frame that a footprint excludes, and those of enclosing
/// frames that a procedure literal may not capture.
struct Context {
  enum class Hidden { OutsideFootprint, EnclosingFrame };

  std::map<std::string, GammaEntry> gamma;
  Omega omega;
  std::map<std::string, Hidden> hidden;
  IndexFormula assertion;
  std::string proc;

  bool is_bound(const std::string& name) const {
    return gamma.count(name) || omega.count(name) || hidden.count(name);
  }
  Context& bind_index(const std::string& name);
  Context& bind_value(const std::string& name, Ty ty);
  Context& bind_mutable(const std::string& name, Ty ty);
};

struct SeqResult {
  Omega omega_out;
  bool reachable = true;
  IndexFormula assertion;  // the slot at the end of the sequence
};

struct CheckOptions {
  std::size_t step_cap = 10000;
  int bound = 8;
  bool discharge = true;
};

struct CheckReport {
  std::vector<Diagnostic> diagnostics;
  std::vector<Obligation> obligations;
  /// Static Ω after each statement that is reachable, keyed by node address
  /// in the checked Program.
  std::map<const Stmt*, Omega> after;

  bool has_type_errors() const;
  /// No errors, no refuted obligation, and under `strict` nothing unproven.
  bool ok(bool strict) const;
};

/// Fatal typing error: aborts the enclosing top-level procedure.
class TypeError : public std::runtime_error {
 public:
  explicit TypeError(Diagnostic d) : std::runtime_error(format_human(d)), diag_(std::move(d)) {}
  const Diagnostic& diagnostic() const { return diag_; }

 private:
  Diagnostic diag_;
};

/// Result of comparing two types modulo E. Procedure types whose contracts
/// differ are related through the consequence rule: `pending` holds the
/// (wider_pre => pre, post => wider_post) side conditions.
struct TyComparison {
  ProofStatus status;
  std::vector<std::array<IndexFormula, 4>> pending;  // expected.pre, actual.pre, actual.post, expected.post
};

TyComparison compare_types(const Ty& actual, const Ty& expected, const EqSystem& e);
ProofStatus formulas_equal(const IndexFormula& a, const IndexFormula& b, const EqSystem& e);

class TypeChecker {
 public:
  TypeChecker(const Program& p, CheckOptions opts = {});

  Ty infer_expr(const Context& ctx, const Expr& e);
  /// Bidirectional mode: `pack` is checked against the expected existential.
  void check_expr(const Context& ctx, const Expr& e, const Ty& expected, const std::string& rule);

  SeqResult check_seq(Context ctx, const Seq& s, const std::optional<Omega>& expected = {});
  SeqResult check_for(Context ctx, const Stmt& s);
  SeqResult check_label_block(Context ctx, const Stmt& s, std::span<const Stmt> rest = {});
  SeqResult check_jump(const Context& ctx, const Stmt& s);

  /// Checks a procedure literal's body in a fresh frame that sees Γ but not Ω.
  void check_proc_lit(const Context& outer, const ProcLit& p);
  /// The frame a literal's body is checked in: binders in Γ, ins in Ω,
  /// outs unassigned, the slot at `pre`.
  Context proc_context(const Context& outer, const ProcLit& p);
  /// Γ holding the procedures declared before `procs[index]`.
  Context top_context(std::size_t index) const;

  /// Checks every procedure; obligations are discharged per the options.
  CheckReport check_program();

  const EqSystem& equations() const { return eqs_; }
  const CheckOptions& options() const { return opts_; }
  CheckReport& report() { return report_; }

 private:
  bool check_stmt(Context& ctx, const Stmt& s);
  SeqResult run_seq(Context& ctx, std::span<const Stmt> stmts);
  void label_block(Context& ctx, const Stmt& s);
  void for_loop(Context& ctx, const Stmt& s);
  void call(Context& ctx, const Stmt& s);
  void unpack(Context& ctx, const Stmt& s);

  bool conforms(const Context& ctx, const Ty& actual, const Ty& expected, Span sp,
                const std::string& rule, DiagCode code, const std::string& what);
  const Ty& mutable_type(const Context& ctx, const std::string& x, Span sp);
  void require_fresh(const Context& ctx, const std::string& name, Span sp);
  Context body_context(const Context& ctx, const std::vector<Param>& footprint, Span sp);
  void emit(const Context& ctx, std::vector<IndexFormula> hyps, IndexFormula goal, Span sp,
            std::string rule);
  void record(Diagnostic d);
  [[noreturn]] void fail(DiagCode code, Span sp, std::string rule, std::string msg,
                         std::string expected = {}, std::string found = {});

  const Program& prog_;
  CheckOptions opts_;
  EqSystem eqs_;
  CheckReport report_;
  std::string current_proc_;
};

/// Type-checks and discharges. Assumes the program passed well_formed.
CheckReport check_program(const Program& p, const CheckOptions& opts = {});

}  // namespace loopw
