#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace loopw {

// Untyped functional core: the target of the translation. Indices and
// assertions are erased; records keep only their components.

struct CoreTerm;
using CoreRef = std::shared_ptr<const CoreTerm>;

struct CoreTerm {
  enum class Kind { Var, Lam, App, Zero, Succ, NatIter, Tuple, Proj, Pack };

  Kind kind = Kind::Zero;
  std::string name;           // Var, Lam parameter
  std::size_t index = 0;      // Proj
  std::vector<CoreRef> kids;  // Lam: body; App: f, a; Succ: t; NatIter: n, base, step; Proj: t

  static CoreRef var(std::string n);
  static CoreRef lam(std::string x, CoreRef body);
  static CoreRef app(CoreRef f, CoreRef a);
  static CoreRef zero();
  static CoreRef succ(CoreRef t);
  static CoreRef nat_iter(CoreRef bound, CoreRef base, CoreRef step);
  static CoreRef tuple(std::vector<CoreRef> items);
  static CoreRef proj(CoreRef t, std::size_t k);
  static CoreRef pack(std::vector<CoreRef> items);
  static CoreRef numeral(std::uint64_t n);
  /// `let x = v in body`, encoded as ((lambda x body) v).
  static CoreRef let(std::string x, CoreRef v, CoreRef body);

  // Iterative, so long `succ` chains (large numeral literals) cannot
  // exhaust the stack when released.
  ~CoreTerm();
};

std::string to_sexpr(const CoreRef& t);
std::size_t core_size(const CoreRef& t);

// ---------------------------------------------------------------------------
// Values and evaluation

struct CoreValue;
using ValueRef = std::shared_ptr<const CoreValue>;

struct CoreEnv {
  std::string name;
  ValueRef value;
  std::shared_ptr<const CoreEnv> next;
};
using EnvRef = std::shared_ptr<const CoreEnv>;

struct CoreValue {
  enum class Kind { Numeral, Closure, Tuple, Pack };

  Kind kind = Kind::Numeral;
  std::uint64_t n = 0;
  std::string param;           // Closure
  CoreRef body;                // Closure
  EnvRef env;                  // Closure
  std::vector<ValueRef> items; // Tuple, Pack

  static ValueRef numeral(std::uint64_t n);
};

/// Numerals as decimals, packs as `pack(...)`, closures as `<proc>`.
std::string render(const CoreValue& v);

class StuckTerm : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FuelExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Globals = std::vector<std::pair<std::string, ValueRef>>;

struct EvalOptions {
  std::uint64_t fuel = 50'000'000;
};

/// Call-by-value evaluation on an explicit CEK machine; no native recursion,
/// so deep CPS chains cannot overflow the stack. Free variables resolve in
/// `globals`.
ValueRef eval_core(const CoreRef& t, const Globals& globals = {}, const EvalOptions& opts = {});

}  // namespace loopw
