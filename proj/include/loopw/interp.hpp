#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "loopw/ast.hpp"
#include "loopw/typecheck.hpp"

namespace loopw {

struct RtValue;
using RtRef = std::shared_ptr<const RtValue>;
using Valuation = std::map<std::string, std::uint64_t>;

struct RtValue {
  enum class Kind { Numeral, Proc, Pack, Label };

  Kind kind = Kind::Numeral;
  std::uint64_t n = 0;                                     // Numeral; Label tag
  const ProcLit* proc = nullptr;                           // Proc
  std::shared_ptr<const std::map<std::string, RtRef>> captured;  // Proc: immutables
  std::shared_ptr<const Valuation> captured_index;         // Proc: index values
  std::vector<RtRef> items;                                // Pack components
  std::vector<std::optional<std::uint64_t>> witnesses;     // Pack index arguments, when known
  std::size_t arity = 0;                                   // Label payload arity
};

std::string render(const RtValue& v);

class RuntimeError : public std::runtime_error {
 public:
  enum class Kind { EscapedLabel, FuelExceeded, BadInput };

  RuntimeError(Kind kind, std::string what) : std::runtime_error(std::move(what)), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct RunOptions {
  std::uint64_t fuel = 50'000'000;  // statements executed
};

using Store = std::map<std::string, RtRef>;

/// State after one executed statement. `index` is the dynamic value of every
/// index variable the frame knows (entry binders, loop binders, call index
/// arguments, unpacked witnesses).
struct Snapshot {
  Span span;
  const Stmt* stmt = nullptr;
  std::string proc;
  Store store;
  Valuation index;
};

/// Runs the entry procedure on numeral inputs; one rendered value per out
/// parameter.
std::vector<std::string> run(const Program& p, const std::vector<std::uint64_t>& inputs,
                             const RunOptions& opts = {});

std::vector<Snapshot> trace(const Program& p, const std::vector<std::uint64_t>& inputs,
                            const RunOptions& opts = {});

struct NatViolation {
  Snapshot at;
  std::string var;
  IndexTerm static_index;
  std::uint64_t expected = 0;
  std::string found;
};

struct NatReport {
  std::vector<NatViolation> violations;
  std::size_t checked = 0;  // variable/snapshot pairs with a closed nat index
};

/// Compares every snapshot value against the closed instance of its static
/// nat(t) type, as recorded by the checker in `report.after`.
NatReport nat_soundness(const Program& p, const CheckReport& report,
                                        const std::vector<Snapshot>& snaps, const EqSystem& e);

}  // namespace loopw
