#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "loopw/ast.hpp"
#include "loopw/cli.hpp"
#include "loopw/parser.hpp"

namespace loopw::test {

inline std::filesystem::path corpus_dir() { return LOOPW_CORPUS_DIR; }
inline std::filesystem::path golden_dir() { return LOOPW_GOLDEN_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline Program load(const std::string& name) { return parse_program(read_file(corpus_dir() / name)); }

/// Well-typed programs that the differential and trace properties range over.
inline std::vector<std::filesystem::path> corpus_programs() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(corpus_dir()))
    if (e.is_regular_file() && e.path().extension() == ".loopw") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

inline CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

/// Every tuple of `arity` components drawn from 0..max.
inline std::vector<std::vector<std::uint64_t>> input_grid(std::size_t arity, std::uint64_t max) {
  std::vector<std::vector<std::uint64_t>> out{{}};
  for (std::size_t i = 0; i < arity; ++i) {
    std::vector<std::vector<std::uint64_t>> next;
    for (const auto& prefix : out)
      for (std::uint64_t v = 0; v <= max; ++v) {
        next.push_back(prefix);
        next.back().push_back(v);
      }
    out = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random index terms and formulas over the shipped `add` system

inline Program add_system() {
  return parse_program(
      "sig add/2;\n"
      "eq add(0, m) = m;\n"
      "eq add(s(n), m) = s(add(n, m));\n"
      "eq add(n, s(m)) = s(add(n, m));\n"
      "proc main(in; out) { skip; }\n");
}

class TermGen {
 public:
  explicit TermGen(unsigned seed, std::vector<std::string> vars = {"x", "y"})
      : rng_(seed), vars_(std::move(vars)) {}

  IndexTerm term(int depth) {
    int choices = depth <= 0 ? 2 : 4;
    switch (pick(choices)) {
      case 0:
        return IndexTerm::zero();
      case 1:
        return vars_.empty() ? IndexTerm::zero() : IndexTerm::var(vars_[pick(vars_.size())]);
      case 2:
        return IndexTerm::succ(term(depth - 1));
      default:
        return IndexTerm::app("add", {term(depth - 1), term(depth - 1)});
    }
  }

  IndexTerm closed_term(int depth) {
    auto saved = std::move(vars_);
    vars_.clear();
    IndexTerm t = term(depth);
    vars_ = std::move(saved);
    return t;
  }

  IndexFormula formula(int depth) {
    int choices = depth <= 0 ? 2 : 5;
    switch (pick(choices)) {
      case 0:
        return pick(4) == 0 ? IndexFormula::truth() : eq();
      case 1:
        return eq();
      case 2:
        return IndexFormula::conj(formula(depth - 1), formula(depth - 1));
      case 3:
        return IndexFormula::implies(formula(depth - 1), formula(depth - 1));
      default:
        return IndexFormula::forall("z", formula(depth - 1));
    }
  }

  int pick(std::size_t n) { return static_cast<int>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_)); }

 private:
  IndexFormula eq() {
    auto with_z = vars_;
    with_z.push_back("z");
    auto saved = std::move(vars_);
    vars_ = with_z;
    IndexFormula f = IndexFormula::eq(term(2), term(2));
    vars_ = std::move(saved);
    return f;
  }

  std::mt19937 rng_;
  std::vector<std::string> vars_;
};

}  // namespace loopw::test
