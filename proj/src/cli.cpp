#include "loopw/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "loopw/hoare.hpp"
#include "loopw/interp.hpp"
#include "loopw/parser.hpp"
#include "loopw/printer.hpp"
#include "loopw/translate.hpp"
#include "loopw/typecheck.hpp"
#include "loopw/well_formed.hpp"

namespace loopw {

namespace {

struct Config {
  std::string file;
  bool strict = false;
  int bound = 8;
  std::size_t step_cap = 10000;
  std::string emit_smt;
  bool no_discharge = false;
  bool tsv = false;
  std::vector<std::uint64_t> inputs;
  std::uint64_t max = 5;
};

// Thrown to leave a command early with an exit code.
struct Exit {
  int code;
};

bool is_obligation_code(DiagCode c) {
  return c == DiagCode::RefutedObligation || c == DiagCode::UnprovenObligation;
}

class Driver {
 public:
  Driver(const Config& cfg, std::ostream& out, std::ostream& err) : cfg_(cfg), out_(out), err_(err) {}

  int check(bool table) {
    load();
    CheckReport r = typecheck();
    if (table) {
      for (const auto& d : r.diagnostics)
        if (!is_obligation_code(d.code)) err_ << format_human(d) << "\n";
      for (const auto& o : r.obligations)
        out_ << to_string(o.status) << "\t" << o.proc << "\t" << o.span.line << ":" << o.span.col
             << "\t" << to_string(o.goal) << "\n";
    } else {
      for (const auto& d : r.diagnostics) out_ << (cfg_.tsv ? format_tsv(d) : format_human(d)) << "\n";
      summarize(r);
    }
    if (!cfg_.emit_smt.empty()) export_smt(r.obligations, prog_, cfg_.emit_smt);
    return r.ok(cfg_.strict) ? kExitOk : kExitRejected;
  }

  int run_cmd() {
    load();
    require_typed();
    try {
      for (const auto& v : run(prog_, cfg_.inputs)) out_ << v << "\n";
    } catch (const RuntimeError& e) {
      err_ << "runtime error: " << e.what() << "\n";
      return e.kind() == RuntimeError::Kind::BadInput ? kExitUsage : kExitRuntime;
    }
    return kExitOk;
  }

  int translate_cmd() {
    load();
    require_typed();
    try {
      out_ << print_unit(translate(prog_));
    } catch (const TranslateError& e) {
      err_ << "translation error: " << e.what() << "\n";
      return kExitRejected;
    }
    return kExitOk;
  }

  int compare() {
    load();
    require_typed();
    TranslationUnit u;
    try {
      u = translate(prog_);
    } catch (const TranslateError& e) {
      err_ << "translation error: " << e.what() << "\n";
      return kExitRejected;
    }
    std::vector<std::uint64_t> in(u.entry_ins, 0);
    std::size_t count = 0;
    for (;;) {
      ++count;
      std::string direct = outcome([&] { return run(prog_, in); });
      std::string core = outcome([&] { return run_core(u, in); });
      if (direct != core) {
        out_ << "diverge at (" << join(in) << "): run " << direct << ", core " << core << "\n";
        return kExitRejected;
      }
      if (!advance(in)) break;
    }
    out_ << "equal\n";
    err_ << count << " input tuple(s) compared\n";
    return kExitOk;
  }

 private:
  void load() {
    std::ifstream f(cfg_.file);
    if (!f) {
      err_ << "cannot read " << cfg_.file << "\n";
      throw Exit{kExitUsage};
    }
    std::stringstream ss;
    ss << f.rdbuf();
    try {
      prog_ = parse_program(ss.str());
    } catch (const ParseError& e) {
      err_ << cfg_.file << ":" << e.what() << "\n";
      throw Exit{kExitUsage};
    }
    auto wf = well_formed(prog_);
    if (!wf.empty()) {
      for (const auto& d : wf) err_ << cfg_.file << ":" << format_human(d) << "\n";
      throw Exit{kExitUsage};
    }
  }

  CheckReport typecheck() {
    CheckOptions opts;
    opts.bound = cfg_.bound;
    opts.step_cap = cfg_.step_cap;
    opts.discharge = !cfg_.no_discharge;
    return check_program(prog_, opts);
  }

  // Execution needs a typed program; obligations only block it under --strict.
  void require_typed() {
    CheckReport r = typecheck();
    bool blocked = false;
    for (const auto& d : r.diagnostics) {
      bool blocks = is_obligation_code(d.code) ? cfg_.strict : d.is_error();
      if (!blocks) continue;
      err_ << format_human(d) << "\n";
      blocked = true;
    }
    if (blocked) throw Exit{kExitRejected};
  }

  void summarize(const CheckReport& r) {
    std::size_t proven = 0, refuted = 0, open = 0;
    for (const auto& o : r.obligations) {
      if (o.status.is_proven())
        ++proven;
      else if (o.status.is_refuted())
        ++refuted;
      else
        ++open;
    }
    out_ << (r.ok(cfg_.strict) ? "ok" : "rejected") << ": " << r.obligations.size()
         << " obligation(s), " << proven << " proven, " << open << " unproven, " << refuted
         << " refuted\n";
  }

  template <class F>
  static std::string outcome(F&& f) {
    try {
      return "[" + join(f()) + "]";
    } catch (const RuntimeError& e) {
      return std::string("error: ") + e.what();
    } catch (const StuckTerm& e) {
      return std::string("stuck: ") + e.what();
    } catch (const FuelExceeded& e) {
      return std::string("error: ") + e.what();
    }
  }

  template <class T>
  static std::string join(const std::vector<T>& xs) {
    std::ostringstream s;
    for (std::size_t i = 0; i < xs.size(); ++i) s << (i ? ", " : "") << xs[i];
    return s.str();
  }

  // Next tuple in lexicographic order over 0..max.
  bool advance(std::vector<std::uint64_t>& in) const {
    for (std::size_t i = in.size(); i-- > 0;) {
      if (in[i] < cfg_.max) {
        ++in[i];
        return true;
      }
      in[i] = 0;
    }
    return false;
  }

  const Config& cfg_;
  std::ostream& out_;
  std::ostream& err_;
  Program prog_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Type checker, verifier and interpreter for Loop programs", "loopw"};
  app.set_version_flag("--version", std::string("loopw ") + kVersion);
  app.require_subcommand(1);

  Config cfg;
  auto file = [&](CLI::App* sub) {
    sub->add_option("file", cfg.file, "program source (.loopw)")->required();
  };
  auto checking = [&](CLI::App* sub) {
    sub->add_flag("--strict", cfg.strict, "treat unproven obligations as errors");
    sub->add_option("--bound", cfg.bound, "ceiling for bounded testing")->check(CLI::Range(1, 1 << 20));
    sub->add_option("--step-cap", cfg.step_cap, "rewriting step cap")
        ->check(CLI::Range(std::size_t{1}, std::size_t{100'000'000}));
    sub->add_flag("--no-discharge", cfg.no_discharge, "skip obligation discharge");
  };

  auto* check = app.add_subcommand("check", "type-check and discharge obligations");
  file(check);
  checking(check);
  check->add_option("--emit-smt", cfg.emit_smt, "write obligations as SMT-LIB2 files into DIR");
  check->add_flag("--tsv", cfg.tsv, "tab-separated diagnostics");

  auto* vcs = app.add_subcommand("vcs", "print the obligation table");
  file(vcs);
  checking(vcs);
  vcs->add_option("--emit-smt", cfg.emit_smt, "write obligations as SMT-LIB2 files into DIR");

  auto* runc = app.add_subcommand("run", "execute the entry procedure");
  file(runc);
  checking(runc);
  runc->add_option("inputs", cfg.inputs, "entry inputs");

  auto* trans = app.add_subcommand("translate", "print the functional translation");
  file(trans);
  checking(trans);

  auto* cmp = app.add_subcommand("compare", "differential test of interpreter and translation");
  file(cmp);
  checking(cmp);
  cmp->add_option("--max", cfg.max, "largest input component")->check(CLI::Range(0, 1000));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Driver d(cfg, out, err);
  try {
    if (*check) return d.check(false);
    if (*vcs) return d.check(true);
    if (*runc) return d.run_cmd();
    if (*trans) return d.translate_cmd();
    if (*cmp) return d.compare();
  } catch (const Exit& e) {
    return e.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace loopw
