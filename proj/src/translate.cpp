#include "loopw/translate.hpp"

#include <functional>
#include <map>
#include <set>
#include <span>

namespace loopw {

namespace {

using C = CoreTerm;
using Cont = std::function<CoreRef(CoreRef)>;

CoreRef apply_all(CoreRef f, const std::vector<CoreRef>& args) {
  for (const auto& a : args) f = C::app(std::move(f), a);
  return f;
}

CoreRef lambdas(const std::vector<std::string>& params, CoreRef body) {
  for (auto it = params.rbegin(); it != params.rend(); ++it) body = C::lam(*it, std::move(body));
  return body;
}

// ---------------------------------------------------------------------------
// E-functions

class FunctionCompiler {
 public:
  FunctionCompiler(const Program& p, std::string f, int& counter)
      : prog_(p), f_(std::move(f)), counter_(counter) {
    for (const auto& eq : p.equations)
      if (eq.lhs.kind == IndexTerm::Kind::App && eq.lhs.name == f_) eqs_.push_back(&eq);
    arity_ = p.arity_of(f_);
  }

  CoreRef compile() {
    if (arity_ < 0) fail("is not declared");
    if (eqs_.empty()) fail("has no defining equations");

    // A single equation with only variable arguments defines f directly.
    for (const Equation* eq : eqs_) {
      if (!all_vars(*eq, -1)) continue;
      std::vector<std::string> params;
      std::map<std::string, CoreRef> env;
      for (const auto& a : eq->lhs.args) {
        params.push_back(gen("a"));
        env[a.name] = C::var(params.back());
      }
      return lambdas(params, rhs(eq->rhs, env, nullptr, {}));
    }

    for (int pos = 0; pos < arity_; ++pos) {
      const Equation* base = nullptr;
      const Equation* step = nullptr;
      for (const Equation* eq : eqs_) {
        const IndexTerm& a = eq->lhs.args[pos];
        if (!base && a.kind == IndexTerm::Kind::Zero && all_vars(*eq, pos)) base = eq;
        if (!step && a.kind == IndexTerm::Kind::Succ && a.args[0].kind == IndexTerm::Kind::Var &&
            all_vars(*eq, pos))
          step = eq;
      }
      if (base && step) return recursion(pos, *base, *step);
    }
    fail("is not primitive recursive in one argument");
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw TranslateError(TranslateError::Kind::UntranslatableEquation,
                         "cannot translate E-function `" + f_ + "`: it " + why);
  }

  std::string gen(const char* base) { return "%" + std::string(base) + std::to_string(++counter_); }

  // Every argument except `skip` is a variable, and they are pairwise distinct.
  static bool all_vars(const Equation& eq, int skip) {
    std::set<std::string> seen;
    for (int i = 0; i < static_cast<int>(eq.lhs.args.size()); ++i) {
      if (i == skip) continue;
      const IndexTerm& a = eq.lhs.args[i];
      if (a.kind != IndexTerm::Kind::Var || !seen.insert(a.name).second) return false;
    }
    return true;
  }

  // `self` is the core term for f at the predecessor; `pred` is the name of
  // the pattern variable it stands for. Both are absent in base cases.
  CoreRef rhs(const IndexTerm& t, const std::map<std::string, CoreRef>& env, const CoreRef& self,
              const std::pair<int, std::string>& pred) {
    switch (t.kind) {
      case IndexTerm::Kind::Var: {
        auto it = env.find(t.name);
        if (it == env.end()) fail("uses `" + t.name + "` outside its left-hand side");
        return it->second;
      }
      case IndexTerm::Kind::Zero:
        return C::zero();
      case IndexTerm::Kind::Succ:
        return C::succ(rhs(t.args[0], env, self, pred));
      case IndexTerm::Kind::App:
        break;
    }
    std::vector<CoreRef> args;
    if (t.name == f_) {
      if (!self) fail("calls itself outside a successor case");
      const IndexTerm& at = t.args[pred.first];
      if (at.kind != IndexTerm::Kind::Var || at.name != pred.second)
        fail("recurses on something other than the predecessor");
      for (int i = 0; i < static_cast<int>(t.args.size()); ++i)
        if (i != pred.first) args.push_back(rhs(t.args[i], env, self, pred));
      return apply_all(self, args);
    }
    for (const auto& a : t.args) args.push_back(rhs(a, env, self, pred));
    return apply_all(C::var("fn:" + t.name), args);
  }

  // fn = λa̅. proj 1 (natiter a_pos (0, G0) (λst. (s(proj 0 st), G'))) a̅\pos
  // where G ranges over functions of the remaining arguments.
  CoreRef recursion(int pos, const Equation& base, const Equation& step) {
    std::vector<std::string> params;
    for (int i = 0; i < arity_; ++i) params.push_back(gen("a"));

    auto others = [&](const Equation& eq, std::map<std::string, CoreRef>& env) {
      std::vector<std::string> names;
      for (int i = 0; i < arity_; ++i) {
        if (i == pos) continue;
        names.push_back(gen("o"));
        env[eq.lhs.args[i].name] = C::var(names.back());
      }
      return names;
    };

    std::map<std::string, CoreRef> env0;
    auto names0 = others(base, env0);
    CoreRef g0 = lambdas(names0, rhs(base.rhs, env0, nullptr, {}));

    std::string st = gen("st");
    std::map<std::string, CoreRef> env1;
    auto names1 = others(step, env1);
    const std::string& x = step.lhs.args[pos].args[0].name;
    env1[x] = C::proj(C::var(st), 0);
    CoreRef g1 = lambdas(names1, rhs(step.rhs, env1, C::proj(C::var(st), 1), {pos, x}));
    CoreRef stepf = C::lam(st, C::tuple({C::succ(C::proj(C::var(st), 0)), g1}));

    CoreRef iter = C::proj(C::nat_iter(C::var(params[pos]), C::tuple({C::zero(), g0}), stepf), 1);
    std::vector<CoreRef> rest;
    for (int i = 0; i < arity_; ++i)
      if (i != pos) rest.push_back(C::var(params[i]));
    return lambdas(params, apply_all(iter, rest));
  }

  const Program& prog_;
  std::string f_;
  int& counter_;
  std::vector<const Equation*> eqs_;
  int arity_ = -1;
};

// Rejects E-functions that call each other in a cycle; the core would not
// terminate on them.
void check_acyclic(const Program& p) {
  std::map<std::string, std::set<std::string>> deps;
  std::function<void(const std::string&, const IndexTerm&)> collect = [&](const std::string& f,
                                                                         const IndexTerm& t) {
    if (t.kind == IndexTerm::Kind::App && t.name != f) deps[f].insert(t.name);
    for (const auto& a : t.args) collect(f, a);
  };
  for (const auto& eq : p.equations)
    if (eq.lhs.kind == IndexTerm::Kind::App) collect(eq.lhs.name, eq.rhs);

  std::map<std::string, int> mark;  // 1 visiting, 2 done
  std::function<void(const std::string&)> visit = [&](const std::string& f) {
    if (mark[f] == 2) return;
    if (mark[f] == 1)
      throw TranslateError(TranslateError::Kind::UntranslatableEquation,
                           "cannot translate E-function `" + f + "`: mutual recursion");
    mark[f] = 1;
    for (const auto& g : deps[f]) visit(g);
    mark[f] = 2;
  };
  for (const auto& s : p.signature) visit(s.name);
}

// ---------------------------------------------------------------------------
// Procedures

class Translator {
 public:
  explicit Translator(int& counter) : counter_(counter) {}

  CoreRef proc(const ProcLit& p) {
    Frame fr;
    for (const auto& x : p.ins) fr.slots.emplace(x.name, fr.slots.size());
    for (const auto& x : p.outs) fr.slots.emplace(x.name, fr.slots.size());
    fr.size = fr.slots.size();

    std::string pv = gen("p"), args = gen("args"), ret = gen("ret"), s0 = gen("s");
    std::vector<CoreRef> init;
    for (std::size_t i = 0; i < p.ins.size(); ++i) init.push_back(C::proj(C::var(args), i));
    for (std::size_t i = 0; i < p.outs.size(); ++i) init.push_back(C::zero());

    const std::size_t nin = p.ins.size(), nout = p.outs.size();
    Cont finish = [ret, nin, nout](CoreRef s) {
      std::vector<CoreRef> outs;
      for (std::size_t j = 0; j < nout; ++j) outs.push_back(C::proj(s, nin + j));
      return C::app(C::var(ret), C::tuple(std::move(outs)));
    };
    CoreRef body = seq(fr, p.body, C::var(s0), finish);
    return C::lam(pv, C::let(args, C::proj(C::var(pv), 0),
                             C::let(ret, C::proj(C::var(pv), 1),
                                    C::let(s0, C::tuple(std::move(init)), body))));
  }

 private:
  struct Frame {
    std::map<std::string, std::size_t> slots;
    std::size_t size = 0;
  };

  std::string gen(const char* base) { return "%" + std::string(base) + std::to_string(++counter_); }

  CoreRef expr(const Frame& fr, const CoreRef& st, const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Var: {
        auto it = fr.slots.find(e.name);
        if (it != fr.slots.end()) return C::proj(st, it->second);
        return C::var(e.name);
      }
      case Expr::Kind::LabelRef:
        return C::var(e.name);
      case Expr::Kind::Zero:
        return C::zero();
      case Expr::Kind::Succ:
        return C::succ(expr(fr, st, e.args[0]));
      case Expr::Kind::Pack: {
        std::vector<CoreRef> comps;
        for (const auto& a : e.args) comps.push_back(expr(fr, st, a));
        return C::pack(std::move(comps));
      }
      case Expr::Kind::ProcLit:
        return proc(*e.proc);
      case Expr::Kind::Impure:
        break;
    }
    throw TranslateError(TranslateError::Kind::Unsupported, "impure expression");
  }

  // The state tuple with some slots replaced.
  CoreRef update(const Frame& fr, const CoreRef& st,
                 const std::map<std::size_t, CoreRef>& changes) {
    std::vector<CoreRef> items;
    for (std::size_t i = 0; i < fr.size; ++i) {
      auto it = changes.find(i);
      items.push_back(it == changes.end() ? C::proj(st, i) : it->second);
    }
    return C::tuple(std::move(items));
  }

  CoreRef bind_state(CoreRef value, const Cont& k) {
    std::string s = gen("s");
    return C::let(s, std::move(value), k(C::var(s)));
  }

  CoreRef reify(const Cont& k) {
    std::string s = gen("s");
    return C::lam(s, k(C::var(s)));
  }

  CoreRef seq(const Frame& fr, std::span<const Stmt> stmts, CoreRef st, Cont k) {
    if (stmts.empty()) return k(std::move(st));
    auto rest = stmts.subspan(1);
    return stmt(fr, stmts.front(), std::move(st),
                [this, &fr, rest, k](CoreRef next) { return seq(fr, rest, std::move(next), k); });
  }

  CoreRef stmt(const Frame& fr, const Stmt& s, CoreRef st, const Cont& k) {
    switch (s.kind) {
      case Stmt::Kind::Skip:
      case Stmt::Kind::Claim:
        return k(st);

      case Stmt::Kind::Assign:
        return bind_state(update(fr, st, {{fr.slots.at(s.name), expr(fr, st, s.expr)}}), k);

      case Stmt::Kind::Call: {
        std::string r = gen("r");
        std::map<std::size_t, CoreRef> outs;
        for (std::size_t j = 0; j < s.names.size(); ++j)
          outs[fr.slots.at(s.names[j])] = C::proj(C::var(r), j);
        CoreRef ret = C::lam(r, bind_state(update(fr, st, outs), k));
        std::vector<CoreRef> ins;
        for (const auto& a : s.args) ins.push_back(expr(fr, st, a));
        return C::app(expr(fr, st, s.expr), C::tuple({C::tuple(std::move(ins)), ret}));
      }

      case Stmt::Kind::For: {
        // R_n c s k runs the last n iterations starting at counter c.
        std::string c0 = gen("c"), s0 = gen("s"), k0 = gen("k");
        CoreRef r0 = C::lam(c0, C::lam(s0, C::lam(k0, C::app(C::var(k0), C::var(s0)))));
        std::string rr = gen("R"), c = gen("c"), sv = gen("s"), kv = gen("k");
        Cont next = [rr, c, kv](CoreRef s2) {
          return C::app(C::app(C::app(C::var(rr), C::succ(C::var(c))), std::move(s2)), C::var(kv));
        };
        CoreRef body = C::let(s.name, C::var(c), seq(fr, s.body, C::var(sv), next));
        CoreRef stepf = C::lam(rr, C::lam(c, C::lam(sv, C::lam(kv, body))));
        CoreRef loop = C::nat_iter(expr(fr, st, s.expr), r0, stepf);
        return C::app(C::app(C::app(loop, C::zero()), st), reify(k));
      }

      case Stmt::Kind::LabelBlock: {
        std::string kk = gen("kk"), p = gen("payload");
        Cont resume = [kk](CoreRef s2) { return C::app(C::var(kk), std::move(s2)); };
        std::map<std::size_t, CoreRef> fp;
        for (std::size_t j = 0; j < s.footprint.size(); ++j)
          fp[fr.slots.at(s.footprint[j].name)] = C::proj(C::var(p), j);
        CoreRef label = C::lam(p, bind_state(update(fr, st, fp), resume));
        return C::let(kk, reify(k), C::let(s.name, label, seq(fr, s.body, st, resume)));
      }

      case Stmt::Kind::Jump: {
        std::vector<CoreRef> args;
        for (const auto& a : s.args) args.push_back(expr(fr, st, a));
        return C::app(expr(fr, st, s.expr), C::tuple(std::move(args)));
      }

      case Stmt::Kind::Unpack: {
        std::string t = gen("t");
        CoreRef body = k(st);
        for (std::size_t j = s.names.size(); j-- > 0;)
          body = C::let(s.names[j], C::proj(C::var(t), j), body);
        return C::let(t, expr(fr, st, s.expr), body);
      }
    }
    return k(st);
  }

  int& counter_;
};

}  // namespace

CoreRef translate_function(const Program& p, const std::string& fsym) {
  int counter = 0;
  return FunctionCompiler(p, fsym, counter).compile();
}

TranslationUnit translate(const Program& p) {
  check_acyclic(p);
  TranslationUnit u;
  int counter = 0;
  for (const auto& f : p.signature)
    u.defines.emplace_back("fn:" + f.name, FunctionCompiler(p, f.name, counter).compile());
  Translator tr(counter);
  for (const auto& d : p.procs) u.defines.emplace_back(d.name, tr.proc(d.proc));
  const ProcDecl& entry = p.entry_proc();
  u.entry = entry.name;
  u.entry_ins = entry.proc.ins.size();
  u.entry_outs = entry.proc.outs.size();
  return u;
}

CoreRef build_entry_application(const TranslationUnit& u,
                                const std::vector<std::uint64_t>& inputs) {
  if (inputs.size() != u.entry_ins)
    throw std::invalid_argument("`" + u.entry + "` takes " + std::to_string(u.entry_ins) +
                                " input(s), got " + std::to_string(inputs.size()));
  std::vector<CoreRef> ins;
  for (auto n : inputs) ins.push_back(C::numeral(n));
  return C::app(C::var(u.entry), C::tuple({C::tuple(std::move(ins)), C::lam("%r", C::var("%r"))}));
}

Globals load_unit(const TranslationUnit& u, const EvalOptions& opts) {
  Globals g;
  for (const auto& [name, term] : u.defines) g.emplace_back(name, eval_core(term, g, opts));
  return g;
}

std::vector<std::string> run_core(const TranslationUnit& u, const std::vector<std::uint64_t>& inputs,
                                  const EvalOptions& opts) {
  Globals g = load_unit(u, opts);
  ValueRef v = eval_core(build_entry_application(u, inputs), g, opts);
  if (v->kind != CoreValue::Kind::Tuple) throw StuckTerm("entry did not return an out tuple");
  std::vector<std::string> out;
  for (const auto& item : v->items) out.push_back(render(*item));
  return out;
}

std::string print_unit(const TranslationUnit& u) {
  std::string out;
  for (const auto& [name, term] : u.defines) out += "(define " + name + " " + to_sexpr(term) + ")\n";
  return out + "(entry " + u.entry + ")\n";
}

}  // namespace loopw
