#include "loopw/interp.hpp"

#include <set>

#include "loopw/index_engine.hpp"
#include "loopw/terms.hpp"

namespace loopw {

std::string render(const RtValue& v) {
  switch (v.kind) {
    case RtValue::Kind::Numeral:
      return std::to_string(v.n);
    case RtValue::Kind::Proc:
      return "<proc>";
    case RtValue::Kind::Label:
      return "<label>";
    case RtValue::Kind::Pack: {
      std::string out = "pack(";
      for (std::size_t i = 0; i < v.items.size(); ++i) {
        if (i) out += ", ";
        out += render(*v.items[i]);
      }
      return out + ")";
    }
  }
  return {};
}

namespace {

struct JumpSignal {
  std::uint64_t tag;
  std::vector<RtRef> payload;
};

RtRef numeral(std::uint64_t n) {
  auto v = std::make_shared<RtValue>();
  v->n = n;
  return v;
}

struct Activation {
  std::string proc;
  Store store;
  std::map<std::string, RtRef> imm;
  Valuation index;
};

class Interp {
 public:
  Interp(const Program& p, const RunOptions& opts, std::vector<Snapshot>* trace)
      : prog_(p), eqs_(EqSystem::from(p)), fuel_(opts.fuel), trace_(trace) {
    for (const auto& d : p.procs) {
      auto v = std::make_shared<RtValue>();
      v->kind = RtValue::Kind::Proc;
      v->proc = &d.proc;
      v->captured = std::make_shared<const std::map<std::string, RtRef>>();
      v->captured_index = std::make_shared<const Valuation>();
      globals_[d.name] = v;
    }
  }

  std::vector<RtRef> run_entry(const std::vector<std::uint64_t>& inputs) {
    const ProcDecl& entry = prog_.entry_proc();
    const ProcLit& p = entry.proc;
    if (inputs.size() != p.ins.size())
      throw RuntimeError(RuntimeError::Kind::BadInput,
                         "`" + entry.name + "` takes " + std::to_string(p.ins.size()) +
                             " input(s), got " + std::to_string(inputs.size()));
    Valuation index;
    for (std::size_t i = 0; i < p.ins.size(); ++i) {
      const Ty& ty = p.ins[i].type;
      if (ty.kind == Ty::Kind::Nat && ty.terms[0].kind == IndexTerm::Kind::Var)
        index.emplace(ty.terms[0].name, inputs[i]);
    }
    std::vector<RtRef> args;
    for (auto n : inputs) args.push_back(numeral(n));
    return invoke(entry.name, p, {}, index, args);
  }

 private:
  std::vector<RtRef> invoke(const std::string& name, const ProcLit& p,
                            const std::map<std::string, RtRef>& captured, Valuation index,
                            const std::vector<RtRef>& args) {
    Activation act{name, {}, captured, std::move(index)};
    for (std::size_t i = 0; i < p.ins.size(); ++i) act.store[p.ins[i].name] = args[i];
    exec(act, p.body);
    std::vector<RtRef> outs;
    for (const auto& o : p.outs) outs.push_back(act.store.at(o.name));
    return outs;
  }

  std::optional<std::uint64_t> eval_index(const IndexTerm& t, const Valuation& val) const {
    Subst s;
    for (const auto& v : free_vars(t)) {
      auto it = val.find(v);
      if (it == val.end()) return std::nullopt;
      s[v] = IndexTerm::numeral(it->second);
    }
    auto r = normalize(substitute(t, s), eqs_);
    if (r.capped) return std::nullopt;
    return numeral_value(r.term);
  }

  RtRef eval(Activation& act, const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Zero:
        return zero_;
      case Expr::Kind::Succ: {
        RtRef inner = eval(act, e.args[0]);
        return numeral(inner->n + 1);
      }
      case Expr::Kind::Var:
      case Expr::Kind::LabelRef: {
        if (auto it = act.store.find(e.name); it != act.store.end()) return it->second;
        if (auto it = act.imm.find(e.name); it != act.imm.end()) return it->second;
        return globals_.at(e.name);
      }
      case Expr::Kind::Pack: {
        auto v = std::make_shared<RtValue>();
        v->kind = RtValue::Kind::Pack;
        for (const auto& a : e.args) v->items.push_back(eval(act, a));
        for (const auto& t : e.idx_args) v->witnesses.push_back(eval_index(t, act.index));
        return v;
      }
      case Expr::Kind::ProcLit: {
        auto v = std::make_shared<RtValue>();
        v->kind = RtValue::Kind::Proc;
        v->proc = e.proc.get();
        v->captured = std::make_shared<const std::map<std::string, RtRef>>(act.imm);
        v->captured_index = std::make_shared<const Valuation>(act.index);
        return v;
      }
      case Expr::Kind::Impure:
        break;
    }
    throw RuntimeError(RuntimeError::Kind::BadInput, "impure expression");
  }

  void exec(Activation& act, const Seq& seq) {
    for (const auto& s : seq) {
      if (fuel_-- == 0) throw RuntimeError(RuntimeError::Kind::FuelExceeded, "out of fuel");
      exec(act, s);
      if (trace_) trace_->push_back({s.span, &s, act.proc, act.store, act.index});
    }
  }

  void exec(Activation& act, const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Skip:
      case Stmt::Kind::Claim:
        return;
      case Stmt::Kind::Assign:
        act.store[s.name] = eval(act, s.expr);
        return;
      case Stmt::Kind::Call: {
        RtRef target = eval(act, s.expr);
        std::vector<RtRef> args;
        for (const auto& a : s.args) args.push_back(eval(act, a));
        const ProcLit& p = *target->proc;
        Valuation index = *target->captured_index;
        for (std::size_t j = 0; j < p.binders.size() && j < s.idx_args.size(); ++j) {
          index.erase(p.binders[j]);
          if (auto v = eval_index(s.idx_args[j], act.index)) index[p.binders[j]] = *v;
        }
        auto outs = invoke(act.proc, p, *target->captured, std::move(index), args);
        for (std::size_t j = 0; j < s.names.size(); ++j) act.store[s.names[j]] = outs[j];
        return;
      }
      case Stmt::Kind::For: {
        std::uint64_t n = eval(act, s.expr)->n;
        for (std::uint64_t c = 0; c < n; ++c) {
          act.imm[s.name] = numeral(c);
          act.index[s.inv_binder] = c;
          exec(act, s.body);
        }
        act.index.erase(s.inv_binder);
        return;
      }
      case Stmt::Kind::LabelBlock: {
        auto label = std::make_shared<RtValue>();
        label->kind = RtValue::Kind::Label;
        label->n = ++next_tag_;
        label->arity = s.footprint.size();
        act.imm[s.name] = label;
        live_.insert(label->n);
        try {
          exec(act, s.body);
        } catch (JumpSignal& j) {
          live_.erase(label->n);
          if (j.tag != label->n) throw;
          for (std::size_t i = 0; i < s.footprint.size(); ++i)
            act.store[s.footprint[i].name] = j.payload[i];
          return;
        }
        live_.erase(label->n);
        return;
      }
      case Stmt::Kind::Jump: {
        RtRef k = eval(act, s.expr);
        JumpSignal j{k->n, {}};
        for (const auto& a : s.args) j.payload.push_back(eval(act, a));
        if (!live_.count(j.tag))
          throw RuntimeError(RuntimeError::Kind::EscapedLabel,
                             "jump to label #" + std::to_string(j.tag) + " after its block exited");
        throw j;
      }
      case Stmt::Kind::Unpack: {
        RtRef v = eval(act, s.expr);
        for (std::size_t j = 0; j < s.names.size(); ++j) act.imm[s.names[j]] = v->items[j];
        for (std::size_t j = 0; j < s.idx_names.size(); ++j) {
          if (j < v->witnesses.size() && v->witnesses[j]) act.index[s.idx_names[j]] = *v->witnesses[j];
        }
        return;
      }
    }
  }

  const Program& prog_;
  EqSystem eqs_;
  std::uint64_t fuel_;
  std::vector<Snapshot>* trace_;
  std::map<std::string, RtRef> globals_;
  std::set<std::uint64_t> live_;
  std::uint64_t next_tag_ = 0;
  RtRef zero_ = numeral(0);
};

}  // namespace

std::vector<std::string> run(const Program& p, const std::vector<std::uint64_t>& inputs,
                             const RunOptions& opts) {
  Interp in(p, opts, nullptr);
  std::vector<std::string> out;
  for (const auto& v : in.run_entry(inputs)) out.push_back(render(*v));
  return out;
}

std::vector<Snapshot> trace(const Program& p, const std::vector<std::uint64_t>& inputs,
                            const RunOptions& opts) {
  std::vector<Snapshot> snaps;
  Interp in(p, opts, &snaps);
  in.run_entry(inputs);
  return snaps;
}

NatReport nat_soundness(const Program&, const CheckReport& report,
                        const std::vector<Snapshot>& snaps, const EqSystem& e) {
  NatReport out;
  for (const auto& snap : snaps) {
    auto it = report.after.find(snap.stmt);
    if (it == report.after.end()) continue;
    for (const auto& [name, ty] : it->second) {
      if (ty.kind != Ty::Kind::Nat) continue;
      auto v = snap.store.find(name);
      if (v == snap.store.end()) continue;
      Subst s;
      bool closed = true;
      for (const auto& x : free_vars(ty.terms[0])) {
        auto iv = snap.index.find(x);
        if (iv == snap.index.end()) {
          closed = false;
          break;
        }
        s[x] = IndexTerm::numeral(iv->second);
      }
      if (!closed) continue;
      auto nf = normalize(substitute(ty.terms[0], s), e);
      auto expected = numeral_value(nf.term);
      if (nf.capped || !expected) continue;
      ++out.checked;
      if (v->second->kind != RtValue::Kind::Numeral || v->second->n != *expected)
        out.violations.push_back({snap, name, ty.terms[0], *expected, render(*v->second)});
    }
  }
  return out;
}

}  // namespace loopw
