#include "loopw/core.hpp"

#include <unordered_map>

namespace loopw {

namespace {

CoreRef make(CoreTerm t) { return std::make_shared<const CoreTerm>(std::move(t)); }

}  // namespace

CoreTerm::~CoreTerm() {
  std::vector<CoreRef> pending = std::move(kids);
  while (!pending.empty()) {
    CoreRef t = std::move(pending.back());
    pending.pop_back();
    if (t.use_count() != 1) continue;
    auto& inner = const_cast<CoreTerm&>(*t).kids;
    for (auto& k : inner) pending.push_back(std::move(k));
    inner.clear();
  }
}

CoreRef CoreTerm::var(std::string n) { return make({Kind::Var, std::move(n), 0, {}}); }
CoreRef CoreTerm::lam(std::string x, CoreRef body) {
  return make({Kind::Lam, std::move(x), 0, {std::move(body)}});
}
CoreRef CoreTerm::app(CoreRef f, CoreRef a) {
  return make({Kind::App, {}, 0, {std::move(f), std::move(a)}});
}
CoreRef CoreTerm::zero() { return make({Kind::Zero, {}, 0, {}}); }
CoreRef CoreTerm::succ(CoreRef t) { return make({Kind::Succ, {}, 0, {std::move(t)}}); }
CoreRef CoreTerm::nat_iter(CoreRef bound, CoreRef base, CoreRef step) {
  return make({Kind::NatIter, {}, 0, {std::move(bound), std::move(base), std::move(step)}});
}
CoreRef CoreTerm::tuple(std::vector<CoreRef> items) {
  return make({Kind::Tuple, {}, 0, std::move(items)});
}
CoreRef CoreTerm::proj(CoreRef t, std::size_t k) { return make({Kind::Proj, {}, k, {std::move(t)}}); }
CoreRef CoreTerm::pack(std::vector<CoreRef> items) {
  return make({Kind::Pack, {}, 0, std::move(items)});
}
CoreRef CoreTerm::numeral(std::uint64_t n) {
  CoreRef t = zero();
  while (n-- > 0) t = succ(std::move(t));
  return t;
}
CoreRef CoreTerm::let(std::string x, CoreRef v, CoreRef body) {
  return app(lam(std::move(x), std::move(body)), std::move(v));
}

namespace {

void sexpr(const CoreTerm& t, std::string& out) {
  auto list = [&](const char* head) {
    out += "(";
    out += head;
    for (const auto& k : t.kids) {
      out += " ";
      sexpr(*k, out);
    }
    out += ")";
  };
  switch (t.kind) {
    case CoreTerm::Kind::Var:
      out += t.name;
      return;
    case CoreTerm::Kind::Lam:
      out += "(lambda " + t.name + " ";
      sexpr(*t.kids[0], out);
      out += ")";
      return;
    case CoreTerm::Kind::App:
      out += "(";
      sexpr(*t.kids[0], out);
      out += " ";
      sexpr(*t.kids[1], out);
      out += ")";
      return;
    case CoreTerm::Kind::Zero:
      out += "0";
      return;
    case CoreTerm::Kind::Succ:
      list("succ");
      return;
    case CoreTerm::Kind::NatIter:
      list("natiter");
      return;
    case CoreTerm::Kind::Tuple:
      list("tuple");
      return;
    case CoreTerm::Kind::Pack:
      list("pack");
      return;
    case CoreTerm::Kind::Proj:
      out += "(proj " + std::to_string(t.index) + " ";
      sexpr(*t.kids[0], out);
      out += ")";
      return;
  }
}

}  // namespace

std::string to_sexpr(const CoreRef& t) {
  std::string out;
  sexpr(*t, out);
  return out;
}

std::size_t core_size(const CoreRef& t) {
  std::size_t n = 1;
  for (const auto& k : t->kids) n += core_size(k);
  return n;
}

ValueRef CoreValue::numeral(std::uint64_t n) {
  auto v = std::make_shared<CoreValue>();
  v->n = n;
  return v;
}

std::string render(const CoreValue& v) {
  switch (v.kind) {
    case CoreValue::Kind::Numeral:
      return std::to_string(v.n);
    case CoreValue::Kind::Closure:
      return "<proc>";
    case CoreValue::Kind::Tuple:
    case CoreValue::Kind::Pack: {
      std::string out = v.kind == CoreValue::Kind::Pack ? "pack(" : "(";
      for (std::size_t i = 0; i < v.items.size(); ++i) {
        if (i) out += ", ";
        out += render(*v.items[i]);
      }
      return out + ")";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// CEK machine

namespace {

struct Frame {
  enum class Kind { AppArg, AppCall, Succ, IterBound, IterBase, IterStep, IterLoop, Items, Proj };

  Kind kind;
  const CoreTerm* term = nullptr;  // the node this frame belongs to
  EnvRef env;
  ValueRef a, b;                   // AppCall: function; Iter*: base / step
  std::uint64_t count = 0;         // Iter*: remaining iterations
  std::vector<ValueRef> items;     // Items
};

class Machine {
 public:
  Machine(const Globals& globals, const EvalOptions& opts) : fuel_(opts.fuel) {
    for (const auto& [name, v] : globals) globals_[name] = v;
  }

  ValueRef run(const CoreRef& root) {
    const CoreTerm* control = root.get();
    EnvRef env;
    ValueRef value;
    bool returning = false;

    for (;;) {
      if (fuel_-- == 0) throw FuelExceeded("core evaluation ran out of fuel");
      if (!returning) {
        const CoreTerm& t = *control;
        switch (t.kind) {
          case CoreTerm::Kind::Var:
            value = lookup(env, t.name);
            returning = true;
            break;
          case CoreTerm::Kind::Lam: {
            auto c = std::make_shared<CoreValue>();
            c->kind = CoreValue::Kind::Closure;
            c->param = t.name;
            c->body = t.kids[0];
            c->env = env;
            value = std::move(c);
            returning = true;
            break;
          }
          case CoreTerm::Kind::Zero:
            value = zero_;
            returning = true;
            break;
          case CoreTerm::Kind::App:
            stack_.push_back({Frame::Kind::AppArg, &t, env, {}, {}, 0, {}});
            control = t.kids[0].get();
            break;
          case CoreTerm::Kind::Succ:
            stack_.push_back({Frame::Kind::Succ, &t, nullptr, {}, {}, 0, {}});
            control = t.kids[0].get();
            break;
          case CoreTerm::Kind::NatIter:
            stack_.push_back({Frame::Kind::IterBound, &t, env, {}, {}, 0, {}});
            control = t.kids[0].get();
            break;
          case CoreTerm::Kind::Proj:
            stack_.push_back({Frame::Kind::Proj, &t, nullptr, {}, {}, 0, {}});
            control = t.kids[0].get();
            break;
          case CoreTerm::Kind::Tuple:
          case CoreTerm::Kind::Pack:
            if (t.kids.empty()) {
              value = aggregate(t, {});
              returning = true;
            } else {
              stack_.push_back({Frame::Kind::Items, &t, env, {}, {}, 0, {}});
              control = t.kids[0].get();
            }
            break;
        }
        continue;
      }

      if (stack_.empty()) return value;
      Frame& f = stack_.back();
      switch (f.kind) {
        case Frame::Kind::AppArg:
          f.kind = Frame::Kind::AppCall;
          f.a = value;
          control = f.term->kids[1].get();
          env = f.env;
          returning = false;
          break;
        case Frame::Kind::AppCall: {
          ValueRef fn = f.a;
          stack_.pop_back();
          enter(fn, value, control, env);
          returning = false;
          break;
        }
        case Frame::Kind::Succ:
          stack_.pop_back();
          value = CoreValue::numeral(numeral(value, "succ") + 1);
          break;
        case Frame::Kind::IterBound:
          f.count = numeral(value, "natiter bound");
          f.kind = Frame::Kind::IterBase;
          control = f.term->kids[1].get();
          env = f.env;
          returning = false;
          break;
        case Frame::Kind::IterBase:
          f.a = value;
          f.kind = Frame::Kind::IterStep;
          control = f.term->kids[2].get();
          env = f.env;
          returning = false;
          break;
        case Frame::Kind::IterStep: {
          f.b = value;
          ValueRef base = std::move(f.a);
          if (f.count == 0) {
            value = std::move(base);
            stack_.pop_back();
            break;
          }
          f.kind = Frame::Kind::IterLoop;
          enter(f.b, base, control, env);
          returning = false;
          break;
        }
        case Frame::Kind::IterLoop:
          if (--f.count == 0) {
            stack_.pop_back();
            break;
          }
          enter(f.b, value, control, env);
          returning = false;
          break;
        case Frame::Kind::Items:
          f.items.push_back(value);
          if (f.items.size() < f.term->kids.size()) {
            control = f.term->kids[f.items.size()].get();
            env = f.env;
            returning = false;
          } else {
            value = aggregate(*f.term, std::move(f.items));
            stack_.pop_back();
          }
          break;
        case Frame::Kind::Proj: {
          const CoreTerm* t = f.term;
          stack_.pop_back();
          if (value->kind != CoreValue::Kind::Tuple && value->kind != CoreValue::Kind::Pack)
            throw StuckTerm("projection from a non-tuple");
          if (t->index >= value->items.size()) throw StuckTerm("projection out of range");
          value = value->items[t->index];
          break;
        }
      }
    }
  }

 private:
  void enter(const ValueRef& fn, const ValueRef& arg, const CoreTerm*& control, EnvRef& env) {
    if (fn->kind != CoreValue::Kind::Closure) throw StuckTerm("application of a non-function");
    env = std::make_shared<const CoreEnv>(CoreEnv{fn->param, arg, fn->env});
    control = fn->body.get();
  }

  ValueRef lookup(const EnvRef& env, const std::string& name) const {
    for (const CoreEnv* e = env.get(); e; e = e->next.get())
      if (e->name == name) return e->value;
    auto it = globals_.find(name);
    if (it == globals_.end()) throw StuckTerm("unbound core variable `" + name + "`");
    return it->second;
  }

  static std::uint64_t numeral(const ValueRef& v, const char* where) {
    if (v->kind != CoreValue::Kind::Numeral)
      throw StuckTerm(std::string(where) + " expects a numeral");
    return v->n;
  }

  static ValueRef aggregate(const CoreTerm& t, std::vector<ValueRef> items) {
    auto v = std::make_shared<CoreValue>();
    v->kind = t.kind == CoreTerm::Kind::Pack ? CoreValue::Kind::Pack : CoreValue::Kind::Tuple;
    v->items = std::move(items);
    return v;
  }

  std::unordered_map<std::string, ValueRef> globals_;
  std::vector<Frame> stack_;
  std::uint64_t fuel_;
  ValueRef zero_ = CoreValue::numeral(0);
};

}  // namespace

ValueRef eval_core(const CoreRef& t, const Globals& globals, const EvalOptions& opts) {
  Machine m(globals, opts);
  return m.run(t);
}

}  // namespace loopw
