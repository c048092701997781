#include "loopw/printer.hpp"

#include <sstream>

namespace loopw {

namespace {

template <class T, class F>
std::string join(const std::vector<T>& xs, F&& f, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += f(xs[i]);
  }
  return out;
}

std::string join_names(const std::vector<std::string>& xs) {
  return join(xs, [](const std::string& s) { return s; });
}

std::string formula_at(const IndexFormula& f, int level) {
  using K = IndexFormula::Kind;
  std::string s;
  int own = 2;
  switch (f.kind) {
    case K::Truth:
      return "true";
    case K::Eq:
      return to_string(f.terms[0]) + " = " + to_string(f.terms[1]);
    case K::Implies:
      s = formula_at(f.subs[0], 1) + " => " + formula_at(f.subs[1], 0);
      own = 0;
      break;
    case K::And:
      s = formula_at(f.subs[0], 1) + " && " + formula_at(f.subs[1], 2);
      own = 1;
      break;
    case K::Forall:
      s = "forall " + f.binder + ". " + formula_at(f.subs[0], 0);
      own = 0;
      break;
    case K::Or:
      return "(" + formula_at(f.subs[0], 2) + " || " + formula_at(f.subs[1], 2) + ")";
  }
  return level > own ? "(" + s + ")" : s;
}

std::string section(const char* keyword, const std::string& items) {
  return items.empty() ? std::string(keyword) : std::string(keyword) + " " + items;
}

std::string params(const std::vector<Param>& ps) {
  return join(ps, [](const Param& p) { return p.name + " : " + to_string(p.type); });
}

std::string binders(const std::vector<std::string>& bs) {
  return bs.empty() ? std::string{} : "[" + join_names(bs) + "]";
}

std::string contract(const IndexFormula& pre, const IndexFormula& post) {
  std::string out;
  if (pre.kind != IndexFormula::Kind::Truth) out += " pre " + to_string(pre);
  if (post.kind != IndexFormula::Kind::Truth) out += " post " + to_string(post);
  return out;
}

std::string block(const Seq& body, int indent) {
  if (body.empty()) return "{ }";
  std::string out = "{\n";
  for (const auto& s : body) out += to_string(s, indent + 2) + ";\n";
  out += std::string(indent, ' ') + "}";
  return out;
}

std::string proc_header(const ProcLit& p) {
  return binders(p.binders) + "(" + section("in", params(p.ins)) + "; " +
         section("out", params(p.outs)) + ")" + contract(p.pre, p.post);
}

std::string proc_literal(const ProcLit& p, int indent) {
  return "proc" + proc_header(p) + " " + block(p.body, indent);
}

std::string expr_at(const Expr& e, int indent) {
  switch (e.kind) {
    case Expr::Kind::Var:
    case Expr::Kind::LabelRef:
      return e.name;
    case Expr::Kind::Zero:
      return "0";
    case Expr::Kind::Succ:
      return "s(" + expr_at(e.args[0], indent) + ")";
    case Expr::Kind::Pack:
      return "pack[" + join(e.idx_args, [](const IndexTerm& t) { return to_string(t); }) + "](" +
             join(e.args, [&](const Expr& x) { return expr_at(x, indent); }) + ")";
    case Expr::Kind::ProcLit:
      return proc_literal(*e.proc, indent);
    case Expr::Kind::Impure:
      return to_string(*e.impure, 0);
  }
  return "?";
}

}  // namespace

std::string to_string(const IndexTerm& t) {
  switch (t.kind) {
    case IndexTerm::Kind::Var:
      return t.name;
    case IndexTerm::Kind::Zero:
      return "0";
    case IndexTerm::Kind::Succ:
      return "s(" + to_string(t.args[0]) + ")";
    case IndexTerm::Kind::App:
      return t.name + "(" + join(t.args, [](const IndexTerm& a) { return to_string(a); }) + ")";
  }
  return "?";
}

std::string to_string(const IndexFormula& f) { return formula_at(f, 0); }

std::string to_string(const Ty& ty) {
  auto types = [](const std::vector<Ty>& ts) {
    return join(ts, [](const Ty& t) { return to_string(t); });
  };
  switch (ty.kind) {
    case Ty::Kind::Nat:
      return "nat(" + to_string(ty.terms[0]) + ")";
    case Ty::Kind::Eq:
      return to_string(ty.terms[0]) + " = " + to_string(ty.terms[1]);
    case Ty::Kind::Proc:
      return "proc" + binders(ty.binders) + "(" + section("in", types(ty.ins)) + "; " +
             section("out", types(ty.outs)) + ")" + contract(ty.pre, ty.post);
    case Ty::Kind::Exists:
      return "exists[" + join_names(ty.binders) + "](" + types(ty.comps) + ")";
    case Ty::Kind::Label:
      return "~(" + types(ty.comps) + ")";
    case Ty::Kind::Undef:
      return "<unassigned>";
  }
  return "?";
}

std::string to_string(const Expr& e) { return expr_at(e, 0); }

std::string to_string(const Stmt& s, int indent) {
  std::string pad(indent, ' ');
  auto exprs = [&](const std::vector<Expr>& es) {
    return join(es, [&](const Expr& x) { return expr_at(x, indent); });
  };
  auto terms = [](const std::vector<IndexTerm>& ts) {
    return join(ts, [](const IndexTerm& t) { return to_string(t); });
  };
  switch (s.kind) {
    case Stmt::Kind::Skip:
      return pad + "skip";
    case Stmt::Kind::Assign:
      return pad + s.name + " := " + expr_at(s.expr, indent);
    case Stmt::Kind::Call:
      return pad + "call " + expr_at(s.expr, indent) + " [" + terms(s.idx_args) + "](" +
             exprs(s.args) + "; " + join_names(s.names) + ")";
    case Stmt::Kind::For:
      return pad + "for " + s.name + " := 0 until " + expr_at(s.expr, indent) + " invariant [" +
             s.inv_binder + "] (" + params(s.footprint) + ") " + block(s.body, indent);
    case Stmt::Kind::LabelBlock:
      return pad + "label " + s.name + " out (" + params(s.footprint) + ") " +
             block(s.body, indent);
    case Stmt::Kind::Jump:
      return pad + "jump " + expr_at(s.expr, indent) + " (" + exprs(s.args) + ")";
    case Stmt::Kind::Claim:
      return pad + "claim " + to_string(s.claim);
    case Stmt::Kind::Unpack:
      return pad + "unpack [" + join_names(s.idx_names) + "] (" + join_names(s.names) +
             ") := " + expr_at(s.expr, indent);
  }
  return pad + "?";
}

std::string print_program(const Program& p) {
  std::ostringstream out;
  for (const auto& f : p.signature) out << "sig " << f.name << "/" << f.arity << ";\n";
  for (const auto& e : p.equations)
    out << "eq " << to_string(e.lhs) << " = " << to_string(e.rhs) << ";\n";
  for (const auto& d : p.procs) {
    if (out.tellp() > 0) out << "\n";
    out << "proc " << d.name << proc_header(d.proc) << " " << block(d.proc.body, 0) << "\n";
  }
  return out.str();
}

}  // namespace loopw
