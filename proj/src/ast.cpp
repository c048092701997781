#include "loopw/ast.hpp"

#include <stdexcept>

namespace loopw {

IndexTerm IndexTerm::numeral(std::uint64_t n) {
  IndexTerm t = zero();
  for (std::uint64_t i = 0; i < n; ++i) t = succ(std::move(t));
  return t;
}

Expr Expr::var(std::string n, Span sp) {
  Expr e;
  e.kind = Kind::Var;
  e.name = std::move(n);
  e.span = sp;
  return e;
}

Expr Expr::zero(Span sp) {
  Expr e;
  e.span = sp;
  return e;
}

Expr Expr::succ(Expr inner, Span sp) {
  Expr e;
  e.kind = Kind::Succ;
  e.args = {std::move(inner)};
  e.span = sp;
  return e;
}

Expr Expr::pack(std::vector<IndexTerm> idx, std::vector<Expr> comps, Span sp) {
  Expr e;
  e.kind = Kind::Pack;
  e.idx_args = std::move(idx);
  e.args = std::move(comps);
  e.span = sp;
  return e;
}

Expr Expr::label_ref(std::string n, Span sp) {
  Expr e;
  e.kind = Kind::LabelRef;
  e.name = std::move(n);
  e.span = sp;
  return e;
}

Expr Expr::proc_lit(ProcLit p, Span sp) {
  Expr e;
  e.kind = Kind::ProcLit;
  e.proc = Box<ProcLit>(std::move(p));
  e.span = sp;
  return e;
}

Expr Expr::impure_stmt(Stmt s, Span sp) {
  Expr e;
  e.kind = Kind::Impure;
  e.impure = Box<Stmt>(std::move(s));
  e.span = sp;
  return e;
}

Ty ProcLit::type() const {
  std::vector<Ty> in_types;
  std::vector<Ty> out_types;
  for (const auto& p : ins) in_types.push_back(p.type);
  for (const auto& p : outs) out_types.push_back(p.type);
  return Ty::proc(binders, std::move(in_types), std::move(out_types), pre, post);
}

Stmt Stmt::skip(Span sp) {
  Stmt s;
  s.span = sp;
  return s;
}

Stmt Stmt::assign(std::string x, Expr e, Span sp) {
  Stmt s;
  s.kind = Kind::Assign;
  s.name = std::move(x);
  s.expr = std::move(e);
  s.span = sp;
  return s;
}

Stmt Stmt::call(Expr target, std::vector<IndexTerm> idx, std::vector<Expr> ins,
                std::vector<std::string> outs, Span sp) {
  Stmt s;
  s.kind = Kind::Call;
  s.expr = std::move(target);
  s.idx_args = std::move(idx);
  s.args = std::move(ins);
  s.names = std::move(outs);
  s.span = sp;
  return s;
}

Stmt Stmt::for_loop(std::string counter, Expr bound, std::string binder,
                    std::vector<Param> footprint, Seq body, Span sp) {
  Stmt s;
  s.kind = Kind::For;
  s.name = std::move(counter);
  s.expr = std::move(bound);
  s.inv_binder = std::move(binder);
  s.footprint = std::move(footprint);
  s.body = std::move(body);
  s.span = sp;
  return s;
}

Stmt Stmt::label_block(std::string k, std::vector<Param> footprint, Seq body, Span sp) {
  Stmt s;
  s.kind = Kind::LabelBlock;
  s.name = std::move(k);
  s.footprint = std::move(footprint);
  s.body = std::move(body);
  s.span = sp;
  return s;
}

Stmt Stmt::jump(Expr k, std::vector<Expr> args, Span sp) {
  Stmt s;
  s.kind = Kind::Jump;
  s.expr = std::move(k);
  s.args = std::move(args);
  s.span = sp;
  return s;
}

Stmt Stmt::claim_stmt(IndexFormula f, Span sp) {
  Stmt s;
  s.kind = Kind::Claim;
  s.claim = std::move(f);
  s.span = sp;
  return s;
}

Stmt Stmt::unpack(std::vector<std::string> idx, std::vector<std::string> vals, Expr e, Span sp) {
  Stmt s;
  s.kind = Kind::Unpack;
  s.idx_names = std::move(idx);
  s.names = std::move(vals);
  s.expr = std::move(e);
  s.span = sp;
  return s;
}

const ProcDecl* Program::find_proc(const std::string& name) const {
  for (const auto& p : procs)
    if (p.name == name) return &p;
  return nullptr;
}

const ProcDecl& Program::entry_proc() const {
  const ProcDecl* p = find_proc(entry);
  if (!p) throw std::logic_error("program has no entry procedure `" + entry + "`");
  return *p;
}

int Program::arity_of(const std::string& fsym) const {
  for (const auto& f : signature)
    if (f.name == fsym) return f.arity;
  return -1;
}

std::string default_entry(const std::vector<ProcDecl>& procs) {
  for (const auto& p : procs)
    if (p.name == "main") return p.name;
  return procs.empty() ? std::string{} : procs.back().name;
}

}  // namespace loopw
