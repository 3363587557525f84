#include "rru/rule.hpp"

#include <unordered_map>

#include "rru/error.hpp"

namespace rru {

Atom apply(const Substitution& sub, const Atom& a) {
  if (a.is_call()) return Atom(apply(sub, a.call()));
  return Atom(apply(sub, a.builtin()));
}

Goal apply(const Substitution& sub, const Goal& g) {
  Goal out;
  out.reserve(g.size());
  for (const auto& a : g) out.push_back(apply(sub, a));
  return out;
}

void collect_vars(const Atom& a, std::vector<Var>& out,
                  std::unordered_set<VarId>& seen) {
  if (a.is_call())
    collect_vars(a.call(), out, seen);
  else
    collect_vars(a.builtin(), out, seen);
}

std::string to_string(const Atom& a) {
  return a.is_call() ? to_string(a.call()) : to_string(a.builtin());
}

std::vector<Var> vars_of(const Rule& r) {
  std::vector<Var> out;
  std::unordered_set<VarId> seen;
  collect_vars(r.head, out, seen);
  for (const auto& g : r.guard) collect_vars(g, out, seen);
  for (const auto& a : r.body) collect_vars(a, out, seen);
  return out;
}

std::unordered_set<VarId> head_var_ids(const Rule& r) { return var_ids(r.head); }

Rule apply(const Substitution& sub, const Rule& r) {
  Rule out;
  out.name = r.name;
  out.recursive = r.recursive;
  out.head = apply(sub, r.head);
  for (const auto& g : r.guard) out.guard.push_back(apply(sub, g));
  out.body = apply(sub, r.body);
  return out;
}

Rule rename_apart(const Rule& r, VarSupply& supply) {
  Substitution ren;
  for (const auto& v : vars_of(r)) ren.bind(v, Term::variable(supply.fresh_like(v)));
  return apply(ren, r);
}

void avoid(VarSupply& supply, const Rule& r) {
  for (const auto& v : vars_of(r)) supply.avoid(v.id);
}

// ---------------------------------------------------------------------------
// Variant check

namespace {

class Alpha {
 public:
  bool var(VarId a, VarId b) {
    auto f = fwd_.find(a);
    auto g = bwd_.find(b);
    if (f == fwd_.end() && g == bwd_.end()) {
      fwd_.emplace(a, b);
      bwd_.emplace(b, a);
      return true;
    }
    return f != fwd_.end() && g != bwd_.end() && f->second == b && g->second == a;
  }

  bool lin(const LinExpr& a, const LinExpr& b) {
    if (a.constant() != b.constant() || a.size() != b.size()) return false;
    std::vector<const LinExpr::Entry*> loose_a, loose_b;
    std::unordered_set<VarId> used_b;
    for (const auto& e : a.terms()) {
      auto f = fwd_.find(e.first.id);
      if (f == fwd_.end()) {
        loose_a.push_back(&e);
        continue;
      }
      if (b.coeff(f->second) != e.second) return false;
      used_b.insert(f->second);
    }
    for (const auto& e : b.terms()) {
      if (used_b.count(e.first.id)) continue;
      if (bwd_.count(e.first.id)) return false;
      loose_b.push_back(&e);
    }
    if (loose_a.size() != loose_b.size()) return false;
    // Pair remaining variables by coefficient; ambiguous pairings only
    // arise for equal coefficients, where any pairing is a valid choice.
    std::vector<bool> taken(loose_b.size(), false);
    for (const auto* ea : loose_a) {
      bool found = false;
      for (std::size_t j = 0; j < loose_b.size(); ++j) {
        if (taken[j] || loose_b[j]->second != ea->second) continue;
        taken[j] = true;
        found = var(ea->first.id, loose_b[j]->first.id);
        break;
      }
      if (!found) return false;
    }
    return true;
  }

  bool term(const Term& a, const Term& b) {
    if (a.is_arith() && b.is_arith()) {
      auto la = LinExpr::try_from_term(a);
      auto lb = LinExpr::try_from_term(b);
      if (la && lb) return lin(*la, *lb);
    }
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Term::Kind::Var:
        return var(a.var_id(), b.var_id());
      case Term::Kind::Int:
      case Term::Kind::Nil:
        return a == b;
      case Term::Kind::Compound:
        if (a.functor() != b.functor() || a.arity() != b.arity()) return false;
        for (std::size_t i = 0; i < a.arity(); ++i)
          if (!term(a.arg(i), b.arg(i))) return false;
        return true;
      case Term::Kind::Cons: {
        ListView va = list_view(a);
        ListView vb = list_view(b);
        if (va.elems.size() != vb.elems.size()) return false;
        for (std::size_t i = 0; i < va.elems.size(); ++i)
          if (!term(va.elems[i], vb.elems[i])) return false;
        return term(va.tail, vb.tail);
      }
    }
    return false;
  }

  bool builtin(const Builtin& a, const Builtin& b) {
    if (a.index() != b.index()) return false;
    if (const auto* x = std::get_if<TermEq>(&a)) {
      const auto& y = std::get<TermEq>(b);
      return term(x->lhs, y.lhs) && term(x->rhs, y.rhs);
    }
    if (std::holds_alternative<LinCmp>(a)) {
      auto fa = canonical(*linear_form(a));
      auto fb = canonical(*linear_form(b));
      if (fa.rel != fb.rel) return false;
      if (fa.rel == Rel::Eq || fa.rel == Rel::Ne) {
        Alpha save = *this;
        if (lin(fa.expr, fb.expr)) return true;
        *this = save;
        return lin(fa.expr, -fb.expr);
      }
      return lin(fa.expr, fb.expr);
    }
    if (const auto* x = std::get_if<ArithAssign>(&a)) {
      const auto& y = std::get<ArithAssign>(b);
      return var(x->target.id, y.target.id) && lin(x->expr, y.expr);
    }
    return true;
  }

  bool atom(const Atom& a, const Atom& b) {
    if (a.is_call() != b.is_call()) return false;
    if (a.is_call()) return term(a.call(), b.call());
    return builtin(a.builtin(), b.builtin());
  }

 private:
  // e rel 0 with rel in {Le, Eq, Ne}.
  static LinearForm canonical(LinearForm f) {
    switch (f.rel) {
      case Rel::Lt: return {Rel::Le, f.expr + LinExpr(1)};
      case Rel::Ge: return {Rel::Le, -f.expr};
      case Rel::Gt: return {Rel::Le, -f.expr + LinExpr(1)};
      default: return f;
    }
  }

  std::unordered_map<VarId, VarId> fwd_, bwd_;
};

}  // namespace

bool alpha_equivalent(const Rule& a, const Rule& b) {
  if (a.guard.size() != b.guard.size() || a.body.size() != b.body.size()) return false;
  Alpha m;
  if (!m.term(a.head, b.head)) return false;
  for (std::size_t i = 0; i < a.guard.size(); ++i)
    if (!m.builtin(a.guard[i], b.guard[i])) return false;
  for (std::size_t i = 0; i < a.body.size(); ++i)
    if (!m.atom(a.body[i], b.body[i])) return false;
  return true;
}

bool alpha_equivalent(const Program& a, const Program& b) {
  if (a.rules.size() != b.rules.size()) return false;
  for (std::size_t i = 0; i < a.rules.size(); ++i)
    if (!alpha_equivalent(a.rules[i], b.rules[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Recursion

std::string_view symbol_stem(std::string_view name) {
  std::size_t n = name.size();
  while (n > 0 && name[n - 1] >= '0' && name[n - 1] <= '9') --n;
  if (n == 0) return name;
  return name.substr(0, n);
}

bool is_fall_through(const Rule& r) {
  if (!r.guard.empty() || r.body.size() != 1 || !r.body[0].is_call()) return false;
  const Term& call = r.body[0].call();
  if (!r.head.is_compound() || !call.is_compound()) return false;
  if (call.arity() != r.head.arity()) return false;
  std::unordered_set<VarId> seen;
  for (std::size_t i = 0; i < call.arity(); ++i) {
    const Term& h = r.head.arg(i);
    if (!h.is_var() || !(h == call.arg(i))) return false;
    if (!seen.insert(h.var_id()).second) return false;
  }
  return true;
}

bool infer_recursive(const Rule& r) {
  if (!r.head.is_compound()) return false;
  const Symbol f = r.head.functor();
  const std::size_t n = r.head.arity();
  bool same_stem = false;
  for (const auto& a : r.body) {
    if (!a.is_call() || !a.call().is_compound()) continue;
    const Term& c = a.call();
    if (c.arity() != n) continue;
    if (c.functor() == f) return true;
    if (symbol_stem(c.functor().name()) == symbol_stem(f.name())) same_stem = true;
  }
  return same_stem && !is_fall_through(r);
}

// ---------------------------------------------------------------------------
// Program

std::vector<InterpretedDef> Program::default_interpreted() {
  return {
      {Symbol::intern("a"), 3, InterpretedKind::Append},
      {Symbol::intern("append"), 3, InterpretedKind::Append},
  };
}

const InterpretedDef* Program::interpreted_def(const Term& call) const {
  if (!call.is_compound()) return nullptr;
  for (const auto& d : interpreted)
    if (d.functor == call.functor() && d.arity == call.arity()) return &d;
  return nullptr;
}

void Program::infer_recursion() {
  for (auto& r : rules) r.recursive = infer_recursive(r);
}

const Rule* Program::find(std::string_view name) const {
  for (const auto& r : rules)
    if (r.name == name) return &r;
  return nullptr;
}

std::size_t Program::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < rules.size(); ++i)
    if (rules[i].name == name) return i;
  throw Error(ErrorKind::InvalidArgument, "no rule named " + std::string(name));
}

}  // namespace rru
