#include "rru/store.hpp"

#include <algorithm>

#include "fourier_motzkin.hpp"
#include "rru/error.hpp"

namespace rru {

namespace {

// Sign-normalized so that the first coefficient is positive.
LinExpr orient(LinExpr e) {
  if (!e.terms().empty() && e.terms().front().second < 0) return -e;
  return e;
}

bool is_arith_side(const Term& t) { return t.is_int() || t.is_arith(); }

}  // namespace

ConstraintStore ConstraintStore::normalize(const std::vector<Builtin>& cs) {
  ConstraintStore s;
  s.tell_all(cs);
  return s;
}

// ---------------------------------------------------------------------------
// Lookup

Term ConstraintStore::walk(const Term& t) const {
  Term cur = t;
  while (cur.is_var()) {
    const VarId id = cur.var_id();
    if (auto b = bindings_.find(id); b != bindings_.end()) {
      cur = b->second.value;
      continue;
    }
    if (auto s = solved_.find(id); s != solved_.end() && s->second.def.is_constant())
      return Term::integer(s->second.def.constant());
    break;
  }
  return cur;
}

std::optional<Int> ConstraintStore::value_of(VarId v) const {
  Term w = walk(Term::variable(Var{v, nullptr}));
  if (w.is_int()) return w.int_value();
  return std::nullopt;
}

std::optional<LinExpr> ConstraintStore::resolve_lin(const LinExpr& e) const {
  bool ok = true;
  LinExpr out = e.substitute([&](const Var& v) -> std::optional<LinExpr> {
    if (!bindings_.count(v.id) && !solved_.count(v.id)) return std::nullopt;
    Term w = walk(Term::variable(v));
    if (w.is_int()) return LinExpr(w.int_value());
    if (w.is_var()) {
      if (auto s = solved_.find(w.var_id()); s != solved_.end()) return s->second.def;
      return LinExpr::variable(w.as_var());
    }
    ok = false;
    return LinExpr();
  });
  if (!ok) return std::nullopt;
  return out;
}

std::optional<LinExpr> ConstraintStore::as_linear(const Term& t) const {
  auto e = LinExpr::try_from_term(t);
  if (!e) return std::nullopt;
  return resolve_lin(*e);
}

Term ConstraintStore::resolve(const Term& t) const {
  Term w = walk(t);
  switch (w.kind()) {
    case Term::Kind::Var: {
      if (auto s = solved_.find(w.var_id()); s != solved_.end())
        return s->second.def.to_term();
      return w;
    }
    case Term::Kind::Int:
    case Term::Kind::Nil:
      return w;
    case Term::Kind::Compound: {
      if (w.ground()) return w;
      if (w.is_arith()) {
        if (auto e = as_linear(w)) return e->to_term();
      }
      std::vector<Term> args;
      args.reserve(w.arity());
      for (const auto& a : w.args()) args.push_back(resolve(a));
      return Term::compound(w.functor(), std::move(args));
    }
    case Term::Kind::Cons: {
      std::vector<Term> elems;
      Term cur = w;
      while (cur.is_cons()) {
        elems.push_back(resolve(cur.head()));
        cur = walk(cur.tail());
      }
      return Term::list(elems, resolve(cur));
    }
  }
  return w;
}

Int ConstraintStore::eval_ground(const LinExpr& e) const {
  auto r = resolve_lin(e);
  if (!r)
    throw Error(ErrorKind::Unbound,
                "arithmetic over a non-numeric value: " + rru::to_string(e));
  if (!r->is_constant())
    throw Error(ErrorKind::Unbound,
                "arithmetic expression is not ground: " + rru::to_string(e));
  return r->constant();
}

// ---------------------------------------------------------------------------
// Telling

void ConstraintStore::mark_linear(const LinExpr& e) {
  for (const auto& [v, _] : e.terms()) linear_vars_.insert(v.id);
}

void ConstraintStore::tell(const Builtin& b) {
  if (!consistent_) return;
  if (std::holds_alternative<TrueC>(b)) return;
  if (std::holds_alternative<FalseC>(b)) {
    fail();
    return;
  }
  if (const auto* eq = std::get_if<TermEq>(&b)) {
    tell_eq(eq->lhs, eq->rhs);
    return;
  }
  auto lf = linear_form(b);
  auto r = resolve_lin(lf->expr);
  if (!r) {
    fail();
    return;
  }
  LinExpr e = std::move(*r);
  switch (lf->rel) {
    case Rel::Eq: add_linear_eq(std::move(e)); break;
    case Rel::Ne: add_diseq(std::move(e)); break;
    case Rel::Le: add_ineq(std::move(e)); break;
    case Rel::Lt: add_ineq(e + LinExpr(1)); break;
    case Rel::Ge: add_ineq(-e); break;
    case Rel::Gt: add_ineq(-e + LinExpr(1)); break;
  }
}

void ConstraintStore::tell_eq(const Term& a, const Term& b) {
  std::vector<std::pair<Term, Term>> work;
  work.emplace_back(a, b);
  while (!work.empty() && consistent_) {
    auto [x0, y0] = std::move(work.back());
    work.pop_back();
    Term x = walk(x0);
    Term y = walk(y0);
    if (x == y) continue;
    const bool xa = is_arith_side(x) || (x.is_var() && is_linear(x.var_id()));
    const bool ya = is_arith_side(y) || (y.is_var() && is_linear(y.var_id()));
    if (xa || ya) {
      auto lx = as_linear(x);
      auto ly = as_linear(y);
      if (!lx || !ly) {
        fail();
        return;
      }
      add_linear_eq(*lx - *ly);
      continue;
    }
    if (x.is_var() && y.is_var()) {
      // Newer variable points at the older one.
      if (x.var_id() < y.var_id()) std::swap(x, y);
      bindings_.insert_or_assign(x.var_id(), Binding{x.as_var(), y});
      continue;
    }
    if (x.is_var()) {
      bindings_.insert_or_assign(x.var_id(), Binding{x.as_var(), y});
      continue;
    }
    if (y.is_var()) {
      bindings_.insert_or_assign(y.var_id(), Binding{y.as_var(), x});
      continue;
    }
    if (x.kind() != y.kind()) {
      fail();
      return;
    }
    if (x.is_cons()) {
      work.emplace_back(x.tail(), y.tail());
      work.emplace_back(x.head(), y.head());
      continue;
    }
    if (x.is_compound() && x.functor() == y.functor() && x.arity() == y.arity()) {
      for (std::size_t i = x.arity(); i-- > 0;) work.emplace_back(x.arg(i), y.arg(i));
      continue;
    }
    fail();
    return;
  }
}

void ConstraintStore::add_linear_eq(LinExpr e) {
  if (!consistent_) return;
  auto r = resolve_lin(e);
  if (!r) {
    fail();
    return;
  }
  e = std::move(*r);
  mark_linear(e);
  if (e.is_constant()) {
    if (e.constant() != 0) fail();
    return;
  }
  Int g = e.coeff_gcd();
  if (e.constant() % g != 0) {
    fail();
    return;
  }
  if (g > 1) {
    LinExpr d(e.constant() / g);
    for (const auto& [v, c] : e.terms()) d.add_term(v, c / g);
    e = std::move(d);
  }
  // Solve for the newest unit-coefficient variable.
  const LinExpr::Entry* unit = nullptr;
  for (const auto& entry : e.terms())
    if (entry.second == 1 || entry.second == -1) unit = &entry;
  if (!unit) {
    eqs_.push_back(orient(std::move(e)));
    check_residual();
    return;
  }
  const Var x = unit->first;
  const Int c = unit->second;
  LinExpr rest = e;
  rest.add_term(x, -c);
  solve_for(x, rest * Int(-c));
}

void ConstraintStore::solve_for(const Var& x, LinExpr def) {
  for (const auto& [v, _] : def.terms()) users_[v.id].push_back(x.id);
  solved_.insert_or_assign(x.id, Solved{x, def});

  if (auto it = users_.find(x.id); it != users_.end()) {
    std::vector<VarId> users = std::move(it->second);
    users_.erase(it);
    for (VarId u : users) {
      auto s = solved_.find(u);
      if (s == solved_.end() || !s->second.def.mentions(x.id)) continue;
      s->second.def = s->second.def.substitute(x.id, def);
      for (const auto& [v, _] : def.terms()) users_[v.id].push_back(u);
    }
  }

  auto extract = [&](std::vector<LinExpr>& from) {
    std::vector<LinExpr> hit;
    auto keep = std::partition(from.begin(), from.end(),
                               [&](const LinExpr& e) { return !e.mentions(x.id); });
    for (auto it = keep; it != from.end(); ++it) hit.push_back(it->substitute(x.id, def));
    from.erase(keep, from.end());
    return hit;
  };
  auto le = extract(ineqs_);
  auto eq = extract(eqs_);
  auto ne = extract(diseqs_);
  for (auto& e : eq) add_linear_eq(std::move(e));
  for (auto& e : le) add_ineq(std::move(e));
  for (auto& e : ne) add_diseq(std::move(e));
}

void ConstraintStore::add_ineq(LinExpr e) {
  if (!consistent_) return;
  if (auto r = resolve_lin(e)) e = std::move(*r);
  mark_linear(e);
  if (!detail::tighten_le(e)) {
    fail();
    return;
  }
  if (e.is_constant()) return;
  for (std::size_t i = 0; i < ineqs_.size(); ++i) {
    LinExpr& o = ineqs_[i];
    if (o.same_coeffs(e)) {
      if (e.constant() > o.constant()) {
        o = std::move(e);
        check_residual();
      }
      return;
    }
    if (o.same_coeffs(-e)) {
      const Int sum = o.constant() + e.constant();
      if (sum > 0) {
        fail();
        return;
      }
      if (sum == 0) {
        ineqs_.erase(ineqs_.begin() + static_cast<std::ptrdiff_t>(i));
        add_linear_eq(std::move(e));
        return;
      }
    }
  }
  ineqs_.push_back(std::move(e));
  check_residual();
}

void ConstraintStore::add_diseq(LinExpr e) {
  if (!consistent_) return;
  if (auto r = resolve_lin(e)) e = std::move(*r);
  mark_linear(e);
  if (e.is_constant()) {
    if (e.constant() == 0) fail();
    return;
  }
  Int g = e.coeff_gcd();
  if (e.constant() % g != 0) return;  // can never be zero
  if (g > 1) {
    LinExpr d(e.constant() / g);
    for (const auto& [v, c] : e.terms()) d.add_term(v, c / g);
    e = std::move(d);
  }
  e = orient(std::move(e));
  if (std::find(diseqs_.begin(), diseqs_.end(), e) != diseqs_.end()) return;
  diseqs_.push_back(std::move(e));
  check_residual();
}

void ConstraintStore::check_residual() {
  if (!consistent_) return;
  if (ineqs_.empty() && eqs_.empty() && diseqs_.empty()) return;
  if (!residual_satisfiable_with({}, {}, {})) fail();
}

bool ConstraintStore::residual_satisfiable_with(
    const std::vector<LinExpr>& le, const std::vector<LinExpr>& eq,
    const std::vector<LinExpr>& ne) const {
  detail::LinSystem sys;
  sys.le = ineqs_;
  sys.le.insert(sys.le.end(), le.begin(), le.end());
  sys.eq = eqs_;
  sys.eq.insert(sys.eq.end(), eq.begin(), eq.end());
  sys.ne = diseqs_;
  sys.ne.insert(sys.ne.end(), ne.begin(), ne.end());
  return detail::integer_satisfiable(sys);
}

// ---------------------------------------------------------------------------
// Entailment

bool ConstraintStore::entails_linear(Rel rel, const LinExpr& e) const {
  if (e.is_constant()) return rel_holds(rel, e.constant());
  const LinExpr one(1);
  switch (rel) {
    case Rel::Le: return !residual_satisfiable_with({-e + one}, {}, {});
    case Rel::Lt: return !residual_satisfiable_with({-e}, {}, {});
    case Rel::Ge: return !residual_satisfiable_with({e + one}, {}, {});
    case Rel::Gt: return !residual_satisfiable_with({e}, {}, {});
    case Rel::Eq:
      return !residual_satisfiable_with({e + one}, {}, {}) &&
             !residual_satisfiable_with({-e + one}, {}, {});
    case Rel::Ne: return !residual_satisfiable_with({}, {e}, {});
  }
  return false;
}

bool ConstraintStore::entails_eq(const Term& a, const Term& b) const {
  Term x = walk(a);
  Term y = walk(b);
  if (x == y) return true;
  const bool xa = is_arith_side(x) || (x.is_var() && is_linear(x.var_id()));
  const bool ya = is_arith_side(y) || (y.is_var() && is_linear(y.var_id()));
  if (xa || ya) {
    auto lx = as_linear(x);
    auto ly = as_linear(y);
    if (!lx || !ly) return false;
    return entails_linear(Rel::Eq, *lx - *ly);
  }
  if (x.is_var() || y.is_var() || x.kind() != y.kind()) return false;
  if (x.is_cons()) {
    while (x.is_cons() && y.is_cons()) {
      if (!entails_eq(x.head(), y.head())) return false;
      x = walk(x.tail());
      y = walk(y.tail());
    }
    return entails_eq(x, y);
  }
  if (!x.is_compound() || x.functor() != y.functor() || x.arity() != y.arity())
    return false;
  for (std::size_t i = 0; i < x.arity(); ++i)
    if (!entails_eq(x.arg(i), y.arg(i))) return false;
  return true;
}

bool ConstraintStore::entails(const Builtin& c) const {
  if (!consistent_) return true;
  if (std::holds_alternative<TrueC>(c)) return true;
  if (std::holds_alternative<FalseC>(c)) return false;
  if (const auto* eq = std::get_if<TermEq>(&c)) return entails_eq(eq->lhs, eq->rhs);
  auto lf = linear_form(c);
  auto r = resolve_lin(lf->expr);
  if (!r) return false;
  return entails_linear(lf->rel, *r);
}

bool ConstraintStore::entails_all(const std::vector<Builtin>& cs) const {
  for (const auto& c : cs)
    if (!entails(c)) return false;
  return true;
}

bool ConstraintStore::equivalent(const ConstraintStore& o) const {
  if (!consistent_ || !o.consistent_) return consistent_ == o.consistent_;
  return entails_all(o.constraints()) && o.entails_all(constraints());
}

// ---------------------------------------------------------------------------
// Inspection

std::vector<Builtin> ConstraintStore::constraints() const {
  std::vector<Builtin> out;
  if (!consistent_) {
    out.emplace_back(FalseC{});
    return out;
  }
  std::vector<VarId> ids;
  ids.reserve(bindings_.size());
  for (const auto& [id, _] : bindings_) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  for (VarId id : ids) {
    const auto& b = bindings_.at(id);
    out.emplace_back(TermEq{Term::variable(b.var), b.value});
  }
  ids.clear();
  for (const auto& [id, _] : solved_) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  for (VarId id : ids) {
    const auto& s = solved_.at(id);
    out.emplace_back(LinCmp{Rel::Eq, LinExpr::variable(s.var), s.def});
  }
  for (const auto& e : eqs_) out.emplace_back(LinCmp{Rel::Eq, e, LinExpr()});
  for (const auto& e : ineqs_) out.emplace_back(LinCmp{Rel::Le, e, LinExpr()});
  for (const auto& e : diseqs_) out.emplace_back(LinCmp{Rel::Ne, e, LinExpr()});
  return out;
}

bool ConstraintStore::empty() const {
  return consistent_ && bindings_.empty() && solved_.empty() && ineqs_.empty() &&
         eqs_.empty() && diseqs_.empty();
}

std::string ConstraintStore::to_string() const {
  auto cs = constraints();
  if (cs.empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i) out += ", ";
    out += rru::to_string(cs[i]);
  }
  return out;
}

std::vector<Builtin> diff(const std::vector<Builtin>& c2, const ConstraintStore& c3) {
  std::vector<Builtin> out;
  for (const auto& c : c2)
    if (!c3.entails(c)) out.push_back(c);
  return out;
}

}  // namespace rru
