#include "rru/builtin.hpp"

namespace rru {

const char* rel_symbol(Rel r) {
  switch (r) {
    case Rel::Lt: return "<";
    case Rel::Le: return "=<";
    case Rel::Eq: return "=:=";
    case Rel::Ne: return "=\\=";
    case Rel::Ge: return ">=";
    case Rel::Gt: return ">";
  }
  return "?";
}

Rel negate(Rel r) {
  switch (r) {
    case Rel::Lt: return Rel::Ge;
    case Rel::Le: return Rel::Gt;
    case Rel::Eq: return Rel::Ne;
    case Rel::Ne: return Rel::Eq;
    case Rel::Ge: return Rel::Lt;
    case Rel::Gt: return Rel::Le;
  }
  return r;
}

Rel flip(Rel r) {
  switch (r) {
    case Rel::Lt: return Rel::Gt;
    case Rel::Le: return Rel::Ge;
    case Rel::Ge: return Rel::Le;
    case Rel::Gt: return Rel::Lt;
    default: return r;
  }
}

bool rel_holds(Rel r, const Int& d) {
  switch (r) {
    case Rel::Lt: return d < 0;
    case Rel::Le: return d <= 0;
    case Rel::Eq: return d == 0;
    case Rel::Ne: return d != 0;
    case Rel::Ge: return d >= 0;
    case Rel::Gt: return d > 0;
  }
  return false;
}

bool is_arith_term(const Term& t) { return t.is_int() || t.is_arith(); }

namespace {

std::optional<LinExpr> apply_lin(const Substitution& sub, const LinExpr& e) {
  bool ok = true;
  LinExpr out = e.substitute([&](const Var& v) -> std::optional<LinExpr> {
    const Term* t = sub.lookup(v.id);
    if (!t) return std::nullopt;
    auto r = LinExpr::try_from_term(*t);
    if (!r) {
      ok = false;
      return LinExpr();
    }
    return r;
  });
  if (!ok) return std::nullopt;
  return out;
}

}  // namespace

Builtin apply(const Substitution& sub, const Builtin& b) {
  if (sub.empty()) return b;
  return std::visit(
      [&](const auto& c) -> Builtin {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TermEq>) {
          return TermEq{apply(sub, c.lhs), apply(sub, c.rhs)};
        } else if constexpr (std::is_same_v<T, LinCmp>) {
          auto l = apply_lin(sub, c.lhs);
          auto r = apply_lin(sub, c.rhs);
          if (!l || !r) return FalseC{};
          return LinCmp{c.rel, std::move(*l), std::move(*r)};
        } else if constexpr (std::is_same_v<T, ArithAssign>) {
          auto e = apply_lin(sub, c.expr);
          if (!e) return FalseC{};
          const Term* t = sub.lookup(c.target.id);
          if (!t) return ArithAssign{c.target, std::move(*e)};
          if (t->is_var()) return ArithAssign{t->as_var(), std::move(*e)};
          auto lhs = LinExpr::try_from_term(*t);
          if (!lhs) return FalseC{};
          return LinCmp{Rel::Eq, std::move(*lhs), std::move(*e)};
        } else {
          return c;
        }
      },
      b);
}

void collect_vars(const Builtin& b, std::vector<Var>& out,
                  std::unordered_set<VarId>& seen) {
  auto lin = [&](const LinExpr& e) {
    for (const auto& [v, _] : e.terms())
      if (seen.insert(v.id).second) out.push_back(v);
  };
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TermEq>) {
          collect_vars(c.lhs, out, seen);
          collect_vars(c.rhs, out, seen);
        } else if constexpr (std::is_same_v<T, LinCmp>) {
          lin(c.lhs);
          lin(c.rhs);
        } else if constexpr (std::is_same_v<T, ArithAssign>) {
          if (seen.insert(c.target.id).second) out.push_back(c.target);
          lin(c.expr);
        }
      },
      b);
}

std::vector<Var> vars_of(const Builtin& b) {
  std::vector<Var> out;
  std::unordered_set<VarId> seen;
  collect_vars(b, out, seen);
  return out;
}

bool mentions(const Builtin& b, VarId v) {
  return std::visit(
      [&](const auto& c) -> bool {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TermEq>) {
          return occurs(v, c.lhs) || occurs(v, c.rhs);
        } else if constexpr (std::is_same_v<T, LinCmp>) {
          return c.lhs.mentions(v) || c.rhs.mentions(v);
        } else if constexpr (std::is_same_v<T, ArithAssign>) {
          return c.target.id == v || c.expr.mentions(v);
        } else {
          return false;
        }
      },
      b);
}

bool is_arithmetic(const Builtin& b) {
  if (std::holds_alternative<LinCmp>(b) || std::holds_alternative<ArithAssign>(b))
    return true;
  if (const auto* eq = std::get_if<TermEq>(&b))
    return is_arith_term(eq->lhs) || is_arith_term(eq->rhs);
  return false;
}

std::optional<LinearForm> linear_form(const Builtin& b) {
  if (const auto* c = std::get_if<LinCmp>(&b)) return LinearForm{c->rel, c->lhs - c->rhs};
  if (const auto* a = std::get_if<ArithAssign>(&b))
    return LinearForm{Rel::Eq, LinExpr::variable(a->target) - a->expr};
  if (const auto* eq = std::get_if<TermEq>(&b)) {
    if (!is_arith_term(eq->lhs) && !is_arith_term(eq->rhs)) return std::nullopt;
    auto l = LinExpr::try_from_term(eq->lhs);
    auto r = LinExpr::try_from_term(eq->rhs);
    if (!l || !r) return std::nullopt;
    return LinearForm{Rel::Eq, *l - *r};
  }
  return std::nullopt;
}

std::string to_string(const Builtin& b) {
  return std::visit(
      [](const auto& c) -> std::string {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TermEq>) {
          return to_string(c.lhs) + " = " + to_string(c.rhs);
        } else if constexpr (std::is_same_v<T, LinCmp>) {
          return to_string(c.lhs) + " " + rel_symbol(c.rel) + " " + to_string(c.rhs);
        } else if constexpr (std::is_same_v<T, ArithAssign>) {
          return to_string(Term::variable(c.target)) + " := " + to_string(c.expr);
        } else if constexpr (std::is_same_v<T, TrueC>) {
          return "true";
        } else {
          return "false";
        }
      },
      b);
}

}  // namespace rru
