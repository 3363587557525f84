#include "rru/simplify.hpp"

#include <algorithm>
#include <functional>

#include "rru/error.hpp"
#include "rru/store.hpp"
#include "rru/syntax.hpp"

namespace rru {

namespace {

struct Ctx {
  const SimplifyOptions& opts;
};

using LawFn = bool (*)(Rule&, Ctx&);

bool same_rule(const Rule& a, const Rule& b) {
  return a.head == b.head && a.guard == b.guard && a.body == b.body;
}

std::unordered_set<VarId> ids_of(const std::vector<Builtin>& g) {
  std::vector<Var> out;
  std::unordered_set<VarId> seen;
  for (const auto& b : g) collect_vars(b, out, seen);
  return seen;
}

std::unordered_set<VarId> protected_ids(const Rule& r) {
  auto s = head_var_ids(r);
  for (VarId v : ids_of(r.guard)) s.insert(v);
  return s;
}

std::size_t count_in(const Term& t, VarId v) {
  switch (t.kind()) {
    case Term::Kind::Var: return t.var_id() == v ? 1 : 0;
    case Term::Kind::Int:
    case Term::Kind::Nil: return 0;
    case Term::Kind::Compound: {
      if (t.ground()) return 0;
      std::size_t n = 0;
      for (const auto& a : t.args()) n += count_in(a, v);
      return n;
    }
    case Term::Kind::Cons: {
      ListView lv = list_view(t);
      std::size_t n = count_in(lv.tail, v);
      for (const auto& e : lv.elems) n += count_in(e, v);
      return n;
    }
  }
  return 0;
}

std::size_t count_in(const Builtin& b, VarId v) {
  if (const auto* e = std::get_if<TermEq>(&b)) return count_in(e->lhs, v) + count_in(e->rhs, v);
  if (const auto* c = std::get_if<LinCmp>(&b))
    return (c->lhs.mentions(v) ? 1 : 0) + (c->rhs.mentions(v) ? 1 : 0);
  if (const auto* a = std::get_if<ArithAssign>(&b))
    return (a->target.id == v ? 1 : 0) + (a->expr.mentions(v) ? 1 : 0);
  return 0;
}

std::size_t count_in(const Atom& a, VarId v) {
  return a.is_call() ? count_in(a.call(), v) : count_in(a.builtin(), v);
}

std::size_t count_in(const Rule& r, VarId v) {
  std::size_t n = count_in(r.head, v);
  for (const auto& g : r.guard) n += count_in(g, v);
  for (const auto& a : r.body) n += count_in(a, v);
  return n;
}

LinExpr divided(const LinExpr& e, const Int& g) {
  LinExpr out;
  for (const auto& [v, c] : e.terms()) out.add_term(v, c / g);
  return out;
}

Term canonical_arith(const Term& t) {
  if (!t.is_arith()) return t;
  auto e = LinExpr::try_from_term(t);
  return e ? e->to_term() : t;
}

// ---------------------------------------------------------------------------
// Law 1: equalities in the body are decomposed; local variables are
// eliminated by substitution, preferring the right-hand (pattern) side.

bool propagate_equalities(Rule& r, Ctx&) {
  const auto prot = protected_ids(r);
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    if (!r.body[i].is_builtin()) continue;
    const auto* eq = std::get_if<TermEq>(&r.body[i].builtin());
    if (!eq) continue;

    Substitution sub;
    std::vector<Builtin> residual;
    bool changed = false;
    std::vector<std::pair<Term, Term>> work{{eq->lhs, eq->rhs}};
    bool top = true;
    auto eligible = [&](const Term& t) {
      return t.is_var() && !prot.count(t.var_id()) && !sub.contains(t.var_id());
    };
    while (!work.empty()) {
      auto [l, rt] = work.back();
      work.pop_back();
      l = apply(sub, l);
      rt = apply(sub, rt);
      const bool was_top = top;
      top = false;
      if (l == rt) {
        changed = true;
        continue;
      }
      if (eligible(rt) && !occurs(rt.var_id(), l)) {
        sub.bind(rt.var_id(), l);
        changed = true;
        continue;
      }
      if (eligible(l) && !occurs(l.var_id(), rt)) {
        sub.bind(l.var_id(), rt);
        changed = true;
        continue;
      }
      const bool la = is_arith_term(l), ra = is_arith_term(rt);
      if (la || ra) {
        if ((la || l.is_var()) && (ra || rt.is_var())) {
          if (l.is_int() && rt.is_int()) {
            residual.emplace_back(FalseC{});
            changed = true;
          } else if (was_top) {
            residual.emplace_back(TermEq{l, rt});
          } else {
            residual.emplace_back(LinCmp{Rel::Eq, LinExpr::from_term(l), LinExpr::from_term(rt)});
            changed = true;
          }
        } else if (l.is_var() || rt.is_var()) {
          residual.emplace_back(TermEq{l, rt});
        } else {
          residual.emplace_back(FalseC{});
          changed = true;
        }
        continue;
      }
      if (l.is_compound() && rt.is_compound()) {
        if (l.functor() != rt.functor() || l.arity() != rt.arity()) {
          residual.emplace_back(FalseC{});
        } else {
          for (std::size_t k = l.arity(); k-- > 0;) work.emplace_back(l.arg(k), rt.arg(k));
        }
        changed = true;
        continue;
      }
      if (l.is_cons() && rt.is_cons()) {
        work.emplace_back(l.tail(), rt.tail());
        work.emplace_back(l.head(), rt.head());
        changed = true;
        continue;
      }
      if (!l.is_var() && !rt.is_var()) {
        residual.emplace_back(FalseC{});
        changed = true;
        continue;
      }
      residual.emplace_back(TermEq{l, rt});
    }
    if (!changed) continue;
    Goal body;
    for (std::size_t k = 0; k < r.body.size(); ++k) {
      if (k == i) {
        for (auto& b : residual) body.emplace_back(std::move(b));
      } else {
        body.push_back(r.body[k]);
      }
    }
    r.body = std::move(body);
    r = apply(sub, r);
    return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Law 2: local assignments used only in arithmetic positions are inlined;
// arithmetic call arguments are brought to canonical form.

bool inline_arithmetic(Rule& r, Ctx&) {
  const auto prot = protected_ids(r);
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    if (!r.body[i].is_builtin()) continue;
    const auto* def = std::get_if<ArithAssign>(&r.body[i].builtin());
    if (!def) continue;
    const VarId x = def->target.id;
    if (prot.count(x) || def->expr.mentions(x)) continue;
    bool ok = true;
    std::size_t uses = 0;
    for (std::size_t k = 0; k < r.body.size() && ok; ++k) {
      if (k == i) continue;
      const Atom& a = r.body[k];
      const std::size_t n = count_in(a, x);
      if (n == 0) continue;
      if (a.is_call()) {
        ok = false;
      } else if (const auto* c = std::get_if<LinCmp>(&a.builtin())) {
        (void)c;
        uses += n;
      } else if (const auto* s = std::get_if<ArithAssign>(&a.builtin())) {
        if (s->target.id == x) ok = false;
        uses += n;
      } else {
        ok = false;
      }
    }
    if (!ok || uses == 0) continue;
    const LinExpr e = def->expr;
    Goal body;
    for (std::size_t k = 0; k < r.body.size(); ++k) {
      if (k == i) continue;
      const Atom& a = r.body[k];
      if (a.is_builtin() && count_in(a, x) > 0) {
        if (const auto* c = std::get_if<LinCmp>(&a.builtin())) {
          body.emplace_back(Builtin(LinCmp{c->rel, c->lhs.substitute(x, e), c->rhs.substitute(x, e)}));
          continue;
        }
        const auto& s = std::get<ArithAssign>(a.builtin());
        body.emplace_back(Builtin(ArithAssign{s.target, s.expr.substitute(x, e)}));
        continue;
      }
      body.push_back(a);
    }
    r.body = std::move(body);
    return true;
  }

  bool changed = false;
  for (auto& a : r.body) {
    if (a.is_call()) {
      const Term& call = a.call();
      if (!call.is_compound() || call.arity() == 0) continue;
      std::vector<Term> args;
      bool any = false;
      for (const auto& t : call.args()) {
        Term c = canonical_arith(t);
        if (c != t) any = true;
        args.push_back(std::move(c));
      }
      if (any) {
        a = Atom(Term::compound(call.functor(), std::move(args)));
        changed = true;
      }
    } else if (const auto* eq = std::get_if<TermEq>(&a.builtin())) {
      Term l = canonical_arith(eq->lhs), rt = canonical_arith(eq->rhs);
      if (l != eq->lhs || rt != eq->rhs) {
        a = Atom(Builtin(TermEq{l, rt}));
        changed = true;
      }
    }
  }
  return changed;
}

// ---------------------------------------------------------------------------
// Law 3: guard normalization and removal of body built-ins implied by it.

bool simplify_guard(Rule& r, Ctx&) {
  bool changed = false;
  for (auto& g : r.guard) {
    if (const auto* c = std::get_if<LinCmp>(&g)) {
      Builtin canon = canonical_comparison(*c);
      if (!(canon == g)) {
        g = canon;
        changed = true;
      }
    }
  }
  const auto before = r.guard.size();
  std::erase_if(r.guard, [](const Builtin& b) { return std::holds_alternative<TrueC>(b); });
  if (r.guard.size() != before) changed = true;

  for (std::size_t i = 0; i < r.guard.size(); ++i) {
    if (!std::holds_alternative<LinCmp>(r.guard[i])) continue;
    std::vector<Builtin> others;
    for (std::size_t k = 0; k < r.guard.size(); ++k)
      if (k != i) others.push_back(r.guard[k]);
    ConstraintStore s = ConstraintStore::normalize(others);
    if (!s.consistent()) continue;
    if (s.entails(r.guard[i])) {
      r.guard.erase(r.guard.begin() + static_cast<std::ptrdiff_t>(i));
      return true;
    }
  }

  ConstraintStore gs = ConstraintStore::normalize(r.guard);
  if (!gs.consistent()) return changed;
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    if (!r.body[i].is_builtin()) continue;
    const Builtin& b = r.body[i].builtin();
    const bool candidate = std::holds_alternative<LinCmp>(b) ||
                           std::holds_alternative<TermEq>(b) ||
                           std::holds_alternative<TrueC>(b);
    if (candidate && gs.entails(b)) {
      r.body.erase(r.body.begin() + static_cast<std::ptrdiff_t>(i));
      return true;
    }
  }
  return changed;
}

// ---------------------------------------------------------------------------
// Law 4: a guard equality binding a head variable to a structure is folded
// back into the head.

bool fold_head(Rule& r, Ctx&) {
  const auto head = head_var_ids(r);
  for (std::size_t i = 0; i < r.guard.size(); ++i) {
    const auto* eq = std::get_if<TermEq>(&r.guard[i]);
    if (!eq) continue;
    for (int side = 0; side < 2; ++side) {
      const Term& x = side == 0 ? eq->lhs : eq->rhs;
      const Term& t = side == 0 ? eq->rhs : eq->lhs;
      if (!x.is_var() || !head.count(x.var_id())) continue;
      if (t.is_var() || is_arith_term(t) || occurs(x.var_id(), t)) continue;
      Substitution sub;
      sub.bind(x.var_id(), t);
      r.guard.erase(r.guard.begin() + static_cast<std::ptrdiff_t>(i));
      r = apply(sub, r);
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Law 5: append fusion.

bool fuse_law(Rule& r, Ctx& ctx) {
  std::unordered_set<VarId> locals;
  const auto prot = protected_ids(r);
  for (const auto& v : vars_of(r))
    if (!prot.count(v.id) && count_in(r, v.id) == 2) locals.insert(v.id);
  Goal fused = fuse_append(r.body, locals, ctx.opts.interpreted);
  if (fused == r.body) return false;
  r.body = std::move(fused);
  return true;
}

// ---------------------------------------------------------------------------
// Law 6: drop definitions of local variables that are used nowhere else.

bool drop_unused(Rule& r, Ctx&) {
  const auto prot = protected_ids(r);
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    if (!r.body[i].is_builtin()) continue;
    const Builtin& b = r.body[i].builtin();
    bool dead = std::holds_alternative<TrueC>(b);
    if (const auto* a = std::get_if<ArithAssign>(&b)) {
      const VarId x = a->target.id;
      dead = !prot.count(x) && !a->expr.mentions(x) && count_in(r, x) == 1;
    } else if (const auto* eq = std::get_if<TermEq>(&b)) {
      for (const Term* side : {&eq->lhs, &eq->rhs}) {
        const Term& other = side == &eq->lhs ? eq->rhs : eq->lhs;
        if (side->is_var() && !prot.count(side->var_id()) && !occurs(side->var_id(), other) &&
            count_in(r, side->var_id()) == 1)
          dead = true;
      }
    }
    if (dead) {
      r.body.erase(r.body.begin() + static_cast<std::ptrdiff_t>(i));
      return true;
    }
  }
  return false;
}

struct Law {
  const char* name;
  LawFn fn;
};

const std::vector<Law>& registry() {
  static const std::vector<Law> laws = {
      {"propagate-equalities", propagate_equalities},
      {"inline-arithmetic", inline_arithmetic},
      {"guard", simplify_guard},
      {"fold-head", fold_head},
      {"fuse-append", fuse_law},
      {"eliminate-locals", drop_unused},
  };
  return laws;
}

}  // namespace

const std::vector<std::string>& law_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& l : registry()) out.emplace_back(l.name);
    return out;
  }();
  return names;
}

Builtin canonical_comparison(const LinCmp& c) {
  LinExpr e = c.lhs - c.rhs;
  Rel rel = c.rel;
  if (e.is_constant()) {
    if (rel_holds(rel, e.constant())) return TrueC{};
    return FalseC{};
  }
  if (e.terms().front().second < 0) {
    e = -e;
    rel = flip(rel);
  }
  const Int g = e.coeff_gcd();
  const Int k = -e.constant();
  LinExpr t = divided(e, g);
  switch (rel) {
    case Rel::Eq:
      if (k % g != 0) return FalseC{};
      return LinCmp{Rel::Eq, t, LinExpr(k / g)};
    case Rel::Ne:
      if (k % g != 0) return TrueC{};
      return LinCmp{Rel::Ne, t, LinExpr(k / g)};
    case Rel::Lt: return LinCmp{Rel::Lt, t, LinExpr(floor_div(k - 1, g) + 1)};
    case Rel::Le: return LinCmp{Rel::Lt, t, LinExpr(floor_div(k, g) + 1)};
    case Rel::Gt: return LinCmp{Rel::Gt, t, LinExpr(ceil_div(k + 1, g) - 1)};
    case Rel::Ge: return LinCmp{Rel::Gt, t, LinExpr(ceil_div(k, g) - 1)};
  }
  return c;
}

Goal fuse_append(const Goal& body, const std::unordered_set<VarId>& locals,
                 const std::vector<InterpretedDef>& interpreted) {
  auto is_append = [&](const Atom& a) {
    if (!a.is_call() || !a.call().is_compound() || a.call().arity() != 3) return false;
    for (const auto& d : interpreted)
      if (d.kind == InterpretedKind::Append && d.functor == a.call().functor() && d.arity == 3)
        return true;
    return false;
  };
  auto closed = [](const Term& t) { return (t.is_nil() || t.is_cons()) && list_view(t).closed(); };

  Goal g = body;
  bool again = true;
  while (again) {
    again = false;
    for (std::size_t i = 0; i < g.size() && !again; ++i) {
      if (!is_append(g[i])) continue;
      const Term& first = g[i].call();
      const Term& y = first.arg(2);
      if (!y.is_var() || !locals.count(y.var_id()) || !closed(first.arg(1))) continue;
      for (std::size_t j = i + 1; j < g.size(); ++j) {
        if (!is_append(g[j])) continue;
        const Term& second = g[j].call();
        if (!(second.arg(0) == y) || !closed(second.arg(1))) continue;
        std::vector<Term> seg = list_view(first.arg(1)).elems;
        for (const auto& e : list_view(second.arg(1)).elems) seg.push_back(e);
        g[j] = Atom(Term::compound(first.functor(), {first.arg(0), Term::list(seg), second.arg(2)}));
        g.erase(g.begin() + static_cast<std::ptrdiff_t>(i));
        again = true;
        break;
      }
    }
  }
  return g;
}

SimplifyResult simplify_rule(const Rule& input, const SimplifyOptions& opts) {
  std::vector<Law> laws;
  if (opts.order.empty()) {
    laws = registry();
  } else {
    for (const auto& name : opts.order) {
      auto it = std::find_if(registry().begin(), registry().end(),
                             [&](const Law& l) { return name == l.name; });
      if (it == registry().end())
        throw Error(ErrorKind::InvalidArgument, "unknown simplification law: " + name);
      laws.push_back(*it);
    }
  }

  Ctx ctx{opts};
  SimplifyResult res{input, {}};
  Rule& r = res.rule;
  for (std::size_t pass = 0; pass < opts.max_passes; ++pass) {
    bool any = false;
    for (const auto& law : laws) {
      for (int guard = 0; guard < 1000; ++guard) {
        Rule before = r;
        if (!law.fn(r, ctx) || same_rule(before, r)) {
          r = std::move(before);
          break;
        }
        res.report.steps.push_back({law.name, print_rule(before), print_rule(r)});
        any = true;
      }
    }
    if (!any) break;
  }

  const auto after = vars_of(r);
  std::unordered_set<VarId> kept;
  for (const auto& v : after) kept.insert(v.id);
  Printer names;
  names.name_rule(input);
  for (const auto& v : vars_of(input)) {
    if (kept.count(v.id)) continue;
    res.report.eliminated.push_back(v);
    res.report.eliminated_names.push_back(names.var_name(v));
  }
  return res;
}

Rule eliminate_locals(const Rule& input) {
  SimplifyOptions opts;
  opts.order = {"propagate-equalities", "inline-arithmetic", "eliminate-locals"};
  return simplify_rule(input, opts).rule;
}

std::string SimplifyReport::to_string() const {
  std::string out;
  for (const auto& s : steps) {
    out += s.law + ":\n    " + s.before + "\n => " + s.after + "\n";
  }
  if (!eliminated.empty()) {
    out += "eliminated:";
    for (const auto& n : eliminated_names) out += " " + n;
    out += "\n";
  }
  return out;
}

}  // namespace rru
