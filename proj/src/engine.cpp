#include "rru/engine.hpp"

#include <algorithm>
#include <unordered_map>

#include "rru/error.hpp"
#include "rru/syntax.hpp"

namespace rru {

std::uint64_t RunStats::max_rule_applications() const {
  std::uint64_t m = 0;
  for (auto n : rule_applications) m = std::max(m, n);
  return m;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Success: return "success";
    case Outcome::Fail: return "fail";
    case Outcome::Stuck: return "stuck";
    case Outcome::LimitExceeded: return "limit-exceeded";
    case Outcome::Unbound: return "unbound";
    case Outcome::ModeError: return "mode-error";
    case Outcome::NonLinear: return "non-linear";
  }
  return "?";
}

std::string RunResult::answer_text() const {
  Printer p;
  std::vector<Var> vars;
  for (const auto& [v, _] : answer) vars.push_back(v);
  p.name_vars(vars);
  std::string out;
  for (const auto& [v, t] : answer) {
    if (!out.empty()) out += ", ";
    out += p.var_name(v) + " = " + p.term(t);
  }
  return out.empty() ? "true" : out;
}

// ---------------------------------------------------------------------------
// Compiled rules: variables renumbered to dense slot indices.

namespace {

struct CRule {
  Term head;
  std::vector<Builtin> guard;
  std::vector<std::vector<VarId>> guard_slots;
  std::vector<char> guard_arith;
  Goal body;
  std::vector<Var> slot_vars;  // original variable of each slot
  bool recursive = false;
  std::string name;
};

struct Frame {
  std::vector<Term> val;
  std::vector<char> bound;
  explicit Frame(std::size_t n) : val(n), bound(n, 0) {}
};

struct Key {
  Symbol f;
  std::size_t n;
  friend bool operator==(const Key&, const Key&) = default;
};
struct KeyHash {
  std::size_t operator()(const Key& k) const { return k.f.hash() * 31 + k.n; }
};

CRule compile(const Rule& r) {
  CRule c;
  c.name = r.name;
  c.recursive = r.recursive;
  Substitution ren;
  for (const auto& v : vars_of(r)) {
    const VarId slot = c.slot_vars.size();
    c.slot_vars.push_back(v);
    ren.bind(v, Term::variable(Var{slot, v.name}));
  }
  Rule s = apply(ren, r);
  c.head = s.head;
  c.guard = s.guard;
  for (const auto& g : c.guard) {
    std::vector<VarId> ids;
    for (const auto& v : vars_of(g)) ids.push_back(v.id);
    c.guard_slots.push_back(std::move(ids));
    c.guard_arith.push_back(is_arithmetic(g) ? 1 : 0);
  }
  c.body = s.body;
  return c;
}

class Instantiator {
 public:
  Instantiator(const CRule& r, Frame& f, VarSupply& supply)
      : rule_(r), frame_(f), supply_(supply) {}

  Term term(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Var: {
        const VarId slot = t.var_id();
        if (!frame_.bound[slot]) {
          frame_.val[slot] = Term::variable(supply_.fresh_like(rule_.slot_vars[slot]));
          frame_.bound[slot] = 1;
        }
        return frame_.val[slot];
      }
      case Term::Kind::Int:
      case Term::Kind::Nil:
        return t;
      case Term::Kind::Compound: {
        if (t.ground()) return t;
        std::vector<Term> args;
        args.reserve(t.arity());
        for (const auto& a : t.args()) args.push_back(term(a));
        return Term::compound(t.functor(), std::move(args));
      }
      case Term::Kind::Cons: {
        if (t.ground()) return t;
        ListView v = list_view(t);
        for (auto& e : v.elems) e = term(e);
        return Term::list(v.elems, term(v.tail));
      }
    }
    return t;
  }

  std::optional<LinExpr> lin(const LinExpr& e) {
    bool ok = true;
    LinExpr out = e.substitute([&](const Var& v) -> std::optional<LinExpr> {
      Term t = term(Term::variable(v));
      std::int64_t small;
      if (t.small_int(small)) return LinExpr(Int(small));
      auto r = LinExpr::try_from_term(t);
      if (!r) {
        ok = false;
        return LinExpr();
      }
      return r;
    });
    if (!ok) return std::nullopt;
    return out;
  }

  Builtin builtin(const Builtin& b) {
    return std::visit(
        [&](const auto& c) -> Builtin {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, TermEq>) {
            return TermEq{term(c.lhs), term(c.rhs)};
          } else if constexpr (std::is_same_v<T, LinCmp>) {
            auto l = lin(c.lhs);
            auto r = lin(c.rhs);
            if (!l || !r) return FalseC{};
            return LinCmp{c.rel, std::move(*l), std::move(*r)};
          } else if constexpr (std::is_same_v<T, ArithAssign>) {
            auto e = lin(c.expr);
            if (!e) return FalseC{};
            Term t = term(Term::variable(c.target));
            if (t.is_var()) return ArithAssign{t.as_var(), std::move(*e)};
            auto l = LinExpr::try_from_term(t);
            if (!l) return FalseC{};
            return LinCmp{Rel::Eq, std::move(*l), std::move(*e)};
          } else {
            return c;
          }
        },
        b);
  }

 private:
  const CRule& rule_;
  Frame& frame_;
  VarSupply& supply_;
};

bool has_unbound(const Term& t, const Frame& f) {
  for (const auto& v : vars_of(t))
    if (!f.bound[v.id]) return true;
  return false;
}

// Matches a compiled pattern against a runtime term, looking through store
// bindings of the subject.
bool match_slots(const Term& pattern, const Term& subject, const ConstraintStore& store,
                 Frame& f) {
  const Term* p = &pattern;
  Term s = subject;
  for (;;) {
    switch (p->kind()) {
      case Term::Kind::Var: {
        const VarId slot = p->var_id();
        if (!f.bound[slot]) {
          f.val[slot] = s;
          f.bound[slot] = 1;
          return true;
        }
        if (f.val[slot] == s) return true;
        return store.entails(TermEq{f.val[slot], s});
      }
      case Term::Kind::Int: {
        Term w = store.walk(s);
        return w.is_int() && w == *p;
      }
      case Term::Kind::Nil:
        return store.walk(s).is_nil();
      case Term::Kind::Cons: {
        Term w = store.walk(s);
        if (!w.is_cons()) return false;
        if (!match_slots(p->head(), w.head(), store, f)) return false;
        p = &p->tail();
        s = w.tail();
        continue;
      }
      case Term::Kind::Compound: {
        if (p->is_arith()) {
          // Only checkable once every variable is known.
          for (const auto& v : vars_of(*p))
            if (!f.bound[v.id]) return false;
          auto e = LinExpr::try_from_term(*p);
          if (!e) return false;
          LinExpr inst = e->substitute([&](const Var& v) -> std::optional<LinExpr> {
            return LinExpr::try_from_term(f.val[v.id]);
          });
          return store.entails(TermEq{inst.to_term(), s});
        }
        Term w = store.walk(s);
        if (!w.is_compound() || w.functor() != p->functor() || w.arity() != p->arity())
          return false;
        for (std::size_t i = 0; i < p->arity(); ++i)
          if (!match_slots(p->arg(i), w.arg(i), store, f)) return false;
        return true;
      }
    }
    return false;
  }
}

// Folds ground arithmetic arguments of a call to integers.
Term fold_call(const Term& call, std::uint64_t& cost) {
  if (!call.is_compound() || call.arity() == 0) return call;
  bool any = false;
  for (const auto& a : call.args())
    if (a.is_arith() && a.ground()) any = true;
  if (!any) return call;
  std::vector<Term> args;
  args.reserve(call.arity());
  for (const auto& a : call.args()) {
    if (a.is_arith() && a.ground()) {
      args.push_back(Term::integer(LinExpr::from_term(a).constant()));
      ++cost;
    } else {
      args.push_back(a);
    }
  }
  return Term::compound(call.functor(), std::move(args));
}

}  // namespace

struct Engine::Compiled {
  std::vector<CRule> rules;
  std::unordered_map<Key, std::vector<std::size_t>, KeyHash> index;
  VarId max_var = 0;
};

Engine::Engine(Program program) : program_(std::move(program)) {
  compiled_ = std::make_unique<Compiled>();
  for (std::size_t i = 0; i < program_.rules.size(); ++i) {
    const Rule& r = program_.rules[i];
    compiled_->rules.push_back(compile(r));
    if (r.head.is_compound())
      compiled_->index[Key{r.head.functor(), r.head.arity()}].push_back(i);
    for (const auto& v : vars_of(r)) compiled_->max_var = std::max(compiled_->max_var, v.id);
  }
}

Engine::~Engine() = default;
Engine::Engine(Engine&&) noexcept = default;
Engine& Engine::operator=(Engine&&) noexcept = default;

VarSupply Engine::fresh_supply() const { return VarSupply(compiled_->max_var + 1); }

Engine::State Engine::initial(const Goal& goal, std::vector<Var> query_vars,
                              VarSupply supply) const {
  State s;
  s.supply = supply;
  for (const auto& a : goal) {
    std::vector<Var> vs;
    std::unordered_set<VarId> seen;
    collect_vars(a, vs, seen);
    for (const auto& v : vs) s.supply.avoid(v.id);
  }
  s.stack.assign(goal.rbegin(), goal.rend());
  s.query_vars = std::move(query_vars);
  s.stats.rule_applications.assign(program_.rules.size(), 0);
  return s;
}

std::optional<Goal> Engine::try_rule(const Term& call, std::size_t rule_index,
                                     const ConstraintStore& store, VarSupply& supply,
                                     RunStats& stats) const {
  const CRule& r = compiled_->rules[rule_index];
  ++stats.head_matches;
  Frame f(r.slot_vars.size());
  auto reject = [&]() -> std::optional<Goal> {
    ++stats.rule_attempts;
    return std::nullopt;
  };
  if (!match_slots(r.head, call, store, f)) return reject();

  Instantiator inst(r, f, supply);
  for (std::size_t i = 0; i < r.guard.size(); ++i) {
    const Builtin& g = r.guard[i];
    if (r.guard_arith[i]) ++stats.arith_cost;
    bool open = false;
    for (VarId slot : r.guard_slots[i])
      if (!f.bound[slot]) open = true;
    if (open) {
      // Guard-local variables: existentially bound by matching.
      const auto* eq = std::get_if<TermEq>(&g);
      if (!eq) return reject();
      const bool lo = has_unbound(eq->lhs, f);
      const bool ro = has_unbound(eq->rhs, f);
      if (lo == ro) return reject();
      const Term& pattern = lo ? eq->lhs : eq->rhs;
      Term subject = inst.term(lo ? eq->rhs : eq->lhs);
      if (!match_slots(pattern, subject, store, f)) return reject();
      continue;
    }
    Builtin b = inst.builtin(g);
    if (const auto* c = std::get_if<LinCmp>(&b);
        c && c->lhs.is_constant() && c->rhs.is_constant()) {
      if (!rel_holds(c->rel, c->lhs.constant() - c->rhs.constant())) return reject();
      continue;
    }
    if (!store.entails(b)) return reject();
  }

  Goal body;
  body.reserve(r.body.size());
  for (const auto& a : r.body) {
    if (a.is_call())
      body.emplace_back(fold_call(inst.term(a.call()), stats.arith_cost));
    else
      body.emplace_back(inst.builtin(a.builtin()));
  }
  ++stats.applications;
  if (stats.rule_applications.size() < compiled_->rules.size())
    stats.rule_applications.resize(compiled_->rules.size(), 0);
  ++stats.rule_applications[rule_index];
  if (r.recursive) ++stats.recursive_applications;
  return body;
}

std::size_t interpreted_append(const Term& x, const Term& y, const Term& z,
                               ConstraintStore& store) {
  std::vector<Term> elems;
  Term cur = store.walk(x);
  while (cur.is_cons()) {
    elems.push_back(cur.head());
    cur = store.walk(cur.tail());
  }
  if (!cur.is_nil())
    throw Error(ErrorKind::ModeError,
                "append: first argument is not a closed list: " + to_string(store.resolve(x)));
  store.tell_eq(z, Term::list(elems, y));
  return elems.size();
}

Engine::Step Engine::step(State& s, std::vector<std::string>* trace) const {
  if (s.stack.empty()) return Step::Done;
  Atom a = std::move(s.stack.back());
  s.stack.pop_back();
  ++s.stats.steps;

  if (a.is_builtin()) {
    const Builtin& b = a.builtin();
    if (trace) trace->push_back("TELL " + to_string(b));
    if (std::holds_alternative<LinCmp>(b) || std::holds_alternative<ArithAssign>(b))
      ++s.stats.arith_cost;
    if (const auto* c = std::get_if<LinCmp>(&b);
        c && c->lhs.is_constant() && c->rhs.is_constant()) {
      return rel_holds(c->rel, c->lhs.constant() - c->rhs.constant()) ? Step::Progress
                                                                       : Step::Fail;
    }
    s.store.tell(b);
    return s.store.consistent() ? Step::Progress : Step::Fail;
  }

  const Term& call = a.call();
  if (const InterpretedDef* d = program_.interpreted_def(call)) {
    if (trace) trace->push_back("TELL " + to_string(call));
    switch (d->kind) {
      case InterpretedKind::Append:
        s.stats.append_cost += interpreted_append(call.arg(0), call.arg(1), call.arg(2), s.store);
        break;
    }
    return s.store.consistent() ? Step::Progress : Step::Fail;
  }

  if (call.is_compound()) {
    auto it = compiled_->index.find(Key{call.functor(), call.arity()});
    if (it != compiled_->index.end()) {
      for (std::size_t idx : it->second) {
        auto body = try_rule(call, idx, s.store, s.supply, s.stats);
        if (!body) {
          if (trace) trace->push_back("TRY " + compiled_->rules[idx].name + " FAIL");
          continue;
        }
        if (trace) trace->push_back("APPLY " + compiled_->rules[idx].name);
        for (auto b = body->rbegin(); b != body->rend(); ++b) s.stack.push_back(std::move(*b));
        return Step::Progress;
      }
    }
  }
  s.stack.push_back(std::move(a));
  return Step::Stuck;
}

RunResult Engine::run(State s, const RunLimits& limits, bool trace) const {
  RunResult res;
  std::vector<std::string>* tr = trace ? &res.trace : nullptr;
  try {
    for (;;) {
      if (s.stack.empty()) {
        res.outcome = Outcome::Success;
        break;
      }
      if (s.stats.steps >= limits.max_steps || s.stack.size() > limits.max_goals) {
        res.outcome = Outcome::LimitExceeded;
        res.message = "step or goal limit exceeded";
        break;
      }
      Step st = step(s, tr);
      if (st == Step::Fail) {
        res.outcome = Outcome::Fail;
        res.message = "built-in store became inconsistent";
        break;
      }
      if (st == Step::Stuck) {
        res.outcome = Outcome::Stuck;
        res.message = "no rule applicable to " + to_string(s.store.resolve(s.stack.back().call()));
        break;
      }
    }
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::ModeError: res.outcome = Outcome::ModeError; break;
      case ErrorKind::NonLinear: res.outcome = Outcome::NonLinear; break;
      default: res.outcome = Outcome::Unbound; break;
    }
    res.message = e.what();
  }
  for (const auto& v : s.query_vars)
    res.answer.emplace_back(v, s.store.resolve(Term::variable(v)));
  res.stats = std::move(s.stats);
  res.store = std::move(s.store);
  return res;
}

RunResult Engine::run(const Goal& goal, const std::vector<Var>& query_vars,
                      const RunLimits& limits, bool trace) const {
  return run(initial(goal, query_vars, fresh_supply()), limits, trace);
}

RunResult Engine::run(std::string_view query, const RunLimits& limits, bool trace) const {
  VarSupply supply = fresh_supply();
  ParsedGoal g = parse_goal(query, supply);
  return run(initial(g.goal, g.vars, supply), limits, trace);
}

}  // namespace rru
