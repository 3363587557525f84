#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "rru/engine.hpp"
#include "rru/syntax.hpp"
#include "rru/transform.hpp"

namespace rru::testing {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Program load_program(const std::string& name) {
  Program p = parse_program(read_file(std::string(RRU_PROGRAMS_DIR) + "/" + name));
  p.infer_recursion();
  return p;
}

inline Program load_golden(const std::string& name) {
  return parse_program(read_file(std::string(RRU_GOLDEN_DIR) + "/" + name));
}

inline const char* kSum =
    "rec: sum(N,S) <=> N > 1 | S := N+S1, sum(N-1,S1).\n"
    "base: sum(N,S) <=> N = 1 | S = 1.\n";

inline const char* kRev =
    "nil: r([],D) <=> D = [].\n"
    "cons: r([C|A],D) <=> r(A,B), a(B,[C],D).\n";

inline Program sum_program() {
  Program p = parse_program(kSum);
  p.infer_recursion();
  return p;
}

inline Program rev_program() {
  Program p = parse_program(kRev);
  p.infer_recursion();
  return p;
}

inline std::string list_text(std::uint64_t n) {
  std::string s = "[";
  for (std::uint64_t k = 1; k <= n; ++k) {
    if (k > 1) s += ",";
    s += std::to_string(k);
  }
  return s + "]";
}

inline std::string reversed_text(std::uint64_t n) {
  std::string s = "[";
  for (std::uint64_t k = n; k >= 1; --k) {
    s += std::to_string(k);
    if (k > 1) s += ",";
  }
  return s + "]";
}

/// Runs a query and returns "outcome: answer".
inline std::string answer_of(const Program& p, const std::string& q) {
  Engine e(p);
  RunResult r = e.run(q);
  return std::string(outcome_name(r.outcome)) + ": " + (r.ok() ? r.answer_text() : "");
}

}  // namespace rru::testing

namespace rru::testing {

/// Applies `r` once to the query's first goal, then completes the remaining
/// goals with `rest`. Returns "outcome: answer", or "not applicable".
inline std::string apply_then_run(const Rule& r, const Program& rest, const std::string& query) {
  Program single;
  single.rules = {r};
  Engine first(single);
  Engine cont(rest);
  VarSupply s = first.fresh_supply();
  for (const auto& x : rest.rules) avoid(s, x);
  ParsedGoal g = parse_goal(query, s);
  RunStats st;
  ConstraintStore store;
  auto body = first.try_rule(g.goal.at(0).call(), 0, store, s, st);
  if (!body) return "not applicable";
  Goal goal = *body;
  goal.insert(goal.end(), g.goal.begin() + 1, g.goal.end());
  Engine::State state = cont.initial(goal, g.vars, s);
  state.store = store;
  RunResult res = cont.run(std::move(state));
  return std::string(outcome_name(res.outcome)) + ": " + (res.ok() ? res.answer_text() : "");
}

/// Builtin cost of running `query` against the single-rule program until it
/// gets stuck.
inline std::uint64_t cost_until_stuck(const Rule& r, const std::string& query) {
  Program single;
  single.rules = {r};
  Engine e(single);
  RunResult res = e.run(query);
  return res.stats.builtin_cost();
}

}  // namespace rru::testing

namespace rru::testing {

/// Evaluates ground arithmetic and canonicalizes linear subterms.
inline Term canonical_value(const Term& t) {
  if (t.is_arith()) {
    if (auto e = LinExpr::try_from_term(t)) return e->is_constant() ? Term::integer(e->constant()) : e->to_term();
    return t;
  }
  if (t.is_compound()) {
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(canonical_value(a));
    return Term::compound(t.functor(), std::move(args));
  }
  if (t.is_cons()) return Term::cons(canonical_value(t.head()), canonical_value(t.tail()));
  return t;
}

/// State after one application of `r` to the query's single goal: the
/// body's built-ins are told, the remaining calls are kept. Rendered with
/// canonical variable names as state(QueryValues, Calls), or "not applicable".
inline std::string one_step_state(const Rule& r, const std::string& query) {
  Program single;
  single.rules = {r};
  Engine e(single);
  VarSupply s = e.fresh_supply();
  ParsedGoal g = parse_goal(query, s);
  RunStats st;
  ConstraintStore store;
  auto body = e.try_rule(g.goal.at(0).call(), 0, store, s, st);
  if (!body) return "not applicable";
  std::vector<Term> calls;
  for (const auto& a : *body) {
    if (a.is_builtin()) store.tell(a.builtin());
    else calls.push_back(a.call());
  }
  if (!store.consistent()) return "fail";
  std::vector<Term> values;
  for (const auto& v : g.vars) values.push_back(canonical_value(store.resolve(Term::variable(v))));
  for (auto& c : calls) c = canonical_value(store.resolve(c));
  Term state = Term::compound(Symbol::intern("state"),
                              {Term::list(values), Term::list(calls)});
  Printer printer(Naming::Canonical);
  return printer.term(state);
}

}  // namespace rru::testing
