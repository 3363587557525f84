#pragma once

// Normalized conjunction of built-in constraints.
//
// Term equalities are kept as variable bindings. Linear equalities with a
// unit coefficient are kept in solved form (variable -> expression over
// unsolved variables); the rest (inequalities, non-unit equalities,
// disequalities) is a small residual system over the unsolved variables,
// checked with Fourier-Motzkin.

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rru/builtin.hpp"

namespace rru {

class ConstraintStore {
 public:
  ConstraintStore() = default;

  /// Tells the constraints in order.
  static ConstraintStore normalize(const std::vector<Builtin>& cs);

  /// Adds a constraint. Throws Error(NonLinear) for non-linear arithmetic.
  void tell(const Builtin& b);
  void tell_eq(const Term& a, const Term& b);
  void tell_all(const std::vector<Builtin>& cs) {
    for (const auto& c : cs) tell(c);
  }

  bool consistent() const { return consistent_; }
  bool satisfiable() const { return consistent_; }

  /// store |= c. An inconsistent store entails everything.
  bool entails(const Builtin& c) const;
  bool entails_all(const std::vector<Builtin>& cs) const;
  /// Mutual entailment of the canonical constraints.
  bool equivalent(const ConstraintStore& o) const;

  /// Follows variable bindings one level deep; a variable with a known
  /// integer value walks to that integer.
  Term walk(const Term& t) const;
  /// Applies all bindings and known values recursively.
  Term resolve(const Term& t) const;
  std::optional<Int> value_of(VarId v) const;
  /// Rewrites `e` over unsolved variables; nullopt on a type clash (a
  /// variable bound to a non-arithmetic term).
  std::optional<LinExpr> resolve_lin(const LinExpr& e) const;
  /// Exact value of `e`. Throws Error(Unbound) if it is not determined.
  Int eval_ground(const LinExpr& e) const;

  /// Canonical constraints, deterministic order.
  std::vector<Builtin> constraints() const;
  bool empty() const;
  std::string to_string() const;

 private:
  void fail() { consistent_ = false; }
  bool is_linear(VarId v) const { return linear_vars_.count(v) != 0; }
  void mark_linear(const LinExpr& e);
  std::optional<LinExpr> as_linear(const Term& t) const;
  void add_linear_eq(LinExpr e);
  void add_ineq(LinExpr e);
  void add_diseq(LinExpr e);
  void solve_for(const Var& x, LinExpr def);
  void check_residual();
  bool residual_satisfiable_with(const std::vector<LinExpr>& le,
                                 const std::vector<LinExpr>& eq,
                                 const std::vector<LinExpr>& ne) const;
  bool entails_linear(Rel rel, const LinExpr& e) const;
  bool entails_eq(const Term& a, const Term& b) const;

  struct Binding {
    Var var;
    Term value;
  };
  struct Solved {
    Var var;
    LinExpr def;  // over unsolved variables
  };

  std::unordered_map<VarId, Binding> bindings_;
  std::unordered_map<VarId, Solved> solved_;
  // unsolved variable -> solved variables whose definition may mention it
  std::unordered_map<VarId, std::vector<VarId>> users_;
  std::vector<LinExpr> ineqs_;  // e <= 0
  std::vector<LinExpr> eqs_;    // e == 0, no unit coefficient
  std::vector<LinExpr> diseqs_;  // e != 0
  std::unordered_set<VarId> linear_vars_;
  bool consistent_ = true;
};

/// The constraints of `c2` not entailed by `c3`, in input order.
std::vector<Builtin> diff(const std::vector<Builtin>& c2, const ConstraintStore& c3);

}  // namespace rru
