#pragma once

// Linear integer expressions: sum of coefficient*variable plus a constant.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "rru/term.hpp"

namespace rru {

class LinExpr {
 public:
  using Entry = std::pair<Var, Int>;

  LinExpr() = default;
  explicit LinExpr(Int constant) : constant_(std::move(constant)) {}
  static LinExpr variable(const Var& v, Int coef = 1);

  /// Converts an arithmetic term (integers, variables, +, -, *). Throws
  /// Error(NonLinear) for products of variables and for non-arithmetic
  /// subterms.
  static LinExpr from_term(const Term& t);
  /// Like from_term but returns nullopt instead of throwing.
  static std::optional<LinExpr> try_from_term(const Term& t);

  /// Canonical arithmetic term: first variable term, then the constant,
  /// then the remaining variable terms, left-associated.
  Term to_term() const;

  const std::vector<Entry>& terms() const { return terms_; }
  const Int& constant() const { return constant_; }
  bool is_constant() const { return terms_.empty(); }
  bool is_zero() const { return terms_.empty() && constant_ == 0; }
  std::size_t size() const { return terms_.size(); }
  /// Coefficient of `v` (zero if absent).
  Int coeff(VarId v) const;
  bool mentions(VarId v) const;
  std::optional<Var> single_var() const;

  void set_constant(Int c) { constant_ = std::move(c); }
  void add_term(const Var& v, const Int& coef);
  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  LinExpr& operator*=(const Int& k);
  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(LinExpr a, const Int& k) { return a *= k; }
  LinExpr operator-() const { return *this * Int(-1); }

  /// Replaces `v` by `e`.
  LinExpr substitute(VarId v, const LinExpr& e) const;
  /// Replaces variables via `f`; f returns nullopt to keep the variable.
  LinExpr substitute(const std::function<std::optional<LinExpr>(const Var&)>& f) const;

  /// gcd of the variable coefficients (0 when constant).
  Int coeff_gcd() const;
  /// Exact value when every variable has a value in `value`.
  std::optional<Int> evaluate(
      const std::function<std::optional<Int>(VarId)>& value) const;

  std::vector<Var> vars() const;

  friend bool operator==(const LinExpr& a, const LinExpr& b);
  friend bool operator!=(const LinExpr& a, const LinExpr& b) { return !(a == b); }
  /// Same variables with the same coefficients (constant ignored).
  bool same_coeffs(const LinExpr& o) const;

 private:
  std::vector<Entry> terms_;  // sorted by var id, no zero coefficients
  Int constant_ = 0;
};

std::string to_string(const LinExpr& e);

Int floor_div(const Int& a, const Int& b);
Int ceil_div(const Int& a, const Int& b);
Int gcd(Int a, Int b);

}  // namespace rru
