#include "rru/linexpr.hpp"

#include <algorithm>

#include "rru/error.hpp"

namespace rru {

Int gcd(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Int ceil_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

LinExpr LinExpr::variable(const Var& v, Int coef) {
  LinExpr e;
  if (coef != 0) e.terms_.emplace_back(v, std::move(coef));
  return e;
}

namespace {

std::optional<LinExpr> convert(const Term& t, bool throw_on_error) {
  auto fail = [&](const std::string& msg) -> std::optional<LinExpr> {
    if (throw_on_error) throw Error(ErrorKind::NonLinear, msg);
    return std::nullopt;
  };
  switch (t.kind()) {
    case Term::Kind::Var:
      return LinExpr::variable(t.as_var());
    case Term::Kind::Int:
      return LinExpr(t.int_value());
    case Term::Kind::Nil:
    case Term::Kind::Cons:
      return fail("list in arithmetic position: " + to_string(t));
    case Term::Kind::Compound:
      break;
  }
  if (!t.is_arith())
    return fail("non-arithmetic term in arithmetic position: " + to_string(t));
  const Symbol f = t.functor();
  if (f == sym_minus() && t.arity() == 1) {
    auto a = convert(t.arg(0), throw_on_error);
    if (!a) return a;
    return -*a;
  }
  auto a = convert(t.arg(0), throw_on_error);
  if (!a) return a;
  auto b = convert(t.arg(1), throw_on_error);
  if (!b) return b;
  if (f == sym_plus()) return *a + *b;
  if (f == sym_minus()) return *a - *b;
  if (a->is_constant()) return *b * a->constant();
  if (b->is_constant()) return *a * b->constant();
  return fail("product of variables: " + to_string(t));
}

Term scaled_var(const Var& v, const Int& coef) {
  Term x = Term::variable(v);
  if (coef == 1) return x;
  return Term::compound(sym_times(), {Term::integer(coef), x});
}

}  // namespace

LinExpr LinExpr::from_term(const Term& t) { return *convert(t, true); }

std::optional<LinExpr> LinExpr::try_from_term(const Term& t) {
  return convert(t, false);
}

Term LinExpr::to_term() const {
  if (terms_.empty()) return Term::integer(constant_);
  Term acc;
  const auto& [v0, c0] = terms_.front();
  if (c0 < 0)
    acc = Term::compound(sym_minus(), {scaled_var(v0, -c0)});
  else
    acc = scaled_var(v0, c0);
  auto push = [&](const Term& magnitude, bool negative) {
    acc = Term::compound(negative ? sym_minus() : sym_plus(), {acc, magnitude});
  };
  if (constant_ != 0) push(Term::integer(abs(constant_)), constant_ < 0);
  for (std::size_t i = 1; i < terms_.size(); ++i) {
    const auto& [v, c] = terms_[i];
    push(scaled_var(v, abs(c)), c < 0);
  }
  return acc;
}

Int LinExpr::coeff(VarId v) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), v,
      [](const Entry& e, VarId id) { return e.first.id < id; });
  if (it != terms_.end() && it->first.id == v) return it->second;
  return 0;
}

bool LinExpr::mentions(VarId v) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), v,
      [](const Entry& e, VarId id) { return e.first.id < id; });
  return it != terms_.end() && it->first.id == v;
}

std::optional<Var> LinExpr::single_var() const {
  if (terms_.size() != 1) return std::nullopt;
  return terms_.front().first;
}

void LinExpr::add_term(const Var& v, const Int& coef) {
  if (coef == 0) return;
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), v.id,
      [](const Entry& e, VarId id) { return e.first.id < id; });
  if (it != terms_.end() && it->first.id == v.id) {
    it->second += coef;
    if (it->second == 0) terms_.erase(it);
    return;
  }
  terms_.insert(it, Entry{v, coef});
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  if (terms_.empty()) {
    terms_ = o.terms_;
  } else if (!o.terms_.empty()) {
    std::vector<Entry> merged;
    merged.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
      if (j == o.terms_.size() ||
          (i < terms_.size() && terms_[i].first.id < o.terms_[j].first.id)) {
        merged.push_back(std::move(terms_[i++]));
      } else if (i == terms_.size() ||
                 o.terms_[j].first.id < terms_[i].first.id) {
        merged.push_back(o.terms_[j++]);
      } else {
        Int c = terms_[i].second + o.terms_[j].second;
        if (c != 0) merged.emplace_back(terms_[i].first, std::move(c));
        ++i;
        ++j;
      }
    }
    terms_ = std::move(merged);
  }
  constant_ += o.constant_;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) { return *this += -o; }

LinExpr& LinExpr::operator*=(const Int& k) {
  if (k == 0) {
    terms_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& [_, c] : terms_) c *= k;
  constant_ *= k;
  return *this;
}

LinExpr LinExpr::substitute(VarId v, const LinExpr& e) const {
  Int c = coeff(v);
  if (c == 0) return *this;
  LinExpr out = *this;
  out.add_term(Var{v, nullptr}, -c);
  out += e * c;
  return out;
}

LinExpr LinExpr::substitute(
    const std::function<std::optional<LinExpr>(const Var&)>& f) const {
  LinExpr out(constant_);
  for (const auto& [v, c] : terms_) {
    if (auto r = f(v))
      out += *r * c;
    else
      out.add_term(v, c);
  }
  return out;
}

Int LinExpr::coeff_gcd() const {
  Int g = 0;
  for (const auto& [_, c] : terms_) {
    g = gcd(g, c);
    if (g == 1) break;
  }
  return g;
}

std::optional<Int> LinExpr::evaluate(
    const std::function<std::optional<Int>(VarId)>& value) const {
  Int sum = constant_;
  for (const auto& [v, c] : terms_) {
    auto x = value(v.id);
    if (!x) return std::nullopt;
    sum += c * *x;
  }
  return sum;
}

std::vector<Var> LinExpr::vars() const {
  std::vector<Var> out;
  out.reserve(terms_.size());
  for (const auto& [v, _] : terms_) out.push_back(v);
  return out;
}

bool operator==(const LinExpr& a, const LinExpr& b) {
  return a.constant_ == b.constant_ && a.same_coeffs(b);
}

bool LinExpr::same_coeffs(const LinExpr& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].first.id != o.terms_[i].first.id) return false;
    if (terms_[i].second != o.terms_[i].second) return false;
  }
  return true;
}

std::string to_string(const LinExpr& e) { return to_string(e.to_term()); }

}  // namespace rru
