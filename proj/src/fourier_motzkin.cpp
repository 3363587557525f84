#include "fourier_motzkin.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>

namespace rru::detail {

bool tighten_le(LinExpr& e) {
  if (e.is_constant()) return e.constant() <= 0;
  Int g = e.coeff_gcd();
  if (g > 1) {
    LinExpr t(ceil_div(e.constant(), g));
    for (const auto& [v, c] : e.terms()) t.add_term(v, c / g);
    e = std::move(t);
  }
  return true;
}

namespace {

constexpr std::size_t kMaxRows = 20000;
constexpr int kWindow = 64;

// Keyed by coefficient vector; keeps the strongest constant.
class RowSet {
 public:
  // Returns false on a constant contradiction.
  bool add(LinExpr e) {
    if (!tighten_le(e)) return false;
    if (e.is_constant()) return true;
    std::vector<std::pair<VarId, Int>> key;
    key.reserve(e.size());
    for (const auto& [v, c] : e.terms()) key.emplace_back(v.id, c);
    auto it = rows_.find(key);
    if (it == rows_.end()) {
      rows_.emplace(std::move(key), std::move(e));
    } else if (e.constant() > it->second.constant()) {
      it->second = std::move(e);
    }
    return true;
  }
  std::vector<LinExpr> take() {
    std::vector<LinExpr> out;
    out.reserve(rows_.size());
    for (auto& [_, e] : rows_) out.push_back(std::move(e));
    rows_.clear();
    return out;
  }
  std::size_t size() const { return rows_.size(); }

 private:
  std::map<std::vector<std::pair<VarId, Int>>, LinExpr> rows_;
};

struct Stage {
  Var var;
  std::vector<LinExpr> rows;  // system before eliminating `var`
};

struct Search {
  std::vector<Stage> stages;  // in elimination order
  std::vector<LinExpr> ne;
  std::unordered_map<VarId, Int> value;
  std::size_t budget = 0;
  bool incomplete = false;

  std::optional<Int> eval(const LinExpr& e, VarId skip, Int* coef) const {
    Int sum = e.constant();
    for (const auto& [v, c] : e.terms()) {
      if (v.id == skip) {
        *coef = c;
        continue;
      }
      auto it = value.find(v.id);
      if (it == value.end()) return std::nullopt;
      sum += c * it->second;
    }
    return sum;
  }

  bool ne_ok() const {
    for (const auto& e : ne) {
      Int sum = e.constant();
      bool all = true;
      for (const auto& [v, c] : e.terms()) {
        auto it = value.find(v.id);
        if (it == value.end()) {
          all = false;
          break;
        }
        sum += c * it->second;
      }
      if (all && sum == 0) return false;
    }
    return true;
  }

  // Assigns stages[k], stages[k-1], ..., stages[0].
  bool assign(std::size_t k) {
    const Stage& st = stages[k];
    std::optional<Int> lo, hi;
    for (const auto& row : st.rows) {
      Int coef = 0;
      auto rest = eval(row, st.var.id, &coef);
      if (!rest) continue;  // mentions a variable eliminated later
      if (coef == 0) {
        if (*rest > 0) return false;
        continue;
      }
      // coef*x + rest <= 0
      if (coef > 0) {
        Int b = floor_div(-*rest, coef);
        if (!hi || b < *hi) hi = b;
      } else {
        Int b = ceil_div(*rest, -coef);
        if (!lo || b > *lo) lo = b;
      }
    }
    if (lo && hi && *lo > *hi) return false;

    // Candidate k-th value: lo + k, hi - k, or 0, 1, -1, 2, ...
    Int count;
    if (lo && hi) {
      Int span = *hi - *lo;
      if (span >= Int(budget)) incomplete = true;
      count = span + 1;
    } else {
      incomplete = true;
      count = kWindow;
    }
    for (Int i = 0; i < count; ++i) {
      Int x;
      if (lo) {
        x = *lo + i;
      } else if (hi) {
        x = *hi - i;
      } else {
        x = (i % 2 == 0) ? Int(-(i / 2)) : Int(i / 2 + 1);
      }
      if (budget == 0) {
        incomplete = true;
        break;
      }
      --budget;
      value[st.var.id] = x;
      if (ne_ok() && (k == 0 || assign(k - 1))) return true;
    }
    value.erase(st.var.id);
    return false;
  }
};

}  // namespace

bool integer_satisfiable(const LinSystem& sys, std::size_t budget) {
  std::vector<LinExpr> le = sys.le;
  std::vector<LinExpr> eq = sys.eq;
  std::vector<LinExpr> ne = sys.ne;

  // Equalities: gcd test, then eliminate unit-coefficient variables.
  for (;;) {
    bool progress = false;
    for (std::size_t i = 0; i < eq.size(); ++i) {
      LinExpr& e = eq[i];
      if (e.is_constant()) {
        if (e.constant() != 0) return false;
        eq.erase(eq.begin() + static_cast<std::ptrdiff_t>(i));
        progress = true;
        break;
      }
      Int g = e.coeff_gcd();
      if (e.constant() % g != 0) return false;
      std::optional<Var> unit;
      Int unit_coef;
      for (const auto& [v, c] : e.terms()) {
        if (c == 1 || c == -1) {
          unit = v;
          unit_coef = c;
          break;
        }
      }
      if (!unit) continue;
      // x = -(e - c*x)/c
      LinExpr rest = e;
      rest.add_term(*unit, -unit_coef);
      LinExpr def = rest * Int(-unit_coef);  // c = +-1 so 1/c == c
      const VarId x = unit->id;
      eq.erase(eq.begin() + static_cast<std::ptrdiff_t>(i));
      for (auto& f : eq) f = f.substitute(x, def);
      for (auto& f : le) f = f.substitute(x, def);
      for (auto& f : ne) f = f.substitute(x, def);
      progress = true;
      break;
    }
    if (!progress) break;
  }
  for (const auto& e : eq) {
    le.push_back(e);
    le.push_back(-e);
  }

  std::vector<LinExpr> ne_live;
  for (auto& e : ne) {
    if (e.is_constant()) {
      if (e.constant() == 0) return false;
      continue;
    }
    if (e.constant() % e.coeff_gcd() != 0) continue;  // never zero
    ne_live.push_back(std::move(e));
  }

  RowSet rows;
  for (auto& e : le)
    if (!rows.add(std::move(e))) return false;

  std::map<VarId, Var> all_vars;
  std::vector<LinExpr> cur = rows.take();
  for (const auto& e : cur)
    for (const auto& [v, _] : e.terms()) all_vars.emplace(v.id, v);
  for (const auto& e : ne_live)
    for (const auto& [v, _] : e.terms()) all_vars.emplace(v.id, v);

  Search search;
  std::map<VarId, Var> remaining = all_vars;
  bool shadow_exact = true;
  while (!remaining.empty()) {
    // Pick the variable with the fewest generated combinations.
    VarId best = remaining.begin()->first;
    std::size_t best_cost = SIZE_MAX;
    for (const auto& [id, _] : remaining) {
      std::size_t pos = 0, neg = 0;
      for (const auto& e : cur) {
        Int c = e.coeff(id);
        if (c > 0) ++pos;
        else if (c < 0) ++neg;
      }
      std::size_t cost = pos * neg;
      if (cost < best_cost) {
        best_cost = cost;
        best = id;
      }
    }
    Var x = remaining.at(best);
    remaining.erase(best);
    search.stages.push_back(Stage{x, cur});

    std::vector<const LinExpr*> pos, neg;
    RowSet next;
    for (const auto& e : cur) {
      Int c = e.coeff(x.id);
      if (c > 0) pos.push_back(&e);
      else if (c < 0) neg.push_back(&e);
      else next.add(e);
    }
    for (const LinExpr* p : pos) {
      const Int a = p->coeff(x.id);
      for (const LinExpr* n : neg) {
        const Int b = -n->coeff(x.id);
        if (!next.add(*p * b + *n * a)) return false;
      }
      if (next.size() > kMaxRows) {
        shadow_exact = false;
        break;
      }
    }
    if (!shadow_exact) break;
    cur = next.take();
  }
  if (!shadow_exact) return true;
  if (search.stages.empty()) return true;

  search.ne = std::move(ne_live);
  search.budget = budget;
  if (search.assign(search.stages.size() - 1)) return true;
  // The shadow is feasible; without a complete search, trust it.
  return search.incomplete;
}

}  // namespace rru::detail
