#pragma once

#include <cstddef>
#include <vector>

#include "rru/linexpr.hpp"

namespace rru::detail {

/// Conjunction of `e <= 0`, `e == 0` and `e != 0` atoms over the integers.
struct LinSystem {
  std::vector<LinExpr> le;
  std::vector<LinExpr> eq;
  std::vector<LinExpr> ne;
};

/// Turns `e <= 0` into its integer-tightened form. Returns false if the
/// atom is a constant contradiction.
bool tighten_le(LinExpr& e);

/// Integer satisfiability. Fourier-Motzkin with tightening decides the
/// real shadow; a bounded back-substitution search then looks for an
/// integer witness. When the search is inconclusive (unbounded ranges or
/// budget exhausted) the shadow verdict is returned.
bool integer_satisfiable(const LinSystem& sys, std::size_t budget = 200000);

}  // namespace rru::detail
