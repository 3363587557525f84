#pragma once

// Rule simplification: a fixed-point pipeline of equivalence-preserving
// rewrite laws over head, guard and body.

#include <string>
#include <unordered_set>
#include <vector>

#include "rru/rule.hpp"

namespace rru {

struct LawStep {
  std::string law;
  std::string before;
  std::string after;
};

struct SimplifyReport {
  std::vector<LawStep> steps;
  std::vector<Var> eliminated;
  std::vector<std::string> eliminated_names;

  /// Human-readable derivation log.
  std::string to_string() const;
};

struct SimplifyResult {
  Rule rule;
  SimplifyReport report;
};

struct SimplifyOptions {
  std::vector<InterpretedDef> interpreted = Program::default_interpreted();
  /// Law names in application order; empty means the registry order.
  std::vector<std::string> order;
  std::size_t max_passes = 64;
};

/// Registry order: propagate-equalities, inline-arithmetic, guard,
/// fold-head, fuse-append, eliminate-locals.
const std::vector<std::string>& law_names();

SimplifyResult simplify_rule(const Rule& r, const SimplifyOptions& opts = {});

/// Merges append chains a(X,L1,Y), a(Y,L2,Z) with Y in `locals`, used
/// exactly twice, and L1, L2 closed lists into a(X,L1++L2,Z).
Goal fuse_append(const Goal& body, const std::unordered_set<VarId>& locals,
                 const std::vector<InterpretedDef>& interpreted = Program::default_interpreted());

/// Substitutes out local variables defined by a single equality or
/// assignment and drops unused local definitions. Head variables are kept.
Rule eliminate_locals(const Rule& r);

/// Canonical form of a linear guard atom: positive leading coefficient,
/// coprime coefficients, strict inequalities, constant on the right.
Builtin canonical_comparison(const LinCmp& c);

}  // namespace rru
