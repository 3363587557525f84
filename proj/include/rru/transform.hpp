#pragma once

// Unfolding, repeated recursion unfolding and the program variants built
// from an unfolding ladder.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rru/rule.hpp"
#include "rru/simplify.hpp"

namespace rru {

/// Replaces the non-variable head arguments at `positions` by fresh
/// variables and adds the corresponding equalities in front of the guard.
Rule flatten_head(const Rule& r, const std::vector<std::size_t>& positions, VarSupply& supply);
/// Flattens every non-variable head argument.
Rule flatten_head(const Rule& r, VarSupply& supply);

/// Index of the single body call to `v`'s head symbol. Throws
/// Error(MultipleRecursiveCalls) when there is not exactly one.
std::size_t recursive_call_index(const Rule& r, const Rule& v);

/// Head argument positions of `v` that keep the recursive call of `r`
/// from being an instance of `v`'s head.
std::vector<std::size_t> blocking_positions(const Rule& r, const Rule& v);

struct UnfoldResult {
  std::optional<Rule> rule;
  int failed_condition = 0;  // 1: call is no instance, 2: shared variables, 3: unsatisfiable
  std::string diagnostic;
  Substitution theta;

  explicit operator bool() const { return rule.has_value(); }
};

/// Unfolds the recursive call of `r` with `v`. The rules must not share
/// variables.
UnfoldResult unfold(const Rule& r, const Rule& v);

struct UnfoldLadder {
  Rule base;                            // level 0
  std::vector<Rule> levels;             // levels 1..k, simplified
  std::vector<Rule> unsimplified;       // the unfolded rule behind each level
  std::vector<SimplifyReport> reports;  // one per level
  std::vector<bool> flattened;          // head flattening was needed
  std::vector<std::string> warnings;

  std::size_t k() const { return levels.size(); }
  /// Level i (0 is the base rule).
  const Rule& level(std::size_t i) const { return i == 0 ? base : levels[i - 1]; }
  /// Original recursive steps covered by one application of level i.
  static std::uint64_t coverage(std::size_t i) { return std::uint64_t{1} << i; }
};

/// floor(log2(bound)); bound must be at least 2.
std::size_t levels_for_bound(std::uint64_t bound);

/// Builds levels 1..`levels`. Stops early, with a warning, when a level
/// cannot be unfolded.
UnfoldLadder repeated_unfold(const Rule& r0, std::size_t levels,
                             const SimplifyOptions& opts = {});

/// Name of level i of a ladder built from a rule named `base`.
std::string level_rule_name(const std::string& base, std::size_t i);

/// [r_k, ..., r_1, r_0, remaining rules in their original order].
Program assemble_rule_order(const Program& p, const UnfoldLadder& ladder);

/// Symbol of level i in the recursionless program: functor name plus i.
Symbol level_symbol(Symbol functor, std::size_t i);

/// Each level i gets its own symbol c_i and calls c_{i-1} (c_{-1} is the
/// original symbol, defined only by `base_rules`). A guard-free
/// fall-through c_i -> c_{i-1} follows each level.
Program recursionless(const UnfoldLadder& ladder, const std::vector<Rule>& base_rules);

/// Adds, before the top level, a copy of it calling its own symbol.
Program unbounded_cap(const Program& recless, const UnfoldLadder& ladder);

enum class TransformMode { RuleOrder, Recursionless, Unbounded };
const char* mode_name(TransformMode m);
std::optional<TransformMode> parse_mode(std::string_view s);

struct TransformConfig {
  std::string rule;  // empty: the program's only recursive rule
  std::optional<std::size_t> levels;
  std::uint64_t bound = 0;  // used when `levels` is unset
  TransformMode mode = TransformMode::RuleOrder;
};

struct TransformOutput {
  Program program;
  UnfoldLadder ladder;
  /// Symbol a query has to call, e.g. sum2 for a recursionless program.
  Symbol entry;
};

TransformOutput transform(const Program& p, const TransformConfig& config);

/// Rules of `p` other than the named one.
std::vector<Rule> rules_except(const Program& p, const std::string& name);

}  // namespace rru
