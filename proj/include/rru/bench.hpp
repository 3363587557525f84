#pragma once

// Benchmark harness and Lemma-style verification ledger over the program
// variants produced by the transformer.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rru/engine.hpp"
#include "rru/transform.hpp"

namespace rru {

/// One program configuration under measurement.
struct BenchConfig {
  std::string name;
  Program program;
  /// Query text; `$N` is replaced by the input size, `$L` by the list
  /// [1,...,n].
  std::string query_template;
  /// Calls to `from` in the query are redirected to `to` (ladder entry).
  Symbol from, to;
  /// Recursive applications are bounded by floor(log2 n) + 1.
  bool log_bounded = false;
  /// Every rule fires at most once (recursionless programs).
  bool once_per_rule = false;
};

/// Input range [lo, hi] split into buckets. With `width` set, buckets have
/// that width; the last bucket absorbs the remainder.
struct Buckets {
  std::uint64_t lo = 1, hi = 1;
  std::size_t count = 7;
  std::optional<std::uint64_t> width;

  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges() const;
};

struct BenchOptions {
  Buckets buckets;
  /// Only every stride-th input of a bucket is run, starting at its low end.
  std::uint64_t stride = 1;
  RunLimits limits;
  /// Called after every run.
  std::function<void(const BenchConfig&, std::uint64_t n, const RunResult&)> on_query;
};

struct BenchRow {
  std::string config;
  std::uint64_t bucket_lo = 0, bucket_hi = 0;
  std::uint64_t queries = 0;
  std::uint64_t builtin_cost = 0;
  std::uint64_t attempts = 0;
  std::uint64_t applications = 0;
  double wall_ms = 0;
  /// Runs that did not succeed (limit exceeded, stuck, ...).
  std::uint64_t flagged = 0;

  double mean_cost() const { return queries ? double(builtin_cost) / double(queries) : 0.0; }
  double mean_wall_ms() const { return queries ? wall_ms / double(queries) : 0.0; }
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::map<std::string, double> slopes;
  /// Inputs where a configuration disagreed with the first one.
  std::vector<std::string> mismatches;

  bool ok() const { return mismatches.empty(); }
  std::vector<const BenchRow*> rows_of(const std::string& config) const;
  std::string csv(bool with_wall = true) const;
  std::string markdown() const;
};

/// Least-squares slope of ln(y) over ln(x); points with y <= 0 are skipped.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

std::string instantiate_query(const std::string& tmpl, std::uint64_t n);

/// Runs one query of a configuration.
RunResult run_config(const BenchConfig& c, std::uint64_t n, const RunLimits& limits = {},
                     bool trace = false);

BenchReport bench(const std::vector<BenchConfig>& configs, const BenchOptions& opts);

/// Names accepted by make_configs.
const std::vector<std::string>& config_names();

/// Builds named configurations of `p` for the recursive rule `rule`
/// unfolded up to `bound`. "hand-optimized" needs `hand`.
std::vector<BenchConfig> make_configs(const Program& p, const std::string& rule,
                                      std::uint64_t bound, const std::string& query_template,
                                      const std::vector<std::string>& names,
                                      const Program* hand = nullptr);

struct VerifyOptions {
  std::uint64_t lo = 1, hi = 1;
  std::uint64_t bound = 2;
  RunLimits limits;
};

struct VerifyReport {
  std::uint64_t checked = 0;
  std::vector<std::string> failures;  // first counterexample per check
  std::vector<std::string> ledger;    // one line per check

  bool ok() const { return failures.empty(); }
};

/// For every n: answers agree across configurations; recursive
/// applications stay within floor(log2 n) + 1 for log-bounded
/// configurations; recursionless runs fire each rule at most once and
/// try at most 2 (floor(log2 N) + 1) + applications rules.
VerifyReport verify(const std::vector<BenchConfig>& configs, const VerifyOptions& opts);

}  // namespace rru
