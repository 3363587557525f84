#include "rru/bench.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rru/error.hpp"
#include "rru/syntax.hpp"

namespace rru {

std::vector<std::pair<std::uint64_t, std::uint64_t>> Buckets::ranges() const {
  if (hi < lo) throw Error(ErrorKind::InvalidArgument, "empty input range");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  const std::uint64_t total = hi - lo + 1;
  if (width) {
    if (*width == 0) throw Error(ErrorKind::InvalidArgument, "bucket width must be positive");
    for (std::uint64_t a = lo; a <= hi; a += *width) {
      std::uint64_t b = a + *width - 1;
      if (b >= hi || hi - b < *width) {
        out.emplace_back(a, hi);
        break;
      }
      out.emplace_back(a, b);
    }
    return out;
  }
  const std::uint64_t n = std::max<std::uint64_t>(1, std::min<std::uint64_t>(count, total));
  const std::uint64_t w = total / n;
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t a = lo + i * w;
    const std::uint64_t b = i + 1 == n ? hi : a + w - 1;
    out.emplace_back(a, b);
  }
  return out;
}

std::vector<const BenchRow*> BenchReport::rows_of(const std::string& config) const {
  std::vector<const BenchRow*> out;
  for (const auto& r : rows)
    if (r.config == config) out.push_back(&r);
  return out;
}

std::string BenchReport::csv(bool with_wall) const {
  std::ostringstream os;
  os << "config,bucket_lo,bucket_hi,queries,builtin_cost,attempts,applications,wall_ms\n";
  for (const auto& r : rows) {
    os << r.config << ',' << r.bucket_lo << ',' << r.bucket_hi << ',' << r.queries << ','
       << r.builtin_cost << ',' << r.attempts << ',' << r.applications << ',';
    if (with_wall) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", r.wall_ms);
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

std::string BenchReport::markdown() const {
  std::vector<std::string> configs;
  for (const auto& r : rows)
    if (std::find(configs.begin(), configs.end(), r.config) == configs.end())
      configs.push_back(r.config);
  if (configs.empty()) return "";
  std::ostringstream os;
  const auto first = rows_of(configs.front());
  os << "| mean builtin cost |";
  for (const auto* r : first) os << ' ' << r->bucket_lo << '-' << r->bucket_hi << " |";
  os << " slope |\n|---|";
  for (std::size_t i = 0; i <= first.size(); ++i) os << "---|";
  os << '\n';
  char buf[64];
  for (const auto& c : configs) {
    os << "| " << c << " |";
    for (const auto* r : rows_of(c)) {
      std::snprintf(buf, sizeof buf, " %.1f%s |", r->mean_cost(), r->flagged ? " (!)" : "");
      os << buf;
    }
    auto it = slopes.find(c);
    std::snprintf(buf, sizeof buf, " %.3f |", it == slopes.end() ? 0.0 : it->second);
    os << buf << '\n';
  }
  os << "\n| mean wall ms |";
  for (const auto* r : first) os << ' ' << r->bucket_lo << '-' << r->bucket_hi << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < first.size(); ++i) os << "---|";
  os << '\n';
  for (const auto& c : configs) {
    os << "| " << c << " |";
    for (const auto* r : rows_of(c)) {
      std::snprintf(buf, sizeof buf, " %.4f |", r->mean_wall_ms());
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] <= 0 || y[i] <= 0) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return 0.0;
  const double d = double(n) * sxx - sx * sx;
  if (d == 0) return 0.0;
  return (double(n) * sxy - sx * sy) / d;
}

std::string instantiate_query(const std::string& tmpl, std::uint64_t n) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] == '$' && i + 1 < tmpl.size() && tmpl[i + 1] == 'N') {
      out += std::to_string(n);
      ++i;
    } else if (tmpl[i] == '$' && i + 1 < tmpl.size() && tmpl[i + 1] == 'L') {
      out += '[';
      for (std::uint64_t k = 1; k <= n; ++k) {
        if (k > 1) out += ',';
        out += std::to_string(k);
      }
      out += ']';
      ++i;
    } else {
      out += tmpl[i];
    }
  }
  return out;
}

namespace {

struct Prepared {
  const BenchConfig* config;
  Engine engine;
};

RunResult run_prepared(const Prepared& p, const std::string& query, const RunLimits& limits,
                       bool trace = false) {
  const BenchConfig& c = *p.config;
  VarSupply supply = p.engine.fresh_supply();
  ParsedGoal g = parse_goal(query, supply);
  if (c.from.valid() && c.to.valid() && c.from != c.to) {
    for (auto& a : g.goal) {
      if (!a.is_call() || !a.call().is_compound() || a.call().functor() != c.from) continue;
      const Term& t = a.call();
      a = Atom(Term::compound(c.to, std::vector<Term>(t.args().begin(), t.args().end())));
    }
  }
  return p.engine.run(p.engine.initial(g.goal, g.vars, supply), limits, trace);
}

std::vector<Prepared> prepare(const std::vector<BenchConfig>& configs) {
  std::vector<Prepared> out;
  for (const auto& c : configs) out.push_back({&c, Engine(c.program)});
  return out;
}

}  // namespace

RunResult run_config(const BenchConfig& c, std::uint64_t n, const RunLimits& limits, bool trace) {
  Prepared p{&c, Engine(c.program)};
  return run_prepared(p, instantiate_query(c.query_template, n), limits, trace);
}

BenchReport bench(const std::vector<BenchConfig>& configs, const BenchOptions& opts) {
  BenchReport report;
  const auto prepared = prepare(configs);
  const auto ranges = opts.buckets.ranges();
  const std::uint64_t stride = std::max<std::uint64_t>(1, opts.stride);

  std::vector<std::vector<BenchRow>> rows(configs.size());
  for (const auto& [a, b] : ranges) {
    for (std::size_t c = 0; c < configs.size(); ++c) {
      BenchRow row;
      row.config = configs[c].name;
      row.bucket_lo = a;
      row.bucket_hi = b;
      rows[c].push_back(row);
    }
    for (std::uint64_t n = a; n <= b; n += stride) {
      std::string reference;
      for (std::size_t c = 0; c < configs.size(); ++c) {
        const std::string query = instantiate_query(configs[c].query_template, n);
        const auto t0 = std::chrono::steady_clock::now();
        RunResult r = run_prepared(prepared[c], query, opts.limits);
        const auto t1 = std::chrono::steady_clock::now();
        BenchRow& row = rows[c].back();
        row.wall_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
        ++row.queries;
        row.builtin_cost += r.stats.builtin_cost();
        row.attempts += r.stats.rule_attempts;
        row.applications += r.stats.applications;
        if (!r.ok()) ++row.flagged;
        const std::string answer =
            std::string(outcome_name(r.outcome)) + ": " + (r.ok() ? r.answer_text() : "");
        if (c == 0) {
          reference = answer;
        } else if (answer != reference && report.mismatches.size() < 20) {
          report.mismatches.push_back(configs[c].name + " n=" + std::to_string(n) + ": " +
                                      answer + " vs " + configs[0].name + " " + reference);
        }
        if (opts.on_query) opts.on_query(configs[c], n, r);
      }
    }
  }

  for (std::size_t c = 0; c < configs.size(); ++c) {
    std::vector<double> xs, ys;
    for (const auto& row : rows[c]) {
      xs.push_back((double(row.bucket_lo) + double(row.bucket_hi)) / 2.0);
      ys.push_back(row.mean_cost());
    }
    report.slopes[configs[c].name] = loglog_slope(xs, ys);
  }
  for (std::size_t i = 0; i < ranges.size(); ++i)
    for (std::size_t c = 0; c < configs.size(); ++c) report.rows.push_back(rows[c][i]);
  return report;
}

const std::vector<std::string>& config_names() {
  static const std::vector<std::string> names = {"original", "rule-order", "recursionless",
                                                 "unbounded", "hand-optimized"};
  return names;
}

std::vector<BenchConfig> make_configs(const Program& p, const std::string& rule,
                                      std::uint64_t bound, const std::string& query_template,
                                      const std::vector<std::string>& names, const Program* hand) {
  Program prog = p;
  prog.infer_recursion();
  TransformConfig tc;
  tc.rule = rule;
  tc.bound = bound;
  std::optional<TransformOutput> ladder_out;
  auto ladder = [&]() -> const TransformOutput& {
    if (!ladder_out) ladder_out = transform(prog, tc);
    return *ladder_out;
  };

  std::vector<BenchConfig> out;
  for (const auto& name : names) {
    BenchConfig c;
    c.name = name;
    c.query_template = query_template;
    if (name == "original") {
      c.program = prog;
    } else if (name == "rule-order") {
      c.program = assemble_rule_order(prog, ladder().ladder);
      c.log_bounded = true;
    } else if (name == "recursionless" || name == "unbounded") {
      const TransformOutput& t = ladder();
      c.program = recursionless(t.ladder, rules_except(prog, t.ladder.base.name));
      if (name == "unbounded") c.program = unbounded_cap(c.program, t.ladder);
      c.program.interpreted = prog.interpreted;
      c.from = t.ladder.base.head.functor();
      c.to = level_symbol(c.from, t.ladder.k());
      c.log_bounded = name == "recursionless";
      c.once_per_rule = name == "recursionless";
    } else if (name == "hand-optimized") {
      if (!hand) throw Error(ErrorKind::InvalidArgument, "hand-optimized needs a program");
      c.program = *hand;
      c.program.infer_recursion();
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown configuration: " + name);
    }
    out.push_back(std::move(c));
  }
  return out;
}

VerifyReport verify(const std::vector<BenchConfig>& configs, const VerifyOptions& opts) {
  VerifyReport rep;
  const auto prepared = prepare(configs);
  const std::size_t log_bound = levels_for_bound(opts.bound);

  struct Check {
    std::string name;
    std::uint64_t passed = 0;
    bool failed = false;
  };
  std::vector<Check> checks = {{"answers agree"},
                               {"recursive applications <= floor(log2 n)+1"},
                               {"each rule applied at most once"},
                               {"attempts <= 2(floor(log2 N)+1) + applications"}};
  auto fail = [&](std::size_t k, const std::string& msg) {
    if (!checks[k].failed) rep.failures.push_back(checks[k].name + ": " + msg);
    checks[k].failed = true;
  };

  for (std::uint64_t n = opts.lo; n <= opts.hi; ++n) {
    ++rep.checked;
    std::string reference;
    const std::uint64_t lg = n == 0 ? 0 : std::uint64_t(std::bit_width(n) - 1);
    for (std::size_t c = 0; c < configs.size(); ++c) {
      const BenchConfig& cfg = configs[c];
      const std::string query = instantiate_query(cfg.query_template, n);
      RunResult r = run_prepared(prepared[c], query, opts.limits);
      const std::string answer =
          std::string(outcome_name(r.outcome)) + (r.ok() ? ": " + r.answer_text() : ": " + r.message);
      auto where = [&] { return cfg.name + " n=" + std::to_string(n) + " (" + answer + ")"; };
      if (c == 0) {
        reference = answer;
        if (!r.ok()) fail(0, where());
        else ++checks[0].passed;
      } else if (answer != reference) {
        fail(0, where() + " vs " + configs[0].name + " " + reference);
      } else {
        ++checks[0].passed;
      }
      if (cfg.log_bounded) {
        if (r.stats.recursive_applications > lg + 1)
          fail(1, where() + ": " + std::to_string(r.stats.recursive_applications) +
                      " recursive applications");
        else
          ++checks[1].passed;
      }
      if (cfg.once_per_rule) {
        if (r.stats.max_rule_applications() > 1)
          fail(2, where() + ": a rule fired " + std::to_string(r.stats.max_rule_applications()) +
                      " times");
        else
          ++checks[2].passed;
        const std::uint64_t limit = 2 * (log_bound + 1) + r.stats.applications;
        if (r.stats.rule_attempts > limit)
          fail(3, where() + ": " + std::to_string(r.stats.rule_attempts) + " attempts > " +
                      std::to_string(limit));
        else
          ++checks[3].passed;
      }
    }
  }
  for (const auto& c : checks) {
    if (c.passed == 0 && !c.failed) continue;
    rep.ledger.push_back(std::string(c.failed ? "FAIL " : "PASS ") + c.name + " (" +
                         std::to_string(c.passed) + " checks passed)");
  }
  return rep;
}

}  // namespace rru
