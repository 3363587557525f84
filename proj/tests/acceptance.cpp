// Acceptance checks: one PASS/FAIL line per criterion.

#include <bit>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "oracle.hpp"
#include "rru/bench.hpp"
#include "rru/store.hpp"
#include "rru/syntax.hpp"
#include "rru/transform.hpp"
#include "support.hpp"

using namespace rru;
using namespace rru::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::uint64_t floor_log2(std::uint64_t n) { return std::bit_width(n) - 1; }

bool is_pow2(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

bool variant(const Rule& a, const std::string& text) { return alpha_equivalent(a, parse_rule(text)); }

std::string fmt(double v, int prec = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

Int sum_constant(std::size_t i) {
  Int p = Int(1) << i;
  return (p / 2) * (p - 1);
}

std::string rev_level_text(std::size_t i) {
  const std::size_t m = std::size_t{1} << i;
  std::string head, seg;
  for (std::size_t j = m; j >= 1; --j) head += "X" + std::to_string(j) + ",";
  for (std::size_t j = 1; j <= m; ++j) seg += (j > 1 ? "," : "") + ("X" + std::to_string(j));
  return "r([" + head.substr(0, head.size() - 1) + "|A],D) <=> r(A,B), a(B,[" + seg + "],D).";
}

Verdict golden_sum() {
  Verdict v;
  const auto t0 = Clock::now();
  UnfoldLadder l = repeated_unfold(*sum_program().find("rec"), 25);
  if (l.k() != 25) {
    v.fail("ladder stopped at level " + std::to_string(l.k()));
    return v;
  }
  const char* listing[] = {
      "sum(N,S) <=> N > 2 | S := 2*N-1+S1, sum(N-2,S1).",
      "sum(N,S) <=> N > 4 | S := 4*N-6+S1, sum(N-4,S1).",
      "sum(N,S) <=> N > 8 | S := 8*N-28+S1, sum(N-8,S1).",
  };
  for (std::size_t i = 1; i <= 3; ++i)
    if (!variant(l.level(i), listing[i - 1])) v.fail("level " + std::to_string(i) + ": " + print_rule(l.level(i)));
  for (std::size_t i = 1; i <= 25; ++i) {
    const Int p = Int(1) << i;
    const std::string text = "sum(N,S) <=> N > " + p.str() + " | S := " + p.str() + "*N-" +
                             sum_constant(i).str() + "+S1, sum(N-" + p.str() + ",S1).";
    if (!variant(l.level(i), text)) v.fail("level " + std::to_string(i) + ": " + print_rule(l.level(i)));
  }
  const std::string top = print_rule(l.level(25));
  if (top.find("33554432*N-562949936644096+") == std::string::npos) v.fail("level 25: " + top);
  const double secs = seconds_since(t0);
  if (secs >= 10) v.fail("took " + fmt(secs) + " s");
  if (v.pass) v.detail = "levels 1-25 match, level 25 constant 562949936644096, " + fmt(secs) + " s";
  return v;
}

Verdict golden_reversal() {
  Verdict v;
  UnfoldLadder l = repeated_unfold(*rev_program().find("cons"), 10);
  if (l.k() != 10) {
    v.fail("ladder stopped at level " + std::to_string(l.k()));
    return v;
  }
  const char* listing[] = {
      "r([D,C|A],E) <=> r(A,B), a(B,[C,D],E).",
      "r([F,E,D,C|A],G) <=> r(A,B), a(B,[C,D,E,F],G).",
      "r([J,I,H,G,F,E,D,C|A],K) <=> r(A,B), a(B,[C,D,E,F,G,H,I,J],K).",
  };
  for (std::size_t i = 1; i <= 3; ++i)
    if (!variant(l.level(i), listing[i - 1])) v.fail("level " + std::to_string(i) + ": " + print_rule(l.level(i)));
  for (std::size_t i = 4; i <= 10; ++i)
    if (!variant(l.level(i), rev_level_text(i))) v.fail("level " + std::to_string(i) + " shape differs");
  const std::size_t consumed = list_view(l.level(10).head.arg(0)).elems.size();
  if (consumed != 1024) v.fail("level 10 head consumes " + std::to_string(consumed));
  if (v.pass) v.detail = "levels 1-3 match the listing, level 10 head consumes 1024 elements";
  return v;
}

Verdict semantic_preservation() {
  Verdict v;
  const std::vector<std::string> names = {"original", "rule-order", "recursionless", "unbounded"};
  auto sums = make_configs(sum_program(), "rec", 512, "sum($N,R)", names);
  auto revs = make_configs(rev_program(), "cons", 512, "r($L,R)", names);
  std::uint64_t runs = 0;
  for (std::uint64_t n = 1; n <= 512; ++n) {
    const std::string s = "R = " + std::to_string(n * (n + 1) / 2);
    const std::string r = "R = " + reversed_text(n);
    for (const auto& c : sums) {
      RunResult res = run_config(c, n);
      ++runs;
      if (!res.ok() || res.answer_text() != s)
        v.fail(c.name + " sum n=" + std::to_string(n) + ": " + outcome_name(res.outcome) + " " +
               res.answer_text());
    }
    for (const auto& c : revs) {
      RunResult res = run_config(c, n);
      ++runs;
      if (!res.ok() || res.answer_text() != r)
        v.fail(c.name + " reversal n=" + std::to_string(n) + ": " + outcome_name(res.outcome));
    }
  }
  if (v.pass) v.detail = std::to_string(runs) + " runs, all answers equal the oracles";
  return v;
}

Verdict lemma1_bound() {
  Verdict v;
  auto cs = make_configs(sum_program(), "rec", 4096, "sum($N,R)", {"rule-order"});
  std::string clause2_counter, pow2_depth_counter;
  std::uint64_t clause2_checked = 0, clause2_violations = 0, pow2_depth_checked = 0;
  for (std::uint64_t n = 1; n <= 4096; ++n) {
    RunResult r = run_config(cs[0], n);
    const std::uint64_t rec = r.stats.recursive_applications;
    if (!r.ok()) v.fail("n=" + std::to_string(n) + ": " + outcome_name(r.outcome));
    if (rec > floor_log2(n) + 1)
      v.fail("n=" + std::to_string(n) + ": " + std::to_string(rec) + " recursive applications");
    if (is_pow2(n + 1) && n + 1 >= 2) {
      ++clause2_checked;
      if (rec != 1) ++clause2_violations;
      if (rec != 1 && (clause2_counter.empty() || n == 4095))
        clause2_counter = "n=" + std::to_string(n) + " needs " + std::to_string(rec);
    }
    if (n >= 2 && is_pow2(n - 1)) {
      ++pow2_depth_checked;
      if (rec != 1 && pow2_depth_counter.empty())
        pow2_depth_counter = "n=" + std::to_string(n) + " needs " + std::to_string(rec);
    }
  }
  const std::string variant_note =
      "; depth a power of two (n-1 = 2^j): " +
      (pow2_depth_counter.empty() ? "exactly 1 for all " + std::to_string(pow2_depth_checked)
                                     : "counterexample " + pow2_depth_counter);
  if (!clause2_counter.empty())
    v.fail("bound holds for n=1..4096, but 'exactly 1 for n+1 a power of two' fails for " +
           std::to_string(clause2_violations) + " of " + std::to_string(clause2_checked) +
           " such n, e.g. " + clause2_counter + " recursive applications" + variant_note);
  if (v.pass)
    v.detail = "bound holds for n=1..4096; exactly 1 for all " + std::to_string(clause2_checked) +
               " n with n+1 a power of two" + variant_note;
  return v;
}

Verdict lemma2_ledger() {
  Verdict v;
  auto cs = make_configs(sum_program(), "rec", 4096, "sum($N,R)", {"recursionless"});
  const std::uint64_t base = 2 * (floor_log2(4096) + 1);
  for (std::uint64_t n = 1; n <= 4096; ++n) {
    RunResult r = run_config(cs[0], n);
    if (!r.ok()) v.fail("n=" + std::to_string(n) + ": " + outcome_name(r.outcome));
    const std::uint64_t limit = base + r.stats.applications;
    if (r.stats.rule_attempts > limit)
      v.fail("n=" + std::to_string(n) + ": " + std::to_string(r.stats.rule_attempts) +
             " attempts > " + std::to_string(limit));
  }
  if (v.pass) v.detail = "attempts <= 26 + applications for n=1..4096";
  return v;
}

struct Trends {
  Verdict verdict;
  Verdict wall;
};

Trends complexity_trends() {
  Trends out;
  Verdict& v = out.verdict;
  const auto t0 = Clock::now();
  std::ostringstream detail;
  auto within = [](double x, double target) { return std::abs(x - target) <= 0.15; };

  // Summation, fixed bound 2^20, n in 2^10..2^13.
  auto sums = make_configs(sum_program(), "rec", std::uint64_t{1} << 20, "sum($N,R)",
                           {"original", "recursionless"});
  BenchOptions so;
  so.buckets.lo = 1024;
  so.buckets.hi = 8192;
  so.buckets.width = 1024;
  so.stride = 8;
  BenchReport sr = bench(sums, so);
  if (!sr.ok()) v.fail("sum answers disagree: " + sr.mismatches.front());
  const double s_orig = sr.slopes.at("original"), s_recl = sr.slopes.at("recursionless");
  if (!within(s_orig, 1.0)) v.fail("original sum slope " + fmt(s_orig));
  if (!within(s_recl, 0.0)) v.fail("recursionless sum slope " + fmt(s_recl));
  detail << "sum slopes original " << fmt(s_orig) << ", recursionless " << fmt(s_recl);

  // Reversal, bound 2^10, lengths 128..1929. The quadratic original is
  // sampled; the transformed programs run on every length, because a stride
  // that divides the bucket width aliases with the power-of-two sawtooth.
  auto revs = make_configs(rev_program(), "cons", 1024, "r($L,R)",
                           {"original", "rule-order", "recursionless"});
  BenchOptions ro;
  ro.buckets.lo = 128;
  ro.buckets.hi = 1929;
  ro.buckets.width = 256;
  std::string exact_fail, linear_fail;
  ro.on_query = [&](const BenchConfig& c, std::uint64_t n, const RunResult& r) {
    if (c.name == "original") {
      if (r.stats.append_cost != n * (n - 1) / 2 && exact_fail.empty())
        exact_fail = "n=" + std::to_string(n) + ": " + std::to_string(r.stats.append_cost);
    } else if (r.stats.append_cost > n && linear_fail.empty()) {
      linear_fail = c.name + " n=" + std::to_string(n) + ": " + std::to_string(r.stats.append_cost);
    }
  };
  BenchOptions sampled = ro;
  sampled.stride = 32;
  BenchReport rr = bench({revs[0], revs[1]}, sampled);
  BenchReport rt = bench({revs[1], revs[2]}, ro);
  if (!rr.ok()) v.fail("reversal answers disagree: " + rr.mismatches.front());
  if (!rt.ok()) v.fail("reversal answers disagree: " + rt.mismatches.front());
  if (!exact_fail.empty()) v.fail("original reversal append units differ from n(n-1)/2 at " + exact_fail);
  if (!linear_fail.empty()) v.fail("transformed reversal exceeds n append units at " + linear_fail);
  const double r_orig = rr.slopes.at("original");
  if (!within(r_orig, 2.0)) v.fail("original reversal slope " + fmt(r_orig));
  detail << "; reversal slopes original " << fmt(r_orig);
  for (const char* c : {"rule-order", "recursionless"}) {
    const double s = rt.slopes.at(c);
    if (!within(s, 1.0)) v.fail(std::string(c) + " reversal slope " + fmt(s));
    detail << ", " << c << " " << fmt(s);
  }
  const double secs = seconds_since(t0);
  if (secs >= 60) v.fail("bench suite took " + fmt(secs) + " s");
  detail << "; " << fmt(secs, 1) << " s";
  if (v.pass) v.detail = detail.str();
  else v.detail += " (" + detail.str() + ")";

  // Wall-clock spread across buckets.
  auto spread = [&](const std::string& c) {
    double lo = 1e300, hi = 0;
    for (const auto* row : sr.rows_of(c)) {
      lo = std::min(lo, row->mean_wall_ms());
      hi = std::max(hi, row->mean_wall_ms());
    }
    return lo > 0 ? hi / lo : 0.0;
  };
  const double rl = spread("recursionless"), og = spread("original");
  out.wall.pass = rl < 3.0 && og > 5.0;
  out.wall.detail = "max/min bucket mean wall time: recursionless " + fmt(rl, 2) + "x, original " +
                    fmt(og, 2) + "x";
  return out;
}

Verdict simplification_preserves() {
  Verdict v;
  std::mt19937 rng(20181);
  std::uint64_t compared = 0, rules = 0;

  UnfoldLadder ls = repeated_unfold(*sum_program().find("rec"), 25);
  for (std::size_t i = 0; i < ls.k(); ++i) {
    ++rules;
    const std::uint64_t lo = (std::uint64_t{1} << (i + 1)) + 1;
    for (int q = 0; q < 100; ++q) {
      const std::uint64_t n = lo + rng() % (lo * 3);
      const std::string query = "sum(" + std::to_string(n) + ",S)";
      const std::string a = one_step_state(ls.unsimplified[i], query);
      const std::string b = one_step_state(ls.levels[i], query);
      ++compared;
      if (a != b || a == "not applicable")
        v.fail("sum level " + std::to_string(i + 1) + " n=" + std::to_string(n) + ": " + a + " vs " + b);
    }
  }

  Program rev = rev_program();
  UnfoldLadder lr = repeated_unfold(*rev.find("cons"), 10);
  TransformConfig tc;
  tc.levels = 10;
  Program cont = transform(rev, tc).program;
  for (std::size_t i = 0; i < lr.k(); ++i) {
    ++rules;
    const std::uint64_t lo = std::uint64_t{1} << (i + 1);
    for (int q = 0; q < 100; ++q) {
      const std::uint64_t n = lo + rng() % (lo + 16);
      const std::string query = "r(" + list_text(n) + ",R)";
      const std::string a = apply_then_run(lr.unsimplified[i], cont, query);
      const std::string b = apply_then_run(lr.levels[i], cont, query);
      ++compared;
      if (a != b || a != "success: R = " + reversed_text(n))
        v.fail("reversal level " + std::to_string(i + 1) + " n=" + std::to_string(n));
    }
  }
  if (v.pass)
    v.detail = std::to_string(rules) + " rules, " + std::to_string(compared) +
               " queries: unfolded and simplified rules agree";
  return v;
}

Verdict entailment_oracle() {
  Verdict v;
  std::mt19937 rng(8);
  std::uint64_t bounded = 0, agree = 0, total = 0, sound = 0;
  for (int i = 0; i < 1600; ++i) {
    LinearSystem sys = LinearSystem::random(rng, i % 4 != 3);
    GridOracle oracle(sys);
    const bool solver = ConstraintStore::normalize(sys.constraints).satisfiable();
    ++total;
    if (!oracle.satisfiable() || solver) ++sound;
    else v.fail("oracle SAT but solver UNSAT: " + sys.text());
    if (sys.bounded) {
      ++bounded;
      if (solver == oracle.satisfiable()) ++agree;
      else v.fail("bounded disagreement: " + sys.text());
    }
  }
  if (bounded < 1000) v.fail("only " + std::to_string(bounded) + " bounded systems");
  if (v.pass)
    v.detail = std::to_string(agree) + "/" + std::to_string(bounded) +
               " bounded systems agree; oracle-SAT implies solver-SAT in " + std::to_string(sound) +
               "/" + std::to_string(total);
  return v;
}

Verdict unfold_conditions() {
  Verdict v;
  Program p = rev_program();
  const Rule& r = *p.find("cons");
  VarSupply s;
  avoid(s, r);
  Rule copy = rename_apart(r, s);
  UnfoldResult plain = unfold(r, copy);
  if (plain) v.fail("unfold succeeded without head flattening");
  else if (plain.failed_condition != 1) v.fail("failed condition " + std::to_string(plain.failed_condition));
  UnfoldResult flat = unfold(r, flatten_head(copy, s));
  if (!flat) v.fail("unfold with head flattening failed: " + flat.diagnostic);
  if (v.pass) v.detail = "without flattening: " + plain.diagnostic + "; with flattening: success";
  return v;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* title;
    std::function<Verdict()> run;
    bool gating;
  };
  Verdict wall;
  std::vector<Entry> entries = {
      {1, "golden sum ladder", golden_sum, true},
      {2, "golden reversal ladder", golden_reversal, true},
      {3, "semantic preservation", semantic_preservation, true},
      {4, "logarithmic recursive applications", lemma1_bound, true},
      {5, "recursionless attempt ledger", lemma2_ledger, true},
      {6, "complexity trends",
       [&] {
         Trends t = complexity_trends();
         wall = t.wall;
         return t.verdict;
       },
       true},
      {7, "simplification preserves behavior", simplification_preserves, true},
      {8, "entailment oracle", entailment_oracle, true},
      {9, "unfold side conditions", unfold_conditions, true},
      {10, "wall-clock trend (informative)", [&] { return wall; }, false},
  };
  int failures = 0;
  for (const auto& e : entries) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = e.run();
    } catch (const std::exception& ex) {
      v.fail(std::string("exception: ") + ex.what());
    }
    if (!v.pass && e.gating) ++failures;
    std::cout << "criterion " << e.id << " " << (v.pass ? "PASS" : "FAIL") << " " << e.title
              << ": " << v.detail << " [" << fmt(seconds_since(t0), 2) << " s]" << std::endl;
  }
  std::cout << (failures ? "acceptance: " + std::to_string(failures) + " gating criteria failed"
                         : std::string("acceptance: all gating criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
