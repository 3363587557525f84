#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <functional>
#include <map>
#include <set>

#include "rru/error.hpp"
#include "rru/store.hpp"
#include "rru/syntax.hpp"
#include "rru/transform.hpp"
#include "support.hpp"

using namespace rru;
using namespace rru::testing;

namespace {

Int closed_form_constant(std::size_t i) {
  Int p = Int(1) << i;
  return (p / 2) * (p - 1);
}

std::string sum_level_text(std::size_t i) {
  const Int p = Int(1) << i;
  return "sum(N,S) <=> N > " + p.str() + " | S := " + p.str() + "*N-" +
         closed_form_constant(i).str() + "+T, sum(N-" + p.str() + ",T).";
}

bool variant(const Rule& a, const std::string& text) {
  const bool ok = alpha_equivalent(a, parse_rule(text));
  if (!ok) MESSAGE("got " << print_rule(a) << "  expected " << text);
  return ok;
}

// n-th reversal level: head [x_{2^i},...,x_1|A], appended segment [x_1,...,x_{2^i}].
std::string rev_level_text(std::size_t i) {
  const std::size_t m = std::size_t{1} << i;
  std::string head, seg;
  for (std::size_t j = m; j >= 1; --j) head += "X" + std::to_string(j) + ",";
  for (std::size_t j = 1; j <= m; ++j) seg += (j > 1 ? "," : "") + ("X" + std::to_string(j));
  return "r([" + head.substr(0, head.size() - 1) + "|A],D) <=> r(A,B), a(B,[" + seg + "],D).";
}

std::uint64_t floor_log2(std::uint64_t n) { return std::bit_width(n) - 1; }

}  // namespace

TEST_CASE("flatten_head") {
  VarSupply s;
  Rule r = parse_rule("r([C|A],D) <=> r(A,B), a(B,[C],D).");
  Rule f = flatten_head(r, s);
  CHECK(f.head.arg(0).is_var());
  CHECK(f.head.arg(1) == r.head.arg(1));
  REQUIRE(f.guard.size() == 1);
  CHECK(std::get<TermEq>(f.guard[0]).rhs == r.head.arg(0));
  Rule sum = sum_program().rules[0];
  CHECK(print_rule(flatten_head(sum, s)) == print_rule(sum));
  Rule l1 = parse_rule("r([D,C|A],E) <=> r(A,B), a(B,[C,D],E).");
  Rule f1 = flatten_head(l1, s);
  CHECK(f1.head.arg(0).is_var());
  CHECK(to_string(std::get<TermEq>(f1.guard[0]).rhs) == "[D,C|A]");
}

TEST_CASE("unfolding the sum rule with itself") {
  VarSupply s;
  Program p = sum_program();
  Rule r = p.rules[0];
  avoid(s, r);
  Rule v = rename_apart(r, s);
  UnfoldResult u = unfold(r, v);
  REQUIRE(u);
  CHECK(u.rule->guard.size() == 2);
  CHECK(u.rule->body.size() == 4);
  CHECK(variant(*u.rule,
                "sum(N,S) <=> N > 1, N-1 > 1 | S := N+S1, sum(N-1,S1) = sum(M,T), "
                "T := M+T1, sum(M-1,T1)."));
}

TEST_CASE("unfolding naive reversal needs head flattening") {
  VarSupply s;
  Program p = rev_program();
  const Rule& r = *p.find("cons");
  avoid(s, r);
  Rule v = rename_apart(r, s);
  UnfoldResult u = unfold(r, v);
  CHECK_FALSE(u);
  CHECK(u.failed_condition == 1);
  CHECK(u.diagnostic.find("condition 1") != std::string::npos);
  CHECK(blocking_positions(r, v) == std::vector<std::size_t>{0});
  Rule fv = flatten_head(v, s);
  UnfoldResult u2 = unfold(r, fv);
  REQUIRE(u2);
  CHECK(variant(simplify_rule(*u2.rule).rule, "r([C,C1|A],D) <=> r(A,B), a(B,[C1,C],D)."));
}

TEST_CASE("unsatisfiable inherited guard is condition 3") {
  VarSupply s;
  Rule r = parse_rule("p(N) <=> N > 5 | p(N-10).");
  avoid(s, r);
  Rule v = rename_apart(parse_rule("p(N) <=> N > 5 | p(N-10)."), s);
  r.guard.push_back(LinCmp{Rel::Lt, LinExpr::from_term(r.head.arg(0)), LinExpr(Int(8))});
  UnfoldResult u = unfold(r, v);
  CHECK_FALSE(u);
  CHECK(u.failed_condition == 3);
}

TEST_CASE("shared guard variables are condition 2") {
  VarSupply s;
  Rule r = parse_rule("p(X) <=> q(Y), p(Y).");
  avoid(s, r);
  Rule v = rename_apart(parse_rule("p(Z) <=> Z > 0 | true."), s);
  UnfoldResult u = unfold(r, v);
  CHECK_FALSE(u);
  CHECK(u.failed_condition == 2);
}

TEST_CASE("more than one recursive call is rejected") {
  Rule r = parse_rule("fib(N,F) <=> N > 1 | fib(N-1,A), fib(N-2,B), F := A+B.");
  VarSupply s;
  avoid(s, r);
  Rule v = rename_apart(r, s);
  try {
    (void)unfold(r, v);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MultipleRecursiveCalls);
  }
}

TEST_CASE("levels_for_bound") {
  CHECK(levels_for_bound(2) == 1);
  CHECK(levels_for_bound(9) == 3);
  CHECK(levels_for_bound(1024) == 10);
  CHECK(levels_for_bound(1023) == 9);
  CHECK_THROWS_AS(levels_for_bound(1), Error);
}

TEST_CASE("sum ladder: first three levels") {
  UnfoldLadder l = repeated_unfold(*sum_program().find("rec"), 3);
  REQUIRE(l.k() == 3);
  CHECK(print_rule(l.level(1)) == "rec_1: sum(N,S) <=> N > 2 | S := 2*N-1+S1, sum(N-2,S1).");
  CHECK(variant(l.level(2), "sum(N,S) <=> N > 4 | S := 4*N-6+T, sum(N-4,T)."));
  CHECK(variant(l.level(3), "sum(N,S) <=> N > 8 | S := 8*N-28+T, sum(N-8,T)."));
  CHECK(l.warnings.empty());
  CHECK(UnfoldLadder::coverage(3) == 8);
}

TEST_CASE("sum ladder: closed form up to level 25") {
  UnfoldLadder l = repeated_unfold(*sum_program().find("rec"), 25);
  REQUIRE(l.k() == 25);
  for (std::size_t i = 1; i <= 25; ++i) {
    CAPTURE(i);
    CHECK(variant(l.level(i), sum_level_text(i)));
  }
  CHECK(closed_form_constant(25) == Int(562949936644096LL));
  CHECK(print_rule(l.level(25)).find("33554432*N-562949936644096") != std::string::npos);
}

TEST_CASE("reversal ladder: shapes up to level 10") {
  UnfoldLadder l = repeated_unfold(*rev_program().find("cons"), 10);
  REQUIRE(l.k() == 10);
  for (std::size_t i = 1; i <= 10; ++i) {
    CAPTURE(i);
    CHECK(variant(l.level(i), rev_level_text(i)));
    CHECK(l.flattened[i - 1]);
  }
  CHECK(list_view(l.level(10).head.arg(0)).elems.size() == 1024);
}

TEST_CASE("golden programs") {
  TransformConfig cfg;
  cfg.levels = 3;
  CHECK(alpha_equivalent(transform(sum_program(), cfg).program, load_golden("sum_rule_order_3.chr")));
  CHECK(alpha_equivalent(transform(rev_program(), cfg).program, load_golden("rev_rule_order_3.chr")));
  cfg.levels = 2;
  cfg.mode = TransformMode::Recursionless;
  TransformOutput t = transform(sum_program(), cfg);
  CHECK(alpha_equivalent(t.program, load_golden("sum_recursionless_2.chr")));
  CHECK(t.entry.name() == "sum2");
}

TEST_CASE("transformed programs round-trip through the parser") {
  for (auto mode : {TransformMode::RuleOrder, TransformMode::Recursionless, TransformMode::Unbounded}) {
    TransformConfig cfg;
    cfg.levels = 4;
    cfg.mode = mode;
    for (const Program& p : {sum_program(), rev_program()}) {
      Program out = transform(p, cfg).program;
      CHECK(alpha_equivalent(parse_program(print_program(out)), out));
    }
  }
}

TEST_CASE("empty ladder leaves the program unchanged") {
  Program p = sum_program();
  UnfoldLadder l = repeated_unfold(*p.find("rec"), 0);
  CHECK(alpha_equivalent(assemble_rule_order(p, l), p));
}

TEST_CASE("transform picks the only recursive rule and validates names") {
  TransformConfig cfg;
  cfg.bound = 9;
  CHECK(transform(sum_program(), cfg).ladder.k() == 3);
  cfg.rule = "nope";
  CHECK_THROWS_AS(transform(sum_program(), cfg), Error);
  CHECK(parse_mode("recursionless") == TransformMode::Recursionless);
  CHECK_FALSE(parse_mode("fast"));
}

TEST_CASE("recursionless answers and once-per-rule") {
  TransformConfig cfg;
  cfg.levels = 9;
  cfg.mode = TransformMode::Recursionless;
  TransformOutput t = transform(sum_program(), cfg);
  Engine e(t.program);
  for (int n = 1; n <= 512; ++n) {
    RunResult r = e.run("sum9(" + std::to_string(n) + ",R)");
    REQUIRE(r.ok());
    CHECK(r.answer_text() == "R = " + std::to_string(n * (n + 1) / 2));
    CHECK(r.stats.max_rule_applications() <= 1);
  }
}

TEST_CASE("recursionless call graph is acyclic") {
  TransformConfig cfg;
  cfg.levels = 6;
  cfg.mode = TransformMode::Recursionless;
  for (const Program& p : {sum_program(), rev_program()}) {
    Program out = transform(p, cfg).program;
    std::map<std::string, std::set<std::string>> calls;
    for (const auto& r : out.rules)
      for (const auto& a : r.body)
        if (a.is_call() && !out.interpreted_def(a.call()))
          calls[r.head.functor().name()].insert(a.call().functor().name());
    // Depth-first search for a back edge.
    std::map<std::string, int> state;
    std::function<bool(const std::string&)> cyclic = [&](const std::string& f) {
      if (state[f] == 1) return true;
      if (state[f] == 2) return false;
      state[f] = 1;
      for (const auto& g : calls[f])
        if (cyclic(g)) return true;
      state[f] = 2;
      return false;
    };
    for (const auto& [f, _] : calls) CHECK_FALSE(cyclic(f));
  }
}

TEST_CASE("unbounded cap") {
  TransformConfig cfg;
  cfg.levels = 2;
  cfg.mode = TransformMode::Unbounded;
  TransformOutput t = transform(sum_program(), cfg);
  REQUIRE(t.program.find("rec_2_cap"));
  CHECK(t.program.index_of("rec_2_cap") + 1 == t.program.index_of("rec_2"));
  const std::size_t cap = t.program.index_of("rec_2_cap");
  Engine e(t.program);

  RunResult big = e.run("sum2(100,R)");
  REQUIRE(big.ok());
  CHECK(big.answer_text() == "R = 5050");
  CHECK(big.stats.rule_applications[cap] >= 2);

  RunResult five = e.run("sum2(5,R)");
  REQUIRE(five.ok());
  CHECK(five.stats.rule_applications[cap] == 1);
  CHECK(five.stats.rule_applications[t.program.index_of("rec_2_fall")] == 1);

  cfg.mode = TransformMode::Recursionless;
  Engine plain(transform(sum_program(), cfg).program);
  for (int n = 1; n <= 4; ++n) {
    const std::string q = "sum2(" + std::to_string(n) + ",R)";
    RunResult a = e.run(q, {}, true), b = plain.run(q, {}, true);
    CHECK(a.answer_text() == b.answer_text());
    CHECK(a.stats.applications == b.stats.applications);
  }
  // Two levels cover depths up to 7 without the cap.
  CHECK(plain.run("sum2(9,R)").outcome == Outcome::Stuck);
  CHECK(e.run("sum2(9,R)").answer_text() == "R = 45");
}

TEST_CASE("property: unfolded rules are redundant") {
  Program p = sum_program(), q = rev_program();
  UnfoldLadder ls = repeated_unfold(*p.find("rec"), 6);
  UnfoldLadder lr = repeated_unfold(*q.find("cons"), 6);
  for (std::size_t i = 1; i <= 6; ++i) {
    Program ps;
    ps.rules = {ls.level(i), *p.find("base")};
    ps.infer_recursion();
    Program pr;
    pr.rules = {lr.level(i), *q.find("nil")};
    pr.infer_recursion();
    for (std::uint64_t n = 1; n <= 200; ++n) {
      const std::string sq = "sum(" + std::to_string(n) + ",R)";
      const std::string a = apply_then_run(ls.level(i), p, sq);
      if (a != "not applicable") CHECK(a == answer_of(p, sq));
      const std::string rq = "r(" + list_text(n % 80) + ",R)";
      const std::string b = apply_then_run(lr.level(i), q, rq);
      if (b != "not applicable") CHECK(b == answer_of(q, rq));
    }
  }
}

TEST_CASE("property: Lemma 1 coverage") {
  Program p = sum_program();
  const std::size_t k = 8;
  UnfoldLadder l = repeated_unfold(*p.find("rec"), k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::uint64_t n = 1; n <= 2 * (std::uint64_t{1} << k); ++n) {
      const std::string q = "sum(" + std::to_string(n) + ",R)";
      Program single;
      single.rules = {l.level(i)};
      Engine e(single);
      RunLimits lim;
      RunResult r = e.run(q, lim);
      // r_i fires at least twice in sequence iff r_{i+1} fires at least once.
      const bool twice = r.stats.applications >= 2;
      Program next;
      next.rules = {l.level(i + 1)};
      const bool fires = Engine(next).run(q).stats.applications >= 1;
      CAPTURE(i);
      CAPTURE(n);
      if (twice) CHECK(fires);
    }
  }
}

TEST_CASE("property: level guards are exactly the depth threshold") {
  UnfoldLadder l = repeated_unfold(*sum_program().find("rec"), 20);
  for (std::size_t i = 1; i <= 20; ++i) {
    const Rule& r = l.level(i);
    const LinExpr n = LinExpr::from_term(r.head.arg(0));
    const Builtin threshold = LinCmp{Rel::Gt, n, LinExpr(Int(1) << i)};
    CHECK(ConstraintStore::normalize(r.guard).entails(threshold));
    CHECK(ConstraintStore::normalize({threshold}).entails_all(r.guard));
  }
}

TEST_CASE("property: rule order keeps recursive applications logarithmic") {
  TransformConfig cfg;
  cfg.bound = 512;
  Program out = transform(sum_program(), cfg).program;
  Engine e(out);
  for (std::uint64_t n = 1; n <= 512; ++n) {
    RunResult r = e.run("sum(" + std::to_string(n) + ",R)");
    REQUIRE(r.ok());
    CHECK(r.stats.recursive_applications <= floor_log2(n) + 1);
  }
}
