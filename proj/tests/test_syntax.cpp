#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rru/error.hpp"
#include "rru/syntax.hpp"
#include "support.hpp"

using namespace rru;

TEST_CASE("rules keep their parts") {
  Rule r = parse_rule("rec: sum(N,S) <=> N > 1 | S := N+S1, sum(N-1,S1).");
  CHECK(r.name == "rec");
  CHECK(r.guard.size() == 1);
  CHECK(r.body.size() == 2);
  CHECK(r.body[0].is_builtin());
  CHECK(r.body[1].is_call());
  CHECK(print_rule(r) == "rec: sum(N,S) <=> N > 1 | S := N+S1, sum(N-1,S1).");
}

TEST_CASE("unnamed rules get positional names") {
  Program p = parse_program("p(X) <=> q(X).\nq(X) <=> X = 1.\n");
  REQUIRE(p.rules.size() == 2);
  CHECK_FALSE(p.rules[0].name.empty());
  CHECK(p.rules[0].name != p.rules[1].name);
}

TEST_CASE("comments and alternative operators") {
  Program p = parse_program(
      "% header\n"
      "r1: p(X,Y) <=> X =< 3 | Y is X+1. % trailing\n"
      "r2: p(X,Y) <=> X <= 3, true | Y = X.\n");
  REQUIRE(p.rules.size() == 2);
  CHECK(std::holds_alternative<ArithAssign>(p.rules[0].body[0].builtin()));
  CHECK(std::holds_alternative<LinCmp>(p.rules[1].guard[0]));
}

TEST_CASE("list syntax") {
  Rule r = parse_rule("cons: r([C|A],D) <=> r(A,B), a(B,[C],D).");
  CHECK(print_rule(r) == "cons: r([C|A],D) <=> r(A,B), a(B,[C],D).");
}

TEST_CASE("non-linear arithmetic is rejected at parse time") {
  try {
    parse_rule("p(X,Y) <=> Y := X*X.");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonLinear);
  }
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_program("p(X) <=> q(X).\np(X) <=> q(X,,Y).\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Syntax);
    CHECK(std::string(e.what()).rfind("2:", 0) == 0);
  }
}

TEST_CASE("missing final dot is an error") {
  CHECK_THROWS_AS(parse_program("p(X) <=> q(X)"), Error);
}

TEST_CASE("goals report their named variables") {
  VarSupply s;
  ParsedGoal g = parse_goal("sum(9,R), X = R", s);
  CHECK(g.goal.size() == 2);
  REQUIRE(g.vars.size() == 2);
  CHECK(g.vars[0].print_name() == "R");
}

TEST_CASE("canonical naming") {
  Rule r = parse_rule("id: p(Foo,Bar) <=> Bar = Foo.");
  CHECK(print_rule(r, Naming::Canonical) == "id: p(A,B) <=> B = A.");
}

TEST_CASE("shipped programs parse and round-trip") {
  for (const char* name : {"sum.chr", "sum_unfolded.chr", "rev.chr", "rev_hand.chr"}) {
    CAPTURE(name);
    Program p = rru::testing::load_program(name);
    Program back = parse_program(print_program(p));
    CHECK(alpha_equivalent(p, back));
  }
}

TEST_CASE("property: parse(print(rule)) is a variant of the rule") {
  const char* rules[] = {
      "a: p(X,Y,Z) <=> X > 2*Y-3, Z =\\= 4 | W := X+Y, q(W,[X,Y|Z]).",
      "b: p([A,B|C],D) <=> p(C,E), a(E,[B,A],D).",
      "c: p(N,S) <=> N =:= 1 | S = 1.",
      "d: p(N,S) <=> N >= 0, N < 10 | S := -N + 7, false.",
      "e: p(f(X),g(Y,Y)) <=> true | X = Y.",
  };
  for (const char* text : rules) {
    CAPTURE(text);
    Rule r = parse_rule(text);
    Rule back = parse_rule(print_rule(r));
    CHECK(alpha_equivalent(r, back));
    CHECK(print_rule(back) == print_rule(r));
  }
}
