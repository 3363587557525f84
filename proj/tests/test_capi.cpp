#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "rru/rru.h"

namespace {

const char* kSum =
    "rec: sum(N,S) <=> N > 1 | S := N+S1, sum(N-1,S1).\n"
    "base: sum(N,S) <=> N = 1 | S = 1.\n";

rru_program* parse(const char* text) {
  rru_program* p = nullptr;
  REQUIRE(rru_program_parse(text, &p) == RRU_OK);
  return p;
}

}  // namespace

TEST_CASE("parse, run and inspect") {
  rru_program* p = parse(kSum);
  CHECK(rru_program_rule_count(p) == 2);
  rru_run_options o{0, 0, 1};
  rru_result* r = nullptr;
  REQUIRE(rru_run(p, "sum(9,R)", &o, &r) == RRU_OK);
  CHECK(rru_result_outcome(r) == RRU_OUTCOME_SUCCESS);
  CHECK(std::string(rru_result_answer(r)) == "R = 45");
  rru_stats st;
  rru_result_stats(r, &st);
  CHECK(st.recursive_applications == 8);
  CHECK(rru_result_trace_count(r) > 0);
  CHECK(std::string(rru_result_trace_line(r, 0)) == "APPLY rec");
  CHECK(rru_result_trace_line(r, 1u << 30) == nullptr);
  rru_result_free(r);
  rru_program_free(p);
}

TEST_CASE("errors are reported with a status and a message") {
  rru_program* p = nullptr;
  CHECK(rru_program_parse("sum(N,S) <=> N*N > 1 | true.", &p) == RRU_ERR_NONLINEAR);
  CHECK(p == nullptr);
  CHECK(std::string(rru_last_error()).size() > 0);
  CHECK(rru_program_parse("sum(N,S) <=> ", &p) == RRU_ERR_SYNTAX);
  CHECK(rru_program_load("/nonexistent/file.chr", &p) == RRU_ERR_IO);
  CHECK(rru_program_parse(nullptr, &p) == RRU_ERR_INVALID_ARGUMENT);
  CHECK(std::string(rru_status_name(RRU_ERR_MODE)) == "mode error");
}

TEST_CASE("mode errors are outcomes, not statuses") {
  rru_program* p = parse("nil: r([],D) <=> D = [].\n");
  rru_result* r = nullptr;
  REQUIRE(rru_run(p, "a(T,[1],Z)", nullptr, &r) == RRU_OK);
  CHECK(rru_result_outcome(r) == RRU_OUTCOME_MODE_ERROR);
  CHECK(std::string(rru_outcome_name(rru_result_outcome(r))) == "mode-error");
  rru_result_free(r);
  rru_program_free(p);
}

TEST_CASE("transform and print") {
  rru_program* p = parse(kSum);
  rru_transform_options o{nullptr, 2, 0, RRU_MODE_RECURSIONLESS};
  rru_transformed* t = nullptr;
  REQUIRE(rru_transform(p, &o, &t) == RRU_OK);
  CHECK(std::string(rru_transformed_entry(t)) == "sum2");
  CHECK(rru_transformed_levels(t) == 2);
  CHECK(rru_program_rule_count(rru_transformed_program(t)) == 7);
  char* text = nullptr;
  REQUIRE(rru_program_print(rru_transformed_program(t), &text) == RRU_OK);
  CHECK(std::string(text).find("sum2(N,S) <=> sum1(N,S).") != std::string::npos);
  rru_string_free(text);
  CHECK(std::string(rru_transformed_report(t)).find("level 1") != std::string::npos);
  rru_transformed_free(t);

  rru_transform_options bad{"nope", 2, 0, RRU_MODE_RULE_ORDER};
  CHECK(rru_transform(p, &bad, &t) == RRU_ERR_INVALID_ARGUMENT);
  rru_program_free(p);
}

TEST_CASE("bench and verify") {
  rru_program* p = parse(kSum);
  rru_bench_options b{};
  b.bound = 64;
  b.query = "sum($N,R)";
  b.lo = 1;
  b.hi = 64;
  b.buckets = 4;
  rru_bench_report* rep = nullptr;
  REQUIRE(rru_bench(p, &b, &rep) == RRU_OK);
  CHECK(rru_bench_ok(rep) == 1);
  CHECK(std::string(rru_bench_csv(rep)).rfind("config,", 0) == 0);
  double slope = 0;
  CHECK(rru_bench_slope(rep, "original", &slope) == RRU_OK);
  CHECK(slope > 0.5);
  CHECK(rru_bench_slope(rep, "missing", &slope) == RRU_ERR_INVALID_ARGUMENT);
  rru_bench_free(rep);

  rru_verify_options v{};
  v.bound = 64;
  v.query = "sum($N,R)";
  v.lo = 1;
  v.hi = 64;
  rru_verify_report* vr = nullptr;
  REQUIRE(rru_verify(p, &v, &vr) == RRU_OK);
  CHECK(rru_verify_ok(vr) == 1);
  CHECK(std::string(rru_verify_ledger(vr)).find("PASS") != std::string::npos);
  rru_verify_free(vr);
  rru_program_free(p);
}
