#ifndef RRU_RRU_H
#define RRU_RRU_H

/* C interface: opaque handles, status codes, thread-local error text. */

#include <stddef.h>
#include <stdint.h>

#if defined(RRU_BUILDING_LIBRARY)
#define RRU_API __attribute__((visibility("default")))
#else
#define RRU_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rru_status {
  RRU_OK = 0,
  RRU_ERR_SYNTAX,
  RRU_ERR_NONLINEAR,
  RRU_ERR_UNBOUND,
  RRU_ERR_MODE,
  RRU_ERR_MULTIPLE_RECURSIVE_CALLS,
  RRU_ERR_TRANSFORM,
  RRU_ERR_INVALID_ARGUMENT,
  RRU_ERR_IO,
  RRU_ERR_INTERNAL
} rru_status;

typedef enum rru_outcome {
  RRU_OUTCOME_SUCCESS = 0,
  RRU_OUTCOME_FAIL,
  RRU_OUTCOME_STUCK,
  RRU_OUTCOME_LIMIT_EXCEEDED,
  RRU_OUTCOME_UNBOUND,
  RRU_OUTCOME_MODE_ERROR,
  RRU_OUTCOME_NONLINEAR
} rru_outcome;

typedef enum rru_mode {
  RRU_MODE_RULE_ORDER = 0,
  RRU_MODE_RECURSIONLESS,
  RRU_MODE_UNBOUNDED
} rru_mode;

typedef struct rru_program rru_program;
typedef struct rru_result rru_result;
typedef struct rru_transformed rru_transformed;
typedef struct rru_bench_report rru_bench_report;
typedef struct rru_verify_report rru_verify_report;

/* Message of the last failed call on this thread ("" if none). */
RRU_API const char* rru_last_error(void);
RRU_API const char* rru_status_name(rru_status s);
RRU_API const char* rru_outcome_name(rru_outcome o);
RRU_API void rru_string_free(char* s);

/* Programs */
RRU_API rru_status rru_program_parse(const char* text, rru_program** out);
RRU_API rru_status rru_program_load(const char* path, rru_program** out);
RRU_API void rru_program_free(rru_program* p);
RRU_API size_t rru_program_rule_count(const rru_program* p);
/* Prints the program in source syntax; free with rru_string_free. */
RRU_API rru_status rru_program_print(const rru_program* p, char** out);

/* Running queries */
typedef struct rru_run_options {
  uint64_t max_steps; /* 0: default */
  uint64_t max_goals; /* 0: default */
  int trace;
} rru_run_options;

typedef struct rru_stats {
  uint64_t steps;
  uint64_t rule_attempts;
  uint64_t applications;
  uint64_t recursive_applications;
  uint64_t max_rule_applications;
  uint64_t builtin_cost;
  uint64_t arith_cost;
  uint64_t append_cost;
} rru_stats;

/* Runs `query`. A failed or stuck run is still RRU_OK; inspect the outcome. */
RRU_API rru_status rru_run(const rru_program* p, const char* query, const rru_run_options* opts,
                           rru_result** out);
RRU_API rru_outcome rru_result_outcome(const rru_result* r);
/* Strings below are owned by the result. */
RRU_API const char* rru_result_answer(const rru_result* r);
RRU_API const char* rru_result_message(const rru_result* r);
RRU_API void rru_result_stats(const rru_result* r, rru_stats* out);
RRU_API size_t rru_result_trace_count(const rru_result* r);
RRU_API const char* rru_result_trace_line(const rru_result* r, size_t i);
RRU_API void rru_result_free(rru_result* r);

/* Transformation */
typedef struct rru_transform_options {
  const char* rule; /* NULL or "": the only recursive rule */
  uint32_t levels;  /* 0: derive from bound */
  uint64_t bound;
  rru_mode mode;
} rru_transform_options;

RRU_API rru_status rru_transform(const rru_program* p, const rru_transform_options* opts,
                                 rru_transformed** out);
/* Borrowed; valid until the transformed handle is freed. */
RRU_API const rru_program* rru_transformed_program(const rru_transformed* t);
RRU_API const char* rru_transformed_entry(const rru_transformed* t);
RRU_API size_t rru_transformed_levels(const rru_transformed* t);
/* Simplification log of every level. */
RRU_API const char* rru_transformed_report(const rru_transformed* t);
/* Newline-separated warnings ("" if none). */
RRU_API const char* rru_transformed_warnings(const rru_transformed* t);
RRU_API void rru_transformed_free(rru_transformed* t);

/* Benchmarks */
typedef struct rru_bench_options {
  const char* rule;    /* NULL or "": the only recursive rule */
  uint64_t bound;
  const char* query;   /* template with $N (size) or $L (list 1..n) */
  uint64_t lo, hi;
  uint32_t buckets;
  uint64_t width;      /* 0: `buckets` equal buckets */
  uint64_t stride;     /* 0 or 1: every input */
  const char* configs; /* comma-separated; NULL: original,rule-order,recursionless,unbounded */
  const rru_program* hand; /* for hand-optimized */
  uint64_t max_steps;  /* 0: default */
} rru_bench_options;

RRU_API rru_status rru_bench(const rru_program* p, const rru_bench_options* opts,
                             rru_bench_report** out);
RRU_API const char* rru_bench_csv(const rru_bench_report* r);
RRU_API const char* rru_bench_markdown(const rru_bench_report* r);
/* 1 when every configuration agreed on every answer. */
RRU_API int rru_bench_ok(const rru_bench_report* r);
/* Newline-separated disagreements ("" if none). */
RRU_API const char* rru_bench_mismatches(const rru_bench_report* r);
RRU_API rru_status rru_bench_slope(const rru_bench_report* r, const char* config, double* out);
RRU_API void rru_bench_free(rru_bench_report* r);

typedef struct rru_verify_options {
  const char* rule;
  uint64_t bound;
  const char* query;
  uint64_t lo, hi;
  const char* configs; /* NULL: original,rule-order,recursionless */
  uint64_t max_steps;
} rru_verify_options;

RRU_API rru_status rru_verify(const rru_program* p, const rru_verify_options* opts,
                              rru_verify_report** out);
RRU_API int rru_verify_ok(const rru_verify_report* r);
RRU_API const char* rru_verify_ledger(const rru_verify_report* r);
RRU_API const char* rru_verify_failures(const rru_verify_report* r);
RRU_API void rru_verify_free(rru_verify_report* r);

#ifdef __cplusplus
}
#endif

#endif
