#include "rru/rru.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "rru/bench.hpp"
#include "rru/engine.hpp"
#include "rru/error.hpp"
#include "rru/syntax.hpp"
#include "rru/transform.hpp"

struct rru_program {
  rru::Program program;
};

struct rru_result {
  rru::RunResult result;
  std::string answer;
};

struct rru_transformed {
  rru_program program;
  std::string entry;
  std::size_t levels = 0;
  std::string report;
  std::string warnings;
};

struct rru_bench_report {
  rru::BenchReport report;
  std::string csv;
  std::string markdown;
  std::string mismatches;
};

struct rru_verify_report {
  rru::VerifyReport report;
  std::string ledger;
  std::string failures;
};

namespace {

thread_local std::string last_error;

rru_status status_of(rru::ErrorKind k) {
  switch (k) {
    case rru::ErrorKind::Syntax: return RRU_ERR_SYNTAX;
    case rru::ErrorKind::NonLinear: return RRU_ERR_NONLINEAR;
    case rru::ErrorKind::Unbound: return RRU_ERR_UNBOUND;
    case rru::ErrorKind::ModeError: return RRU_ERR_MODE;
    case rru::ErrorKind::MultipleRecursiveCalls: return RRU_ERR_MULTIPLE_RECURSIVE_CALLS;
    case rru::ErrorKind::Transform: return RRU_ERR_TRANSFORM;
    case rru::ErrorKind::InvalidArgument: return RRU_ERR_INVALID_ARGUMENT;
    case rru::ErrorKind::Io: return RRU_ERR_IO;
  }
  return RRU_ERR_INTERNAL;
}

template <class F>
rru_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return RRU_OK;
  } catch (const rru::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    last_error = e.what();
    return RRU_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return RRU_ERR_INTERNAL;
  }
}

rru_status invalid(const char* msg) {
  last_error = msg;
  return RRU_ERR_INVALID_ARGUMENT;
}

std::vector<std::string> split_list(const char* s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += s + "\n";
  return out;
}

}  // namespace

extern "C" {

const char* rru_last_error(void) { return last_error.c_str(); }

const char* rru_status_name(rru_status s) {
  switch (s) {
    case RRU_OK: return "ok";
    case RRU_ERR_SYNTAX: return "syntax error";
    case RRU_ERR_NONLINEAR: return "non-linear arithmetic";
    case RRU_ERR_UNBOUND: return "unbound";
    case RRU_ERR_MODE: return "mode error";
    case RRU_ERR_MULTIPLE_RECURSIVE_CALLS: return "multiple recursive calls";
    case RRU_ERR_TRANSFORM: return "transformation error";
    case RRU_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RRU_ERR_IO: return "i/o error";
    case RRU_ERR_INTERNAL: return "internal error";
  }
  return "?";
}

const char* rru_outcome_name(rru_outcome o) {
  return rru::outcome_name(static_cast<rru::Outcome>(o));
}

void rru_string_free(char* s) { std::free(s); }

rru_status rru_program_parse(const char* text, rru_program** out) {
  if (!text || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    auto p = std::make_unique<rru_program>();
    p->program = rru::parse_program(text);
    p->program.infer_recursion();
    *out = p.release();
  });
}

rru_status rru_program_load(const char* path, rru_program** out) {
  if (!path || !out) return invalid("null argument");
  *out = nullptr;
  std::ifstream in(path);
  if (!in) {
    last_error = std::string("cannot open ") + path;
    return RRU_ERR_IO;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  rru_status s = rru_program_parse(text.c_str(), out);
  if (s != RRU_OK) last_error = std::string(path) + ":" + last_error;
  return s;
}

void rru_program_free(rru_program* p) { delete p; }

size_t rru_program_rule_count(const rru_program* p) { return p ? p->program.rules.size() : 0; }

rru_status rru_program_print(const rru_program* p, char** out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] { *out = dup(rru::print_program(p->program)); });
}

rru_status rru_run(const rru_program* p, const char* query, const rru_run_options* opts,
                   rru_result** out) {
  if (!p || !query || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    rru::RunLimits limits;
    bool trace = false;
    if (opts) {
      if (opts->max_steps) limits.max_steps = opts->max_steps;
      if (opts->max_goals) limits.max_goals = opts->max_goals;
      trace = opts->trace != 0;
    }
    rru::Engine engine(p->program);
    auto r = std::make_unique<rru_result>();
    r->result = engine.run(std::string_view(query), limits, trace);
    r->answer = r->result.answer_text();
    *out = r.release();
  });
}

rru_outcome rru_result_outcome(const rru_result* r) {
  return static_cast<rru_outcome>(r->result.outcome);
}
const char* rru_result_answer(const rru_result* r) { return r->answer.c_str(); }
const char* rru_result_message(const rru_result* r) { return r->result.message.c_str(); }

void rru_result_stats(const rru_result* r, rru_stats* out) {
  const auto& s = r->result.stats;
  out->steps = s.steps;
  out->rule_attempts = s.rule_attempts;
  out->applications = s.applications;
  out->recursive_applications = s.recursive_applications;
  out->max_rule_applications = s.max_rule_applications();
  out->builtin_cost = s.builtin_cost();
  out->arith_cost = s.arith_cost;
  out->append_cost = s.append_cost;
}

size_t rru_result_trace_count(const rru_result* r) { return r->result.trace.size(); }
const char* rru_result_trace_line(const rru_result* r, size_t i) {
  return i < r->result.trace.size() ? r->result.trace[i].c_str() : nullptr;
}
void rru_result_free(rru_result* r) { delete r; }

rru_status rru_transform(const rru_program* p, const rru_transform_options* opts,
                         rru_transformed** out) {
  if (!p || !opts || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    rru::TransformConfig cfg;
    if (opts->rule) cfg.rule = opts->rule;
    if (opts->levels) cfg.levels = opts->levels;
    cfg.bound = opts->bound;
    cfg.mode = static_cast<rru::TransformMode>(opts->mode);
    rru::TransformOutput t = rru::transform(p->program, cfg);
    auto r = std::make_unique<rru_transformed>();
    r->program.program = std::move(t.program);
    r->entry = t.entry.name();
    r->levels = t.ladder.k();
    for (std::size_t i = 0; i < t.ladder.reports.size(); ++i) {
      r->report += "% level " + std::to_string(i + 1) + "\n";
      r->report += t.ladder.reports[i].to_string();
    }
    r->warnings = join(t.ladder.warnings);
    *out = r.release();
  });
}

const rru_program* rru_transformed_program(const rru_transformed* t) { return &t->program; }
const char* rru_transformed_entry(const rru_transformed* t) { return t->entry.c_str(); }
size_t rru_transformed_levels(const rru_transformed* t) { return t->levels; }
const char* rru_transformed_report(const rru_transformed* t) { return t->report.c_str(); }
const char* rru_transformed_warnings(const rru_transformed* t) { return t->warnings.c_str(); }
void rru_transformed_free(rru_transformed* t) { delete t; }

rru_status rru_bench(const rru_program* p, const rru_bench_options* opts, rru_bench_report** out) {
  if (!p || !opts || !out || !opts->query) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    std::vector<std::string> names =
        opts->configs ? split_list(opts->configs)
                      : std::vector<std::string>{"original", "rule-order", "recursionless", "unbounded"};
    auto configs = rru::make_configs(p->program, opts->rule ? opts->rule : "", opts->bound,
                                     opts->query, names, opts->hand ? &opts->hand->program : nullptr);
    rru::BenchOptions bo;
    bo.buckets.lo = opts->lo;
    bo.buckets.hi = opts->hi;
    if (opts->buckets) bo.buckets.count = opts->buckets;
    if (opts->width) bo.buckets.width = opts->width;
    bo.stride = opts->stride ? opts->stride : 1;
    if (opts->max_steps) bo.limits.max_steps = opts->max_steps;
    auto r = std::make_unique<rru_bench_report>();
    r->report = rru::bench(configs, bo);
    r->csv = r->report.csv();
    r->markdown = r->report.markdown();
    r->mismatches = join(r->report.mismatches);
    *out = r.release();
  });
}

const char* rru_bench_csv(const rru_bench_report* r) { return r->csv.c_str(); }
const char* rru_bench_markdown(const rru_bench_report* r) { return r->markdown.c_str(); }
int rru_bench_ok(const rru_bench_report* r) { return r->report.ok() ? 1 : 0; }
const char* rru_bench_mismatches(const rru_bench_report* r) { return r->mismatches.c_str(); }

rru_status rru_bench_slope(const rru_bench_report* r, const char* config, double* out) {
  if (!r || !config || !out) return invalid("null argument");
  auto it = r->report.slopes.find(config);
  if (it == r->report.slopes.end()) {
    last_error = std::string("no configuration named ") + config;
    return RRU_ERR_INVALID_ARGUMENT;
  }
  *out = it->second;
  return RRU_OK;
}

void rru_bench_free(rru_bench_report* r) { delete r; }

rru_status rru_verify(const rru_program* p, const rru_verify_options* opts,
                      rru_verify_report** out) {
  if (!p || !opts || !out || !opts->query) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    std::vector<std::string> names =
        opts->configs ? split_list(opts->configs)
                      : std::vector<std::string>{"original", "rule-order", "recursionless"};
    auto configs = rru::make_configs(p->program, opts->rule ? opts->rule : "", opts->bound,
                                     opts->query, names);
    rru::VerifyOptions vo;
    vo.lo = opts->lo;
    vo.hi = opts->hi;
    vo.bound = opts->bound;
    if (opts->max_steps) vo.limits.max_steps = opts->max_steps;
    auto r = std::make_unique<rru_verify_report>();
    r->report = rru::verify(configs, vo);
    r->ledger = join(r->report.ledger);
    r->failures = join(r->report.failures);
    *out = r.release();
  });
}

int rru_verify_ok(const rru_verify_report* r) { return r->report.ok() ? 1 : 0; }
const char* rru_verify_ledger(const rru_verify_report* r) { return r->ledger.c_str(); }
const char* rru_verify_failures(const rru_verify_report* r) { return r->failures.c_str(); }
void rru_verify_free(rru_verify_report* r) { delete r; }

}  // extern "C"
