#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rru/rru.h"

namespace {

struct ProgramHandle {
  rru_program* p = nullptr;
  ~ProgramHandle() { rru_program_free(p); }
};

int report_error(rru_status s) {
  std::cerr << "rru: " << rru_status_name(s) << ": " << rru_last_error() << "\n";
  return 2;
}

bool parse_range(const std::string& text, std::uint64_t& lo, std::uint64_t& hi) {
  auto dots = text.find("..");
  if (dots == std::string::npos) return false;
  try {
    lo = std::stoull(text.substr(0, dots));
    hi = std::stoull(text.substr(dots + 2));
  } catch (const std::exception&) {
    return false;
  }
  return lo <= hi;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "rru: cannot write " << path << "\n";
    return false;
  }
  out << text;
  return true;
}

int cmd_run(const std::string& file, const std::string& query, bool trace,
            std::uint64_t max_steps) {
  ProgramHandle prog;
  if (auto s = rru_program_load(file.c_str(), &prog.p); s != RRU_OK) return report_error(s);
  rru_run_options opts{max_steps, 0, trace ? 1 : 0};
  rru_result* res = nullptr;
  if (auto s = rru_run(prog.p, query.c_str(), &opts, &res); s != RRU_OK) return report_error(s);
  for (size_t i = 0; i < rru_result_trace_count(res); ++i)
    std::cout << rru_result_trace_line(res, i) << "\n";
  const rru_outcome o = rru_result_outcome(res);
  if (o == RRU_OUTCOME_SUCCESS)
    std::cout << rru_result_answer(res) << "\n";
  else
    std::cout << rru_outcome_name(o) << ": " << rru_result_message(res) << "\n";
  rru_stats st;
  rru_result_stats(res, &st);
  std::cout << "% steps=" << st.steps << " attempts=" << st.rule_attempts
            << " applications=" << st.applications
            << " recursive=" << st.recursive_applications << " builtin_cost=" << st.builtin_cost
            << " (arith=" << st.arith_cost << " append=" << st.append_cost << ")\n";
  rru_result_free(res);
  return o == RRU_OUTCOME_SUCCESS ? 0 : 1;
}

int cmd_transform(const std::string& file, const std::string& rule, std::uint32_t levels,
                  std::uint64_t bound, const std::string& mode, const std::string& out_path,
                  bool show_report) {
  ProgramHandle prog;
  if (auto s = rru_program_load(file.c_str(), &prog.p); s != RRU_OK) return report_error(s);
  rru_transform_options opts{};
  opts.rule = rule.c_str();
  opts.levels = levels;
  opts.bound = bound;
  if (mode == "rule-order") {
    opts.mode = RRU_MODE_RULE_ORDER;
  } else if (mode == "recursionless") {
    opts.mode = RRU_MODE_RECURSIONLESS;
  } else if (mode == "unbounded") {
    opts.mode = RRU_MODE_UNBOUNDED;
  } else {
    std::cerr << "rru: unknown mode " << mode << "\n";
    return 2;
  }
  if (levels == 0 && bound < 2) {
    std::cerr << "rru: give --levels or a --bound of at least 2\n";
    return 2;
  }
  rru_transformed* t = nullptr;
  if (auto s = rru_transform(prog.p, &opts, &t); s != RRU_OK) return report_error(s);
  char* text = nullptr;
  if (auto s = rru_program_print(rru_transformed_program(t), &text); s != RRU_OK) {
    rru_transformed_free(t);
    return report_error(s);
  }
  std::string listing = text;
  rru_string_free(text);
  std::string header = "% levels: " + std::to_string(rru_transformed_levels(t)) +
                       ", entry: " + rru_transformed_entry(t) + "\n";
  int rc = 0;
  if (!out_path.empty()) {
    if (!write_file(out_path, listing)) rc = 2;
  } else {
    std::cout << header << listing;
  }
  if (show_report) std::cout << rru_transformed_report(t);
  if (*rru_transformed_warnings(t)) std::cerr << rru_transformed_warnings(t);
  rru_transformed_free(t);
  return rc;
}

int cmd_bench(const std::string& file, const std::string& rule, std::uint64_t bound,
              const std::string& inputs, std::uint32_t buckets, std::uint64_t width,
              std::uint64_t stride, const std::string& configs, const std::string& query,
              const std::string& hand_file, const std::string& csv_path, bool markdown) {
  std::uint64_t lo = 0, hi = 0;
  if (!parse_range(inputs, lo, hi)) {
    std::cerr << "rru: --inputs expects lo..hi\n";
    return 2;
  }
  ProgramHandle prog, hand;
  if (auto s = rru_program_load(file.c_str(), &prog.p); s != RRU_OK) return report_error(s);
  if (!hand_file.empty())
    if (auto s = rru_program_load(hand_file.c_str(), &hand.p); s != RRU_OK) return report_error(s);
  rru_bench_options opts{};
  opts.rule = rule.c_str();
  opts.bound = bound;
  opts.query = query.c_str();
  opts.lo = lo;
  opts.hi = hi;
  opts.buckets = buckets;
  opts.width = width;
  opts.stride = stride;
  opts.configs = configs.empty() ? nullptr : configs.c_str();
  opts.hand = hand.p;
  rru_bench_report* rep = nullptr;
  if (auto s = rru_bench(prog.p, &opts, &rep); s != RRU_OK) return report_error(s);
  if (!csv_path.empty()) {
    if (!write_file(csv_path, rru_bench_csv(rep))) {
      rru_bench_free(rep);
      return 2;
    }
  } else {
    std::cout << rru_bench_csv(rep);
  }
  if (markdown) std::cout << "\n" << rru_bench_markdown(rep);
  const bool ok = rru_bench_ok(rep) != 0;
  if (!ok) std::cerr << "answer mismatches:\n" << rru_bench_mismatches(rep);
  rru_bench_free(rep);
  return ok ? 0 : 1;
}

int cmd_verify(const std::string& file, const std::string& rule, std::uint64_t bound,
               const std::string& inputs, const std::string& configs, const std::string& query) {
  std::uint64_t lo = 0, hi = 0;
  if (!parse_range(inputs, lo, hi)) {
    std::cerr << "rru: --inputs expects lo..hi\n";
    return 2;
  }
  ProgramHandle prog;
  if (auto s = rru_program_load(file.c_str(), &prog.p); s != RRU_OK) return report_error(s);
  rru_verify_options opts{};
  opts.rule = rule.c_str();
  opts.bound = bound;
  opts.query = query.c_str();
  opts.lo = lo;
  opts.hi = hi;
  opts.configs = configs.empty() ? nullptr : configs.c_str();
  rru_verify_report* rep = nullptr;
  if (auto s = rru_verify(prog.p, &opts, &rep); s != RRU_OK) return report_error(s);
  std::cout << rru_verify_ledger(rep);
  const bool ok = rru_verify_ok(rep) != 0;
  if (!ok) std::cout << "counterexamples:\n" << rru_verify_failures(rep);
  rru_verify_free(rep);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Repeated recursion unfolding for single-headed simplification rules"};
  app.require_subcommand(1);

  std::string file, query, rule, mode = "rule-order", out_path, inputs, configs, csv_path,
                                  hand_file;
  bool trace = false, show_report = false, markdown = false;
  std::uint64_t max_steps = 0, bound = 0, width = 0, stride = 1;
  std::uint32_t levels = 0, buckets = 7;

  auto* run = app.add_subcommand("run", "Run a query");
  run->add_option("file", file, "Program file")->required();
  run->add_option("-q,--query", query, "Goal, e.g. \"sum(9,R)\"")->required();
  run->add_flag("--trace", trace, "Print one line per transition");
  run->add_option("--max-steps", max_steps, "Step limit");

  auto* tr = app.add_subcommand("transform", "Unfold a recursive rule");
  tr->add_option("file", file, "Program file")->required();
  tr->add_option("--rule", rule, "Rule name (default: the only recursive rule)");
  auto* lv = tr->add_option("--levels", levels, "Number of unfolding levels");
  tr->add_option("--bound", bound, "Recursion depth bound N; unfolds floor(log2 N) levels")
      ->excludes(lv);
  tr->add_option("--mode", mode, "rule-order | recursionless | unbounded")
      ->check(CLI::IsMember({"rule-order", "recursionless", "unbounded"}));
  tr->add_option("--out", out_path, "Write the program to a file");
  tr->add_flag("--report", show_report, "Print the simplification log");

  auto* be = app.add_subcommand("bench", "Measure program variants over an input range");
  be->add_option("file", file, "Program file")->required();
  be->add_option("--rule", rule, "Rule name");
  be->add_option("--bound", bound, "Unfolding bound N")->required();
  be->add_option("--inputs", inputs, "Input range lo..hi")->required();
  be->add_option("--buckets", buckets, "Number of buckets");
  be->add_option("--width", width, "Bucket width (last bucket takes the remainder)");
  be->add_option("--stride", stride, "Run every stride-th input");
  be->add_option("--configs", configs,
                 "Comma-separated: original,rule-order,recursionless,unbounded,hand-optimized");
  be->add_option("--query", query, "Query template with $N or $L")->required();
  be->add_option("--hand", hand_file, "Program for the hand-optimized configuration");
  be->add_option("--csv", csv_path, "Write CSV to a file");
  be->add_flag("--markdown", markdown, "Print markdown tables");

  auto* ve = app.add_subcommand("verify", "Check answers and application bounds");
  ve->add_option("file", file, "Program file")->required();
  ve->add_option("--rule", rule, "Rule name");
  ve->add_option("--bound", bound, "Unfolding bound N")->required();
  ve->add_option("--inputs", inputs, "Input range lo..hi")->required();
  ve->add_option("--configs", configs, "Comma-separated configurations");
  ve->add_option("--query", query, "Query template with $N or $L")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(file, query, trace, max_steps);
  if (tr->parsed())
    return cmd_transform(file, rule, levels, bound, mode, out_path, show_report);
  if (be->parsed())
    return cmd_bench(file, rule, bound, inputs, buckets, width, stride, configs, query, hand_file,
                     csv_path, markdown);
  if (ve->parsed()) return cmd_verify(file, rule, bound, inputs, configs, query);
  return 2;
}
