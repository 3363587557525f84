#pragma once

// Instrumented interpreter for single-headed simplification rules under the
// refined semantics: leftmost goal first, rules tried in textual order,
// guards checked by entailment, committed choice.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rru/rule.hpp"
#include "rru/store.hpp"

namespace rru {

struct RunLimits {
  std::uint64_t max_steps = 200'000'000;
  std::size_t max_goals = 50'000'000;
};

struct RunStats {
  std::uint64_t steps = 0;
  std::uint64_t head_matches = 0;   // head-match attempts, fired or not
  std::uint64_t rule_attempts = 0;  // attempts that did not fire
  std::uint64_t applications = 0;
  std::vector<std::uint64_t> rule_applications;  // indexed like Program::rules
  std::uint64_t recursive_applications = 0;
  std::uint64_t arith_cost = 0;
  std::uint64_t append_cost = 0;

  /// Arithmetic units plus append units.
  std::uint64_t builtin_cost() const { return arith_cost + append_cost; }
  std::uint64_t max_rule_applications() const;
};

enum class Outcome { Success, Fail, Stuck, LimitExceeded, Unbound, ModeError, NonLinear };
const char* outcome_name(Outcome o);

struct RunResult {
  Outcome outcome = Outcome::Success;
  std::string message;
  RunStats stats;
  ConstraintStore store;
  /// Query variables with their resolved values.
  std::vector<std::pair<Var, Term>> answer;
  std::vector<std::string> trace;

  bool ok() const { return outcome == Outcome::Success; }
  /// "X = 1, Y = [2,3]" style rendering of the answer.
  std::string answer_text() const;
};

class Engine {
 public:
  explicit Engine(Program program);
  ~Engine();
  Engine(Engine&&) noexcept;
  Engine& operator=(Engine&&) noexcept;

  const Program& program() const { return program_; }

  struct State {
    std::vector<Atom> stack;  // back() is the leftmost goal
    ConstraintStore store;
    VarSupply supply;
    RunStats stats;
    std::vector<Var> query_vars;
  };

  enum class Step { Progress, Done, Fail, Stuck };

  /// Builds the initial state. `supply` must already avoid the goal's
  /// variables.
  State initial(const Goal& goal, std::vector<Var> query_vars, VarSupply supply) const;

  /// One transition. Throws Error(ModeError|NonLinear|Unbound).
  Step step(State& s, std::vector<std::string>* trace = nullptr) const;

  /// Attempts one rule on a call. On success returns the instantiated body.
  /// Counts the attempt in `stats`.
  std::optional<Goal> try_rule(const Term& call, std::size_t rule_index,
                               const ConstraintStore& store, VarSupply& supply,
                               RunStats& stats) const;

  RunResult run(State s, const RunLimits& limits = {}, bool trace = false) const;
  /// Parses `query` and runs it.
  RunResult run(std::string_view query, const RunLimits& limits = {},
                bool trace = false) const;
  RunResult run(const Goal& goal, const std::vector<Var>& query_vars,
                const RunLimits& limits = {}, bool trace = false) const;

  /// The variable supply start that avoids every program variable.
  VarSupply fresh_supply() const;

 private:
  struct Compiled;
  Program program_;
  std::unique_ptr<Compiled> compiled_;
};

/// Interpreted append: binds z to x ++ y. Returns the number of elements of
/// x (the cost). Throws Error(ModeError) when x is not a closed list.
std::size_t interpreted_append(const Term& x, const Term& y, const Term& z,
                               ConstraintStore& store);

}  // namespace rru
