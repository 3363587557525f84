#pragma once

// Textual syntax.
//
//   rule    := [name ':'] head '<=>' [guard '|'] body '.'
//   guard   := builtin {',' builtin}
//   body    := goal {',' goal}
//
// Variables start with an uppercase letter or '_'; functors with a lowercase
// letter. Lists use Prolog notation. Built-ins: = (term equality), =:=, =\=,
// <, >, =< (also <=), >=, := (also is), true, false. `%` starts a comment.

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rru/rule.hpp"

namespace rru {

struct SourceProgram {
  Program program;
  std::vector<std::size_t> rule_lines;  // 1-based line of each rule
};

/// Throws Error(Syntax) with a "line:col:" prefix, or Error(NonLinear).
SourceProgram parse_source(std::string_view text, VarSupply* supply = nullptr);
Program parse_program(std::string_view text, VarSupply* supply = nullptr);
Rule parse_rule(std::string_view text, VarSupply* supply = nullptr);

struct ParsedGoal {
  Goal goal;
  /// Named variables in order of first occurrence.
  std::vector<Var> vars;
};
ParsedGoal parse_goal(std::string_view text, VarSupply& supply);
Term parse_term(std::string_view text, VarSupply& supply);

enum class Naming {
  Source,     // source names, disambiguated with _1, _2, ...
  Canonical,  // A..Z, A1..Z1, ... in order of first occurrence
};

/// Per-rule variable naming plus term/constraint printing.
class Printer {
 public:
  explicit Printer(Naming naming = Naming::Source) : naming_(naming) {}

  /// Assigns names to the variables of `r` (resets previous names).
  void name_rule(const Rule& r);
  void name_vars(const std::vector<Var>& vars);

  std::string term(const Term& t);
  std::string lin(const LinExpr& e);
  std::string builtin(const Builtin& b);
  std::string atom(const Atom& a);
  std::string goal(const Goal& g);
  std::string guard(const std::vector<Builtin>& g);
  std::string rule(const Rule& r, bool with_name = true);

  const std::string& var_name(const Var& v);

 private:
  void term_into(const Term& t, int max_prec, std::string& out);
  std::string fresh_name(const Var& v);

  Naming naming_;
  std::unordered_map<VarId, std::string> names_;
  std::unordered_set<std::string> used_;
  std::size_t canonical_next_ = 0;
};

std::string print_rule(const Rule& r, Naming naming = Naming::Source);
std::string print_program(const Program& p, Naming naming = Naming::Source);
std::string print_goal(const Goal& g);

}  // namespace rru
