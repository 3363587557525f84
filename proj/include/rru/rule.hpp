#pragma once

// Rules, goals and programs.

#include <string>
#include <variant>
#include <vector>

#include "rru/builtin.hpp"
#include "rru/term.hpp"

namespace rru {

/// A goal atom: a call to a user-defined (or interpreted) constraint, or a
/// built-in constraint.
class Atom {
 public:
  Atom(Term call) : v_(std::move(call)) {}
  Atom(Builtin b) : v_(std::move(b)) {}

  bool is_call() const { return std::holds_alternative<Term>(v_); }
  bool is_builtin() const { return !is_call(); }
  const Term& call() const { return std::get<Term>(v_); }
  const Builtin& builtin() const { return std::get<Builtin>(v_); }

  friend bool operator==(const Atom&, const Atom&) = default;

 private:
  std::variant<Term, Builtin> v_;
};

using Goal = std::vector<Atom>;

Atom apply(const Substitution& sub, const Atom& a);
Goal apply(const Substitution& sub, const Goal& g);
void collect_vars(const Atom& a, std::vector<Var>& out,
                  std::unordered_set<VarId>& seen);
std::string to_string(const Atom& a);

struct Rule {
  std::string name;
  Term head;
  std::vector<Builtin> guard;
  Goal body;
  /// Set by Program::infer_recursion (or by the transformer).
  bool recursive = false;
};

/// Variables in order of first occurrence (head, guard, body).
std::vector<Var> vars_of(const Rule& r);
std::unordered_set<VarId> head_var_ids(const Rule& r);
Rule apply(const Substitution& sub, const Rule& r);
/// Copy of `r` with every variable replaced by a fresh one.
Rule rename_apart(const Rule& r, VarSupply& supply);
/// Ensures the supply never produces a variable of `r`.
void avoid(VarSupply& supply, const Rule& r);

/// Variant check ignoring rule names: a single variable bijection maps
/// head, guard and body of one rule onto the other. Arithmetic is
/// compared as linear expressions.
bool alpha_equivalent(const Rule& a, const Rule& b);

/// Symbol name without a trailing run of digits ("sum12" -> "sum").
std::string_view symbol_stem(std::string_view name);

/// Rule whose body is a single call with the head's arguments, all
/// distinct variables, and no guard.
bool is_fall_through(const Rule& r);

/// A rule is recursive if its body calls its own head symbol, or a symbol
/// with the same stem (ladder levels), unless it is a fall-through.
bool infer_recursive(const Rule& r);

enum class InterpretedKind { Append };

struct InterpretedDef {
  Symbol functor;
  std::size_t arity;
  InterpretedKind kind;
};

struct Program {
  std::vector<Rule> rules;
  std::vector<InterpretedDef> interpreted = default_interpreted();

  static std::vector<InterpretedDef> default_interpreted();
  const InterpretedDef* interpreted_def(const Term& call) const;
  void infer_recursion();
  const Rule* find(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;
};

bool alpha_equivalent(const Program& a, const Program& b);

}  // namespace rru
