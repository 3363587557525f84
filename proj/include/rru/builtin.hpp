#pragma once

// Built-in constraints interpreted by the constraint theory.

#include <string>
#include <variant>
#include <vector>

#include "rru/linexpr.hpp"
#include "rru/term.hpp"

namespace rru {

enum class Rel { Lt, Le, Eq, Ne, Ge, Gt };

const char* rel_symbol(Rel r);
Rel negate(Rel r);
/// Relation obtained by swapping the sides: a < b  <=>  b > a.
Rel flip(Rel r);
/// Whether `diff rel 0` holds.
bool rel_holds(Rel r, const Int& diff);

/// Syntactic equality over terms (`=`).
struct TermEq {
  Term lhs, rhs;
  friend bool operator==(const TermEq&, const TermEq&) = default;
};
/// Linear comparison between two arithmetic expressions.
struct LinCmp {
  Rel rel;
  LinExpr lhs, rhs;
  friend bool operator==(const LinCmp&, const LinCmp&) = default;
};
/// `X := e` (also written `X is e`).
struct ArithAssign {
  Var target;
  LinExpr expr;
  friend bool operator==(const ArithAssign&, const ArithAssign&) = default;
};
struct TrueC {
  friend bool operator==(TrueC, TrueC) { return true; }
};
struct FalseC {
  friend bool operator==(FalseC, FalseC) { return true; }
};

using Builtin = std::variant<TermEq, LinCmp, ArithAssign, TrueC, FalseC>;

Builtin apply(const Substitution& sub, const Builtin& b);
void collect_vars(const Builtin& b, std::vector<Var>& out,
                  std::unordered_set<VarId>& seen);
std::vector<Var> vars_of(const Builtin& b);
bool mentions(const Builtin& b, VarId v);

/// True for comparisons, assignments and equalities with an arithmetic side.
bool is_arithmetic(const Builtin& b);
/// Term is an integer or an arithmetic compound.
bool is_arith_term(const Term& t);

/// The constraint as `e rel 0` when it is linear arithmetic.
struct LinearForm {
  Rel rel;
  LinExpr expr;
};
std::optional<LinearForm> linear_form(const Builtin& b);

std::string to_string(const Builtin& b);

}  // namespace rru
