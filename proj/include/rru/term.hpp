#pragma once

// Terms, variables, substitutions and one-way matching.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace rru {

using Int = boost::multiprecision::cpp_int;
using VarId = std::uint64_t;

/// Interned function/constraint symbol. Comparison is by identity.
class Symbol {
 public:
  Symbol() = default;
  static Symbol intern(std::string_view name);

  const std::string& name() const;
  bool valid() const { return data_ != nullptr; }

  friend bool operator==(Symbol a, Symbol b) { return a.data_ == b.data_; }
  friend bool operator!=(Symbol a, Symbol b) { return a.data_ != b.data_; }
  /// Orders by name, so containers keyed by Symbol iterate deterministically.
  friend bool operator<(Symbol a, Symbol b);

  std::size_t hash() const { return std::hash<const void*>{}(data_); }

 private:
  explicit Symbol(const std::string* d) : data_(d) {}
  const std::string* data_ = nullptr;
};

using NameRef = std::shared_ptr<const std::string>;

/// A logic variable: a unique id plus a print name shared by all renamings.
struct Var {
  VarId id = 0;
  NameRef name;

  std::string_view print_name() const;
  friend bool operator==(const Var& a, const Var& b) { return a.id == b.id; }
  friend bool operator<(const Var& a, const Var& b) { return a.id < b.id; }
};

class Term;

namespace detail {
struct CompoundNode;
struct ConsNode;
struct BigIntNode;
}  // namespace detail

class Term {
 public:
  enum class Kind : std::uint8_t { Var, Int, Compound, Nil, Cons };

  Term() : kind_(Kind::Nil), small_(0) {}  // the empty list

  static Term variable(const Var& v);
  static Term integer(const Int& v);
  static Term integer(std::int64_t v);
  static Term compound(Symbol functor, std::vector<Term> args);
  static Term atom(Symbol functor) { return compound(functor, {}); }
  static Term nil() { return Term(); }
  static Term cons(Term head, Term tail);
  static Term list(const std::vector<Term>& elems, Term tail = Term());

  Kind kind() const { return kind_; }
  bool is_var() const { return kind_ == Kind::Var; }
  bool is_int() const { return kind_ == Kind::Int; }
  bool is_compound() const { return kind_ == Kind::Compound; }
  bool is_nil() const { return kind_ == Kind::Nil; }
  bool is_cons() const { return kind_ == Kind::Cons; }
  /// Compound whose functor is +, - or * (interpreted arithmetic).
  bool is_arith() const;
  bool ground() const;

  Var as_var() const;
  VarId var_id() const { return static_cast<VarId>(small_); }
  Int int_value() const;
  /// Fast path: true and sets `out` when the integer fits in 64 bits.
  bool small_int(std::int64_t& out) const;

  Symbol functor() const;
  std::span<const Term> args() const;
  std::size_t arity() const { return args().size(); }
  const Term& arg(std::size_t i) const { return args()[i]; }

  const Term& head() const;
  const Term& tail() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  Kind kind_ = Kind::Nil;
  std::int64_t small_ = 0;
  std::shared_ptr<const void> node_;
};

namespace detail {
struct CompoundNode {
  Symbol functor;
  std::vector<Term> args;
  bool ground;
};
struct ConsNode {
  Term head;
  Term tail;
  bool ground;
};
struct BigIntNode {
  Int value;
};
}  // namespace detail

/// Walks a list spine. Returns the elements and the final tail.
struct ListView {
  std::vector<Term> elems;
  Term tail;
  bool closed() const { return tail.is_nil(); }
};
ListView list_view(const Term& t);

/// Finite map from variables to terms.
class Substitution {
 public:
  Substitution() = default;

  void bind(const Var& v, Term t) { map_.insert_or_assign(v.id, std::move(t)); }
  void bind(VarId v, Term t) { map_.insert_or_assign(v, std::move(t)); }
  const Term* lookup(VarId v) const;
  bool contains(VarId v) const { return map_.count(v) != 0; }
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  std::vector<VarId> domain() const;

  /// Resolves chains through the substitution so that no range term mentions
  /// a domain variable (cycles are left as-is).
  Substitution normalized() const;

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::unordered_map<VarId, Term> map_;
};

Term apply(const Substitution& sub, const Term& t);

/// One-way matching: finds θ with dom(θ) ⊆ vars(pattern) and
/// apply(θ, pattern) == subject.
std::optional<Substitution> match(const Term& pattern, const Term& subject);
/// Extends `sub` in place; returns false (leaving `sub` partially extended)
/// on mismatch.
bool match_into(const Term& pattern, const Term& subject, Substitution& sub);

/// Fresh variable generator. Single owner.
class VarSupply {
 public:
  explicit VarSupply(VarId next = 1) : next_(next) {}

  void avoid(VarId id) {
    if (id >= next_) next_ = id + 1;
  }
  void avoid(const Term& t);

  Var fresh(NameRef name) { return Var{next_++, std::move(name)}; }
  Var fresh(std::string_view name);
  Var fresh_like(const Var& v) { return fresh(v.name); }
  VarId peek() const { return next_; }

 private:
  VarId next_;
};

/// Variables of a term in first-occurrence order, without duplicates.
std::vector<Var> vars_of(const Term& t);
void collect_vars(const Term& t, std::vector<Var>& out,
                  std::unordered_set<VarId>& seen);
std::unordered_set<VarId> var_ids(const Term& t);
bool occurs(VarId v, const Term& t);

/// Renames every variable of `t` to a fresh one. Returns the copy and the
/// renaming used.
std::pair<Term, Substitution> rename_apart(const Term& t, VarSupply& supply);

/// True when `a` and `b` are variants of each other (a variable bijection
/// maps one onto the other).
bool alpha_equivalent(const Term& a, const Term& b);

std::string to_string(const Term& t);

Symbol sym_plus();
Symbol sym_minus();
Symbol sym_times();

}  // namespace rru

template <>
struct std::hash<rru::Symbol> {
  std::size_t operator()(rru::Symbol s) const noexcept { return s.hash(); }
};
