#include "rru/term.hpp"

#include <limits>
#include <map>
#include <mutex>

#include "rru/error.hpp"

namespace rru {

namespace {

struct SymbolTable {
  std::mutex mu;
  std::map<std::string, std::unique_ptr<std::string>, std::less<>> names;
};

SymbolTable& symbol_table() {
  static SymbolTable table;
  return table;
}

}  // namespace

Symbol Symbol::intern(std::string_view name) {
  auto& table = symbol_table();
  std::lock_guard lock(table.mu);
  auto it = table.names.find(name);
  if (it == table.names.end()) {
    auto owned = std::make_unique<std::string>(name);
    it = table.names.emplace(std::string(name), std::move(owned)).first;
  }
  return Symbol(it->second.get());
}

const std::string& Symbol::name() const {
  static const std::string empty;
  return data_ ? *data_ : empty;
}

bool operator<(Symbol a, Symbol b) {
  if (a.data_ == b.data_) return false;
  return a.name() < b.name();
}

Symbol sym_plus() {
  static const Symbol s = Symbol::intern("+");
  return s;
}
Symbol sym_minus() {
  static const Symbol s = Symbol::intern("-");
  return s;
}
Symbol sym_times() {
  static const Symbol s = Symbol::intern("*");
  return s;
}

std::string_view Var::print_name() const {
  if (name && !name->empty()) return *name;
  return "_";
}

// ---------------------------------------------------------------------------
// Term

Term Term::variable(const Var& v) {
  Term t;
  t.kind_ = Kind::Var;
  t.small_ = static_cast<std::int64_t>(v.id);
  t.node_ = v.name;
  return t;
}

Term Term::integer(std::int64_t v) {
  Term t;
  t.kind_ = Kind::Int;
  t.small_ = v;
  return t;
}

Term Term::integer(const Int& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() &&
      v <= std::numeric_limits<std::int64_t>::max()) {
    return integer(static_cast<std::int64_t>(v));
  }
  Term t;
  t.kind_ = Kind::Int;
  t.node_ = std::make_shared<const detail::BigIntNode>(detail::BigIntNode{v});
  return t;
}

Term Term::compound(Symbol functor, std::vector<Term> args) {
  bool ground = true;
  for (const auto& a : args) ground = ground && a.ground();
  Term t;
  t.kind_ = Kind::Compound;
  t.node_ = std::make_shared<const detail::CompoundNode>(
      detail::CompoundNode{functor, std::move(args), ground});
  return t;
}

Term Term::cons(Term head, Term tail) {
  const bool ground = head.ground() && tail.ground();
  Term t;
  t.kind_ = Kind::Cons;
  t.node_ = std::make_shared<const detail::ConsNode>(
      detail::ConsNode{std::move(head), std::move(tail), ground});
  return t;
}

Term Term::list(const std::vector<Term>& elems, Term tail) {
  Term out = std::move(tail);
  for (auto it = elems.rbegin(); it != elems.rend(); ++it) out = cons(*it, out);
  return out;
}

bool Term::is_arith() const {
  if (kind_ != Kind::Compound) return false;
  const auto& n = *static_cast<const detail::CompoundNode*>(node_.get());
  const auto f = n.functor;
  if (f == sym_times() || f == sym_plus()) return n.args.size() == 2;
  if (f == sym_minus()) return n.args.size() == 1 || n.args.size() == 2;
  return false;
}

bool Term::ground() const {
  switch (kind_) {
    case Kind::Var:
      return false;
    case Kind::Int:
    case Kind::Nil:
      return true;
    case Kind::Compound:
      return static_cast<const detail::CompoundNode*>(node_.get())->ground;
    case Kind::Cons:
      return static_cast<const detail::ConsNode*>(node_.get())->ground;
  }
  return true;
}

Var Term::as_var() const {
  return Var{static_cast<VarId>(small_),
             std::static_pointer_cast<const std::string>(node_)};
}

Int Term::int_value() const {
  if (node_) return static_cast<const detail::BigIntNode*>(node_.get())->value;
  return Int(small_);
}

bool Term::small_int(std::int64_t& out) const {
  if (kind_ != Kind::Int || node_) return false;
  out = small_;
  return true;
}

Symbol Term::functor() const {
  return static_cast<const detail::CompoundNode*>(node_.get())->functor;
}

std::span<const Term> Term::args() const {
  if (kind_ != Kind::Compound) return {};
  const auto& v = static_cast<const detail::CompoundNode*>(node_.get())->args;
  return {v.data(), v.size()};
}

const Term& Term::head() const {
  return static_cast<const detail::ConsNode*>(node_.get())->head;
}

const Term& Term::tail() const {
  return static_cast<const detail::ConsNode*>(node_.get())->tail;
}

bool operator==(const Term& a0, const Term& b0) {
  const Term* a = &a0;
  const Term* b = &b0;
  for (;;) {
    if (a->kind_ != b->kind_) return false;
    if (a->node_ == b->node_ && a->small_ == b->small_) return true;
    switch (a->kind_) {
      case Term::Kind::Var:
        return a->small_ == b->small_;
      case Term::Kind::Nil:
        return true;
      case Term::Kind::Int:
        if (!a->node_ && !b->node_) return a->small_ == b->small_;
        return a->int_value() == b->int_value();
      case Term::Kind::Compound: {
        if (a->functor() != b->functor()) return false;
        auto as = a->args();
        auto bs = b->args();
        if (as.size() != bs.size()) return false;
        for (std::size_t i = 0; i < as.size(); ++i)
          if (!(as[i] == bs[i])) return false;
        return true;
      }
      case Term::Kind::Cons:
        if (!(a->head() == b->head())) return false;
        a = &a->tail();
        b = &b->tail();
        continue;
    }
    return false;
  }
}

ListView list_view(const Term& t) {
  ListView v;
  const Term* cur = &t;
  while (cur->is_cons()) {
    v.elems.push_back(cur->head());
    cur = &cur->tail();
  }
  v.tail = *cur;
  return v;
}

// ---------------------------------------------------------------------------
// Substitution

const Term* Substitution::lookup(VarId v) const {
  auto it = map_.find(v);
  return it == map_.end() ? nullptr : &it->second;
}

std::vector<VarId> Substitution::domain() const {
  std::vector<VarId> d;
  d.reserve(map_.size());
  for (const auto& [k, _] : map_) d.push_back(k);
  std::sort(d.begin(), d.end());
  return d;
}

Substitution Substitution::normalized() const {
  Substitution out = *this;
  // Bounded by the domain size: every round either reaches a fixed point or
  // resolves one more link of some chain.
  for (std::size_t round = 0; round <= map_.size(); ++round) {
    bool changed = false;
    for (auto& [k, v] : out.map_) {
      Term next = apply(*this, v);
      if (next != v) {
        v = std::move(next);
        changed = true;
      }
    }
    if (!changed) break;
  }
  return out;
}

Term apply(const Substitution& sub, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      const Term* r = sub.lookup(t.var_id());
      return r ? *r : t;
    }
    case Term::Kind::Int:
    case Term::Kind::Nil:
      return t;
    case Term::Kind::Compound: {
      if (t.ground()) return t;
      std::vector<Term> args;
      args.reserve(t.arity());
      for (const auto& a : t.args()) args.push_back(apply(sub, a));
      return Term::compound(t.functor(), std::move(args));
    }
    case Term::Kind::Cons: {
      if (t.ground()) return t;
      ListView v = list_view(t);
      for (auto& e : v.elems) e = apply(sub, e);
      return Term::list(v.elems, apply(sub, v.tail));
    }
  }
  return t;
}

bool match_into(const Term& pattern, const Term& subject, Substitution& sub) {
  const Term* p = &pattern;
  const Term* s = &subject;
  for (;;) {
    switch (p->kind()) {
      case Term::Kind::Var: {
        if (const Term* bound = sub.lookup(p->var_id())) return *bound == *s;
        sub.bind(p->var_id(), *s);
        return true;
      }
      case Term::Kind::Int:
      case Term::Kind::Nil:
        return *p == *s;
      case Term::Kind::Compound: {
        if (!s->is_compound() || s->functor() != p->functor() ||
            s->arity() != p->arity())
          return false;
        for (std::size_t i = 0; i < p->arity(); ++i)
          if (!match_into(p->arg(i), s->arg(i), sub)) return false;
        return true;
      }
      case Term::Kind::Cons:
        if (!s->is_cons()) return false;
        if (!match_into(p->head(), s->head(), sub)) return false;
        p = &p->tail();
        s = &s->tail();
        continue;
    }
    return false;
  }
}

std::optional<Substitution> match(const Term& pattern, const Term& subject) {
  Substitution sub;
  if (!match_into(pattern, subject, sub)) return std::nullopt;
  return sub;
}

// ---------------------------------------------------------------------------
// Variables

void VarSupply::avoid(const Term& t) {
  for (const auto& v : vars_of(t)) avoid(v.id);
}

Var VarSupply::fresh(std::string_view name) {
  return fresh(std::make_shared<const std::string>(name));
}

void collect_vars(const Term& t, std::vector<Var>& out,
                  std::unordered_set<VarId>& seen) {
  const Term* cur = &t;
  for (;;) {
    switch (cur->kind()) {
      case Term::Kind::Var:
        if (seen.insert(cur->var_id()).second) out.push_back(cur->as_var());
        return;
      case Term::Kind::Int:
      case Term::Kind::Nil:
        return;
      case Term::Kind::Compound:
        if (cur->ground()) return;
        for (const auto& a : cur->args()) collect_vars(a, out, seen);
        return;
      case Term::Kind::Cons:
        if (cur->ground()) return;
        collect_vars(cur->head(), out, seen);
        cur = &cur->tail();
        continue;
    }
  }
}

std::vector<Var> vars_of(const Term& t) {
  std::vector<Var> out;
  std::unordered_set<VarId> seen;
  collect_vars(t, out, seen);
  return out;
}

std::unordered_set<VarId> var_ids(const Term& t) {
  std::unordered_set<VarId> ids;
  for (const auto& v : vars_of(t)) ids.insert(v.id);
  return ids;
}

bool occurs(VarId v, const Term& t) {
  const Term* cur = &t;
  for (;;) {
    switch (cur->kind()) {
      case Term::Kind::Var:
        return cur->var_id() == v;
      case Term::Kind::Int:
      case Term::Kind::Nil:
        return false;
      case Term::Kind::Compound:
        if (cur->ground()) return false;
        for (const auto& a : cur->args())
          if (occurs(v, a)) return true;
        return false;
      case Term::Kind::Cons:
        if (cur->ground()) return false;
        if (occurs(v, cur->head())) return true;
        cur = &cur->tail();
        continue;
    }
  }
}

std::pair<Term, Substitution> rename_apart(const Term& t, VarSupply& supply) {
  Substitution ren;
  for (const auto& v : vars_of(t))
    ren.bind(v, Term::variable(supply.fresh_like(v)));
  Term copy = apply(ren, t);
  return {std::move(copy), std::move(ren)};
}

namespace {

bool alpha_into(const Term& a, const Term& b,
                std::unordered_map<VarId, VarId>& fwd,
                std::unordered_map<VarId, VarId>& bwd) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: {
      auto f = fwd.find(a.var_id());
      auto g = bwd.find(b.var_id());
      if (f == fwd.end() && g == bwd.end()) {
        fwd.emplace(a.var_id(), b.var_id());
        bwd.emplace(b.var_id(), a.var_id());
        return true;
      }
      return f != fwd.end() && g != bwd.end() && f->second == b.var_id() &&
             g->second == a.var_id();
    }
    case Term::Kind::Int:
    case Term::Kind::Nil:
      return a == b;
    case Term::Kind::Compound:
      if (a.functor() != b.functor() || a.arity() != b.arity()) return false;
      for (std::size_t i = 0; i < a.arity(); ++i)
        if (!alpha_into(a.arg(i), b.arg(i), fwd, bwd)) return false;
      return true;
    case Term::Kind::Cons: {
      ListView va = list_view(a);
      ListView vb = list_view(b);
      if (va.elems.size() != vb.elems.size()) return false;
      for (std::size_t i = 0; i < va.elems.size(); ++i)
        if (!alpha_into(va.elems[i], vb.elems[i], fwd, bwd)) return false;
      return alpha_into(va.tail, vb.tail, fwd, bwd);
    }
  }
  return false;
}

}  // namespace

bool alpha_equivalent(const Term& a, const Term& b) {
  std::unordered_map<VarId, VarId> fwd, bwd;
  return alpha_into(a, b, fwd, bwd);
}

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::NonLinear: return "NonLinear";
    case ErrorKind::Unbound: return "Unbound";
    case ErrorKind::ModeError: return "ModeError";
    case ErrorKind::MultipleRecursiveCalls: return "MultipleRecursiveCalls";
    case ErrorKind::Transform: return "TransformError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

}  // namespace rru
