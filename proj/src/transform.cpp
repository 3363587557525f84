#include "rru/transform.hpp"

#include <bit>

#include "rru/error.hpp"
#include "rru/store.hpp"
#include "rru/syntax.hpp"

namespace rru {

Rule flatten_head(const Rule& r, const std::vector<std::size_t>& positions, VarSupply& supply) {
  avoid(supply, r);
  if (!r.head.is_compound()) return r;
  std::vector<Term> args(r.head.args().begin(), r.head.args().end());
  std::vector<Builtin> eqs;
  for (std::size_t i : positions) {
    if (i >= args.size() || args[i].is_var()) continue;
    Term x = Term::variable(supply.fresh("X"));
    eqs.push_back(TermEq{x, args[i]});
    args[i] = x;
  }
  Rule out = r;
  out.head = Term::compound(r.head.functor(), std::move(args));
  out.guard = std::move(eqs);
  out.guard.insert(out.guard.end(), r.guard.begin(), r.guard.end());
  return out;
}

Rule flatten_head(const Rule& r, VarSupply& supply) {
  std::vector<std::size_t> all;
  for (std::size_t i = 0; i < r.head.arity(); ++i) all.push_back(i);
  return flatten_head(r, all, supply);
}

std::size_t recursive_call_index(const Rule& r, const Rule& v) {
  std::optional<std::size_t> found;
  std::size_t count = 0;
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    const Atom& a = r.body[i];
    if (!a.is_call() || !a.call().is_compound()) continue;
    if (a.call().functor() == v.head.functor() && a.call().arity() == v.head.arity()) {
      found = i;
      ++count;
    }
  }
  if (count != 1)
    throw Error(ErrorKind::MultipleRecursiveCalls,
                "rule " + r.name + " has " + std::to_string(count) + " calls to " +
                    v.head.functor().name() + "/" + std::to_string(v.head.arity()) +
                    ", exactly one is supported");
  return *found;
}

std::vector<std::size_t> blocking_positions(const Rule& r, const Rule& v) {
  const Term& call = r.body[recursive_call_index(r, v)].call();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < call.arity(); ++i)
    if (!match(v.head.arg(i), call.arg(i))) out.push_back(i);
  if (out.empty() && !match(v.head, call)) {
    for (std::size_t i = 0; i < call.arity(); ++i)
      if (!v.head.arg(i).is_var()) out.push_back(i);
  }
  return out;
}

UnfoldResult unfold(const Rule& r, const Rule& v) {
  UnfoldResult res;
  const std::size_t idx = recursive_call_index(r, v);
  const Term& call = r.body[idx].call();

  std::vector<Builtin> cd = r.guard;
  for (const auto& a : r.body)
    if (a.is_builtin()) cd.push_back(a.builtin());
  const ConstraintStore store = ConstraintStore::normalize(cd);

  auto theta = match(v.head, call);
  if (!theta) theta = match(v.head, store.resolve(call));
  if (!theta || !store.entails(TermEq{call, apply(*theta, v.head)})) {
    res.failed_condition = 1;
    res.diagnostic = "condition 1: " + to_string(call) + " is not an instance of the head " +
                     to_string(v.head);
    return res;
  }
  res.theta = *theta;

  std::vector<Builtin> inherited;
  for (const auto& c : v.guard) inherited.push_back(rru::apply(*theta, c));
  const std::vector<Builtin> residual = diff(inherited, store);

  const auto head_ids = head_var_ids(r);
  const auto inst_ids = var_ids(apply(*theta, v.head));
  std::vector<Var> rvars;
  std::unordered_set<VarId> seen;
  for (const auto& c : residual) collect_vars(c, rvars, seen);
  for (const auto& x : rvars) {
    if (inst_ids.count(x.id) && !head_ids.count(x.id)) {
      res.failed_condition = 2;
      res.diagnostic = "condition 2: variable " + std::string(x.print_name()) +
                       " of the inherited guard is shared with the call but not with the head";
      return res;
    }
  }

  std::vector<Builtin> guard = r.guard;
  guard.insert(guard.end(), residual.begin(), residual.end());
  if (!ConstraintStore::normalize(guard).satisfiable()) {
    res.failed_condition = 3;
    res.diagnostic = "condition 3: the combined guard is unsatisfiable";
    return res;
  }

  Rule out;
  out.name = r.name;
  out.head = r.head;
  out.guard = std::move(guard);
  out.recursive = true;
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    if (i != idx) {
      out.body.push_back(r.body[i]);
      continue;
    }
    out.body.push_back(Atom(Builtin(TermEq{call, v.head})));
    out.body.insert(out.body.end(), v.body.begin(), v.body.end());
  }
  res.rule = std::move(out);
  return res;
}

std::size_t levels_for_bound(std::uint64_t bound) {
  if (bound < 2) throw Error(ErrorKind::InvalidArgument, "bound must be at least 2");
  return static_cast<std::size_t>(std::bit_width(bound) - 1);
}

std::string level_rule_name(const std::string& base, std::size_t i) {
  return base + "_" + std::to_string(i);
}

UnfoldLadder repeated_unfold(const Rule& r0, std::size_t levels, const SimplifyOptions& opts) {
  UnfoldLadder ladder;
  ladder.base = r0;
  ladder.base.recursive = true;
  VarSupply supply;
  avoid(supply, r0);

  Rule cur = ladder.base;
  for (std::size_t i = 1; i <= levels; ++i) {
    Rule copy = rename_apart(cur, supply);
    UnfoldResult res = unfold(cur, copy);
    bool flat = false;
    if (!res && res.failed_condition == 1) {
      copy = flatten_head(copy, blocking_positions(cur, copy), supply);
      res = unfold(cur, copy);
      flat = true;
    }
    if (!res) {
      ladder.warnings.push_back("level " + std::to_string(i) + ": " + res.diagnostic +
                                "; ladder truncated at level " + std::to_string(i - 1));
      break;
    }
    Rule unfolded = *res.rule;
    unfolded.name = level_rule_name(r0.name, i);
    SimplifyResult s = simplify_rule(unfolded, opts);
    s.rule.name = unfolded.name;
    s.rule.recursive = true;
    if (!ConstraintStore::normalize(s.rule.guard).satisfiable()) {
      ladder.warnings.push_back("level " + std::to_string(i) +
                                ": simplified guard is unsatisfiable; ladder truncated at level " +
                                std::to_string(i - 1));
      break;
    }
    avoid(supply, s.rule);
    ladder.unsimplified.push_back(std::move(unfolded));
    ladder.levels.push_back(s.rule);
    ladder.reports.push_back(std::move(s.report));
    ladder.flattened.push_back(flat);
    cur = std::move(s.rule);
  }
  return ladder;
}

std::vector<Rule> rules_except(const Program& p, const std::string& name) {
  std::vector<Rule> out;
  for (const auto& r : p.rules)
    if (r.name != name) out.push_back(r);
  return out;
}

Program assemble_rule_order(const Program& p, const UnfoldLadder& ladder) {
  Program out;
  out.interpreted = p.interpreted;
  for (std::size_t i = ladder.k(); i >= 1; --i) out.rules.push_back(ladder.level(i));
  out.rules.push_back(ladder.base);
  for (auto& r : rules_except(p, ladder.base.name)) out.rules.push_back(std::move(r));
  out.infer_recursion();
  return out;
}

Symbol level_symbol(Symbol functor, std::size_t i) {
  return Symbol::intern(functor.name() + std::to_string(i));
}

namespace {

Term with_functor(const Term& t, Symbol f) {
  return Term::compound(f, std::vector<Term>(t.args().begin(), t.args().end()));
}

Rule retarget(const Rule& r, Symbol head_sym, Symbol from, Symbol to) {
  Rule out = r;
  out.head = with_functor(r.head, head_sym);
  for (auto& a : out.body) {
    if (a.is_call() && a.call().is_compound() && a.call().functor() == from &&
        a.call().arity() == r.head.arity())
      a = Atom(with_functor(a.call(), to));
  }
  return out;
}

Rule fall_through(const Rule& level, Symbol from, Symbol to, const std::string& name) {
  VarSupply supply;
  avoid(supply, level);
  std::vector<Term> args;
  std::unordered_set<VarId> used;
  for (std::size_t j = 0; j < level.head.arity(); ++j) {
    const Term& a = level.head.arg(j);
    if (a.is_var() && used.insert(a.var_id()).second)
      args.push_back(Term::variable(supply.fresh_like(a.as_var())));
    else
      args.push_back(Term::variable(supply.fresh("X" + std::to_string(j + 1))));
  }
  Rule r;
  r.name = name;
  r.head = Term::compound(from, args);
  r.body.emplace_back(Term::compound(to, args));
  return r;
}

}  // namespace

Program recursionless(const UnfoldLadder& ladder, const std::vector<Rule>& base_rules) {
  const Symbol c = ladder.base.head.functor();
  Program out;
  for (std::size_t i = ladder.k() + 1; i-- > 0;) {
    const Symbol ci = level_symbol(c, i);
    const Symbol below = i == 0 ? c : level_symbol(c, i - 1);
    Rule r = retarget(ladder.level(i), ci, c, below);
    r.name = level_rule_name(ladder.base.name, i);
    out.rules.push_back(r);
    out.rules.push_back(fall_through(r, ci, below, r.name + "_fall"));
  }
  for (const auto& b : base_rules) out.rules.push_back(b);
  out.infer_recursion();
  return out;
}

Program unbounded_cap(const Program& recless, const UnfoldLadder& ladder) {
  const Symbol c = ladder.base.head.functor();
  const std::size_t k = ladder.k();
  const Symbol ck = level_symbol(c, k);
  const Symbol below = k == 0 ? c : level_symbol(c, k - 1);
  const std::string top = level_rule_name(ladder.base.name, k);
  Program out = recless;
  const std::size_t at = out.index_of(top);
  Rule cap = retarget(out.rules[at], ck, below, ck);
  cap.name = top + "_cap";
  out.rules.insert(out.rules.begin() + static_cast<std::ptrdiff_t>(at), cap);
  out.infer_recursion();
  return out;
}

const char* mode_name(TransformMode m) {
  switch (m) {
    case TransformMode::RuleOrder: return "rule-order";
    case TransformMode::Recursionless: return "recursionless";
    case TransformMode::Unbounded: return "unbounded";
  }
  return "?";
}

std::optional<TransformMode> parse_mode(std::string_view s) {
  for (auto m : {TransformMode::RuleOrder, TransformMode::Recursionless, TransformMode::Unbounded})
    if (s == mode_name(m)) return m;
  return std::nullopt;
}

TransformOutput transform(const Program& p, const TransformConfig& config) {
  Program prog = p;
  prog.infer_recursion();
  const Rule* target = nullptr;
  if (!config.rule.empty()) {
    target = &prog.rules[prog.index_of(config.rule)];
  } else {
    for (const auto& r : prog.rules) {
      if (!r.recursive) continue;
      if (target)
        throw Error(ErrorKind::InvalidArgument,
                    "several recursive rules; select one with --rule");
      target = &r;
    }
    if (!target) throw Error(ErrorKind::InvalidArgument, "no recursive rule to unfold");
  }
  const std::size_t levels = config.levels ? *config.levels : levels_for_bound(config.bound);

  TransformOutput out;
  out.ladder = repeated_unfold(*target, levels);
  const Symbol c = target->head.functor();
  switch (config.mode) {
    case TransformMode::RuleOrder:
      out.program = assemble_rule_order(prog, out.ladder);
      out.entry = c;
      break;
    case TransformMode::Recursionless:
    case TransformMode::Unbounded:
      out.program = recursionless(out.ladder, rules_except(prog, target->name));
      if (config.mode == TransformMode::Unbounded)
        out.program = unbounded_cap(out.program, out.ladder);
      out.entry = level_symbol(c, out.ladder.k());
      break;
  }
  out.program.interpreted = prog.interpreted;
  return out;
}

}  // namespace rru
