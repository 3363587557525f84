#include "rru/syntax.hpp"

#include <cctype>

#include "rru/error.hpp"

namespace rru {

namespace {

enum class Tok { Var, Atom, Int, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1, col = 1;
};

// Longest first.
constexpr std::string_view kPuncts[] = {
    "<=>", "=:=", "=\\=", ":=", "=<", "<=", ">=", "(", ")", "[", "]", "|",
    ",",   ".",   ":",    "=",  "<",  ">",  "+",  "-", "*",
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return cur_; }
  Token next() {
    Token t = cur_;
    advance();
    return t;
  }
  // One token of lookahead beyond peek().
  Token peek2() {
    Lexer copy = *this;
    copy.advance();
    return copy.cur_;
  }

  [[noreturn]] void error_at(const Token& t, const std::string& msg) const {
    throw Error(ErrorKind::Syntax,
                std::to_string(t.line) + ":" + std::to_string(t.col) + ": " + msg);
  }

 private:
  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void advance() {
    skip_space();
    cur_ = Token{};
    cur_.line = line_;
    cur_.col = col_;
    if (pos_ >= text_.size()) {
      cur_.kind = Tok::End;
      return;
    }
    const char c = text_[pos_];
    const std::size_t start = pos_;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        bump();
      cur_.text = std::string(text_.substr(start, pos_ - start));
      cur_.kind = (std::isupper(static_cast<unsigned char>(c)) || c == '_') ? Tok::Var : Tok::Atom;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) bump();
      cur_.text = std::string(text_.substr(start, pos_ - start));
      cur_.kind = Tok::Int;
      return;
    }
    for (auto p : kPuncts) {
      if (text_.substr(pos_, p.size()) == p) {
        for (std::size_t i = 0; i < p.size(); ++i) bump();
        cur_.text = std::string(p);
        cur_.kind = Tok::Punct;
        return;
      }
    }
    cur_.text = std::string(1, c);
    error_at(cur_, "unexpected character '" + cur_.text + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
  Token cur_;
};

bool is_punct(const Token& t, std::string_view p) {
  return t.kind == Tok::Punct && t.text == p;
}

bool is_relation(const Token& t) {
  if (t.kind == Tok::Atom) return t.text == "is";
  if (t.kind != Tok::Punct) return false;
  static constexpr std::string_view rels[] = {"=", "=:=", "=\\=", "<", ">",
                                              "=<", "<=", ">=", ":="};
  for (auto r : rels)
    if (t.text == r) return true;
  return false;
}

class Parser {
 public:
  Parser(std::string_view text, VarSupply& supply) : lex_(text), supply_(supply) {}

  bool at_end() const { return lex_.peek().kind == Tok::End; }
  std::size_t line() const { return lex_.peek().line; }

  Rule rule(std::size_t index) {
    vars_.clear();
    Rule r;
    const Token& t = lex_.peek();
    if (t.kind == Tok::Atom && is_punct(lex_.peek2(), ":")) {
      r.name = lex_.next().text;
      lex_.next();
    } else {
      r.name = "rule" + std::to_string(index);
    }
    Token head_tok = lex_.peek();
    r.head = expr();
    if (!r.head.is_compound() || r.head.is_arith())
      lex_.error_at(head_tok, "rule head must be a user-defined constraint");
    expect("<=>");
    auto items = goal_items();
    if (is_punct(lex_.peek(), "|")) {
      lex_.next();
      for (auto& [a, tok] : items) {
        if (!a.is_builtin()) lex_.error_at(tok, "guard must contain built-in constraints only");
        if (!std::holds_alternative<TrueC>(a.builtin())) r.guard.push_back(a.builtin());
      }
      items = goal_items();
    }
    for (auto& [a, _] : items) r.body.push_back(std::move(a));
    if (r.body.size() == 1 && r.body[0].is_builtin() &&
        std::holds_alternative<TrueC>(r.body[0].builtin()))
      r.body.clear();
    expect(".");
    return r;
  }

  ParsedGoal query() {
    vars_.clear();
    ParsedGoal g;
    for (auto& [a, _] : goal_items()) g.goal.push_back(std::move(a));
    if (is_punct(lex_.peek(), ".")) lex_.next();
    if (!at_end()) lex_.error_at(lex_.peek(), "unexpected '" + lex_.peek().text + "'");
    g.vars = named_;
    return g;
  }

  Term single_term() {
    vars_.clear();
    Term t = expr();
    if (!at_end()) lex_.error_at(lex_.peek(), "unexpected '" + lex_.peek().text + "'");
    return t;
  }

 private:
  void expect(std::string_view p) {
    const Token& t = lex_.peek();
    if (!is_punct(t, p))
      lex_.error_at(t, "expected '" + std::string(p) + "' but found '" +
                           (t.kind == Tok::End ? std::string("end of input") : t.text) + "'");
    lex_.next();
  }

  std::vector<std::pair<Atom, Token>> goal_items() {
    std::vector<std::pair<Atom, Token>> items;
    for (;;) {
      Token start = lex_.peek();
      items.emplace_back(goal_item(), start);
      if (!is_punct(lex_.peek(), ",")) break;
      lex_.next();
    }
    return items;
  }

  LinExpr linear(const Term& t, const Token& at) {
    try {
      return LinExpr::from_term(t);
    } catch (const Error& e) {
      throw Error(e.kind(), std::to_string(at.line) + ":" + std::to_string(at.col) + ": " +
                                e.what());
    }
  }

  Atom goal_item() {
    Token start = lex_.peek();
    Term lhs = expr();
    if (is_relation(lex_.peek())) {
      Token op = lex_.next();
      Term rhs = expr();
      if (op.text == "=") return Atom(Builtin(TermEq{lhs, rhs}));
      if (op.text == ":=" || op.text == "is") {
        if (!lhs.is_var()) lex_.error_at(start, "assignment target must be a variable");
        return Atom(Builtin(ArithAssign{lhs.as_var(), linear(rhs, op)}));
      }
      Rel rel = Rel::Eq;
      if (op.text == "=:=") rel = Rel::Eq;
      else if (op.text == "=\\=") rel = Rel::Ne;
      else if (op.text == "<") rel = Rel::Lt;
      else if (op.text == ">") rel = Rel::Gt;
      else if (op.text == "=<" || op.text == "<=") rel = Rel::Le;
      else if (op.text == ">=") rel = Rel::Ge;
      return Atom(Builtin(LinCmp{rel, linear(lhs, start), linear(rhs, op)}));
    }
    if (lhs.is_compound() && lhs.arity() == 0) {
      if (lhs.functor().name() == "true") return Atom(Builtin(TrueC{}));
      if (lhs.functor().name() == "false") return Atom(Builtin(FalseC{}));
    }
    if (!lhs.is_compound() || lhs.is_arith())
      lex_.error_at(start, "expected a constraint");
    return Atom(lhs);
  }

  // expr := mul {('+'|'-') mul}
  Term expr() {
    Term acc = mul();
    for (;;) {
      const Token& t = lex_.peek();
      if (is_punct(t, "+") || is_punct(t, "-")) {
        Symbol f = lex_.next().text == "+" ? sym_plus() : sym_minus();
        Term rhs = mul();
        acc = Term::compound(f, {acc, rhs});
      } else {
        return acc;
      }
    }
  }

  Term mul() {
    Term acc = unary();
    while (is_punct(lex_.peek(), "*")) {
      lex_.next();
      Term rhs = unary();
      acc = Term::compound(sym_times(), {acc, rhs});
    }
    return acc;
  }

  Term unary() {
    if (is_punct(lex_.peek(), "-")) {
      lex_.next();
      Term a = unary();
      if (a.is_int()) return Term::integer(-a.int_value());
      return Term::compound(sym_minus(), {a});
    }
    return primary();
  }

  Term primary() {
    Token t = lex_.next();
    switch (t.kind) {
      case Tok::Int:
        return Term::integer(Int(t.text));
      case Tok::Var:
        return variable(t.text);
      case Tok::Atom: {
        Symbol f = Symbol::intern(t.text);
        if (!is_punct(lex_.peek(), "(")) return Term::atom(f);
        lex_.next();
        std::vector<Term> args;
        if (!is_punct(lex_.peek(), ")")) {
          for (;;) {
            args.push_back(expr());
            if (!is_punct(lex_.peek(), ",")) break;
            lex_.next();
          }
        }
        expect(")");
        return Term::compound(f, std::move(args));
      }
      case Tok::Punct:
        if (t.text == "(") {
          Term e = expr();
          expect(")");
          return e;
        }
        if (t.text == "[") return list_rest();
        break;
      case Tok::End:
        lex_.error_at(t, "unexpected end of input");
    }
    lex_.error_at(t, "unexpected '" + t.text + "'");
  }

  Term list_rest() {
    if (is_punct(lex_.peek(), "]")) {
      lex_.next();
      return Term::nil();
    }
    std::vector<Term> elems;
    Term tail = Term::nil();
    for (;;) {
      elems.push_back(expr());
      if (is_punct(lex_.peek(), ",")) {
        lex_.next();
        continue;
      }
      if (is_punct(lex_.peek(), "|")) {
        lex_.next();
        tail = expr();
      }
      break;
    }
    expect("]");
    return Term::list(elems, tail);
  }

  Term variable(const std::string& name) {
    if (name == "_") return Term::variable(supply_.fresh("_"));
    auto it = vars_.find(name);
    if (it != vars_.end()) return Term::variable(it->second);
    Var v = supply_.fresh(name);
    vars_.emplace(name, v);
    named_.push_back(v);
    return Term::variable(v);
  }

  Lexer lex_;
  VarSupply& supply_;
  std::unordered_map<std::string, Var> vars_;
  std::vector<Var> named_;
};

}  // namespace

SourceProgram parse_source(std::string_view text, VarSupply* supply) {
  VarSupply local;
  Parser p(text, supply ? *supply : local);
  SourceProgram out;
  std::size_t index = 1;
  while (!p.at_end()) {
    out.rule_lines.push_back(p.line());
    out.program.rules.push_back(p.rule(index++));
  }
  out.program.infer_recursion();
  return out;
}

Program parse_program(std::string_view text, VarSupply* supply) {
  return parse_source(text, supply).program;
}

Rule parse_rule(std::string_view text, VarSupply* supply) {
  Program p = parse_program(text, supply);
  if (p.rules.size() != 1)
    throw Error(ErrorKind::Syntax, "expected exactly one rule, found " +
                                       std::to_string(p.rules.size()));
  return p.rules.front();
}

ParsedGoal parse_goal(std::string_view text, VarSupply& supply) {
  Parser p(text, supply);
  return p.query();
}

Term parse_term(std::string_view text, VarSupply& supply) {
  Parser p(text, supply);
  return p.single_term();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string canonical_name(std::size_t k) {
  std::string s(1, static_cast<char>('A' + k % 26));
  if (k >= 26) s += std::to_string(k / 26);
  return s;
}

bool valid_var_name(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

}  // namespace

std::string Printer::fresh_name(const Var& v) {
  if (naming_ == Naming::Canonical) {
    for (;;) {
      std::string n = canonical_name(canonical_next_++);
      if (used_.insert(n).second) return n;
    }
  }
  std::string base(v.print_name());
  if (base == "_") base = "_G";
  if (!valid_var_name(base)) base = "V" + base;
  if (used_.insert(base).second) return base;
  for (std::size_t k = 1;; ++k) {
    std::string n = base + "_" + std::to_string(k);
    if (used_.insert(n).second) return n;
  }
}

const std::string& Printer::var_name(const Var& v) {
  auto it = names_.find(v.id);
  if (it != names_.end()) return it->second;
  return names_.emplace(v.id, fresh_name(v)).first->second;
}

void Printer::name_vars(const std::vector<Var>& vars) {
  for (const auto& v : vars) var_name(v);
}

void Printer::name_rule(const Rule& r) {
  names_.clear();
  used_.clear();
  canonical_next_ = 0;
  name_vars(vars_of(r));
}

void Printer::term_into(const Term& t, int max_prec, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
      out += var_name(t.as_var());
      return;
    case Term::Kind::Int: {
      std::string s = t.int_value().str();
      if (s[0] == '-' && max_prec <= 500) {
        out += "(" + s + ")";
      } else {
        out += s;
      }
      return;
    }
    case Term::Kind::Nil:
      out += "[]";
      return;
    case Term::Kind::Cons: {
      out += "[";
      const Term* cur = &t;
      bool first = true;
      while (cur->is_cons()) {
        if (!first) out += ",";
        first = false;
        term_into(cur->head(), 999, out);
        cur = &cur->tail();
      }
      if (!cur->is_nil()) {
        out += "|";
        term_into(*cur, 999, out);
      }
      out += "]";
      return;
    }
    case Term::Kind::Compound:
      break;
  }
  if (t.is_arith()) {
    const Symbol f = t.functor();
    if (t.arity() == 1) {
      const bool paren = max_prec < 200;
      if (paren) out += "(";
      out += "-";
      term_into(t.arg(0), 200, out);
      if (paren) out += ")";
      return;
    }
    const int prec = f == sym_times() ? 400 : 500;
    const bool paren = prec > max_prec;
    if (paren) out += "(";
    term_into(t.arg(0), prec, out);
    out += f.name();
    term_into(t.arg(1), prec - 1, out);
    if (paren) out += ")";
    return;
  }
  out += t.functor().name();
  if (t.arity() == 0) return;
  out += "(";
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ",";
    term_into(t.arg(i), 999, out);
  }
  out += ")";
}

std::string Printer::term(const Term& t) {
  std::string out;
  term_into(t, 1200, out);
  return out;
}

std::string Printer::lin(const LinExpr& e) { return term(e.to_term()); }

std::string Printer::builtin(const Builtin& b) {
  return std::visit(
      [&](const auto& c) -> std::string {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TermEq>) {
          return term(c.lhs) + " = " + term(c.rhs);
        } else if constexpr (std::is_same_v<T, LinCmp>) {
          return lin(c.lhs) + " " + rel_symbol(c.rel) + " " + lin(c.rhs);
        } else if constexpr (std::is_same_v<T, ArithAssign>) {
          return var_name(c.target) + " := " + lin(c.expr);
        } else if constexpr (std::is_same_v<T, TrueC>) {
          return "true";
        } else {
          return "false";
        }
      },
      b);
}

std::string Printer::atom(const Atom& a) {
  return a.is_call() ? term(a.call()) : builtin(a.builtin());
}

std::string Printer::goal(const Goal& g) {
  if (g.empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out += ", ";
    out += atom(g[i]);
  }
  return out;
}

std::string Printer::guard(const std::vector<Builtin>& g) {
  std::string out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out += ", ";
    out += builtin(g[i]);
  }
  return out;
}

std::string Printer::rule(const Rule& r, bool with_name) {
  std::string out;
  if (with_name && !r.name.empty()) out += r.name + ": ";
  out += term(r.head) + " <=> ";
  if (!r.guard.empty()) out += guard(r.guard) + " | ";
  out += goal(r.body) + ".";
  return out;
}

std::string print_rule(const Rule& r, Naming naming) {
  Printer p(naming);
  p.name_rule(r);
  return p.rule(r);
}

std::string print_program(const Program& prog, Naming naming) {
  std::string out;
  for (const auto& r : prog.rules) {
    out += print_rule(r, naming);
    out += "\n";
  }
  return out;
}

std::string print_goal(const Goal& g) {
  Printer p;
  return p.goal(g);
}

std::string to_string(const Term& t) {
  Printer p;
  return p.term(t);
}

}  // namespace rru
