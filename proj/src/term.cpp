#include "abelext/term.hpp"

#include "abelext/error.hpp"

#include <algorithm>
#include <cctype>

namespace abelext {

auto Signature::find(std::string_view n) const -> int {
  for (int i = 0; i < size(); ++i)
    if (symbols[i].name == n) return i;
  return -1;
}

auto Signature::max_arity() const -> int {
  int m = 0;
  for (const auto &s : symbols) m = std::max(m, s.arity);
  return m;
}

auto Signature::has_nullary() const -> bool {
  return std::any_of(symbols.begin(), symbols.end(), [](const OpSymbol &s) { return s.arity == 0; });
}

auto Term::variable(int index) -> Term {
  Term t;
  t.var = index;
  return t;
}

auto Term::apply(int op, std::vector<Term> args) -> Term {
  Term t;
  t.op = op;
  t.args = std::move(args);
  return t;
}

auto operator<(const Term &a, const Term &b) -> bool {
  // variables first, then by symbol, then argumentwise
  if (a.is_var() != b.is_var()) return a.is_var();
  if (a.is_var()) return a.var < b.var;
  if (a.op != b.op) return a.op < b.op;
  return std::lexicographical_compare(a.args.begin(), a.args.end(), b.args.begin(), b.args.end());
}

auto term_span(const Term &t) -> int {
  if (t.is_var()) return t.var + 1;
  int m = 0;
  for (const auto &a : t.args) m = std::max(m, term_span(a));
  return m;
}

auto term_depth(const Term &t) -> int {
  if (t.is_var()) return 0;
  int m = 0;
  for (const auto &a : t.args) m = std::max(m, term_depth(a));
  return m + 1;
}

auto term_size(const Term &t) -> int {
  if (t.is_var()) return 0;
  int s = 1;
  for (const auto &a : t.args) s += term_size(a);
  return s;
}

auto substitute(const Term &t, const std::vector<Term> &s) -> Term {
  if (t.is_var()) return s.at(t.var);
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const auto &a : t.args) args.push_back(substitute(a, s));
  return Term::apply(t.op, std::move(args));
}

auto basic_term(const Signature &sig, int op) -> Term {
  std::vector<Term> args;
  for (int i = 0; i < sig.arity(op); ++i) args.push_back(Term::variable(i));
  return Term::apply(op, std::move(args));
}

static void print(const Term &t, const Signature &sig, std::string &out) {
  if (t.is_var()) {
    out += 'x';
    out += std::to_string(t.var);
    return;
  }
  out += sig.name(t.op);
  out += '(';
  for (size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    print(t.args[i], sig, out);
  }
  out += ')';
}

auto term_to_string(const Term &t, const Signature &sig) -> std::string {
  std::string out;
  print(t, sig, out);
  return out;
}

auto is_variable_name(std::string_view s) -> bool {
  if (s.size() < 2 || s[0] != 'x') return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

namespace {

struct TermReader {
  std::string_view text;
  const Signature &sig;
  size_t pos = 0;

  [[noreturn]] void fail(ErrorKind k, const std::string &msg) const {
    throw Error(k, msg + " in term at offset " + std::to_string(pos));
  }
  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  auto ident() -> std::string {
    skip();
    size_t b = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) ++pos;
    if (b == pos) fail(ErrorKind::Syntax, "expected a name");
    return std::string(text.substr(b, pos - b));
  }
  auto peek() -> char {
    skip();
    return pos < text.size() ? text[pos] : '\0';
  }
  void expect(char c) {
    if (peek() != c) fail(ErrorKind::Syntax, std::string("expected '") + c + "'");
    ++pos;
  }
  auto term() -> Term {
    std::string name = ident();
    if (is_variable_name(name)) return Term::variable(std::stoi(name.substr(1)));
    int op = sig.find(name);
    if (op < 0) fail(ErrorKind::UnknownSymbol, "unknown symbol '" + name + "'");
    expect('(');
    std::vector<Term> args;
    if (peek() != ')') {
      args.push_back(term());
      while (peek() == ',') {
        ++pos;
        args.push_back(term());
      }
    }
    expect(')');
    if (static_cast<int>(args.size()) != sig.arity(op))
      fail(ErrorKind::Arity, "symbol '" + name + "' takes " + std::to_string(sig.arity(op)) + " arguments");
    return Term::apply(op, std::move(args));
  }
};

} // namespace

auto parse_term(std::string_view text, const Signature &sig) -> Term {
  TermReader r{text, sig};
  Term t = r.term();
  r.skip();
  if (r.pos != text.size()) r.fail(ErrorKind::Syntax, "trailing input");
  return t;
}

auto make_identity(Term lhs, Term rhs) -> Identity {
  int n = std::max(term_span(lhs), term_span(rhs));
  return Identity{std::move(lhs), std::move(rhs), n};
}

} // namespace abelext
