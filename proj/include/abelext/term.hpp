#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace abelext {

struct OpSymbol {
  std::string name;
  int arity = 0;
  friend auto operator==(const OpSymbol &, const OpSymbol &) -> bool = default;
};

struct Signature {
  std::vector<OpSymbol> symbols;

  [[nodiscard]] auto size() const -> int { return static_cast<int>(symbols.size()); }
  [[nodiscard]] auto arity(int op) const -> int { return symbols[op].arity; }
  [[nodiscard]] auto name(int op) const -> const std::string & { return symbols[op].name; }
  // -1 when absent
  [[nodiscard]] auto find(std::string_view name) const -> int;
  [[nodiscard]] auto max_arity() const -> int;
  [[nodiscard]] auto has_nullary() const -> bool;
  friend auto operator==(const Signature &, const Signature &) -> bool = default;
};

struct Term {
  int var = -1; // >= 0 marks a variable
  int op = -1;
  std::vector<Term> args;

  static auto variable(int index) -> Term;
  static auto apply(int op, std::vector<Term> args = {}) -> Term;
  [[nodiscard]] auto is_var() const -> bool { return var >= 0; }

  friend auto operator==(const Term &, const Term &) -> bool = default;
  friend auto operator<(const Term &a, const Term &b) -> bool;
};

// One more than the largest variable index, 0 for ground terms.
auto term_span(const Term &t) -> int;
auto term_depth(const Term &t) -> int;
auto term_size(const Term &t) -> int;
// Replaces x_i by s[i].
auto substitute(const Term &t, const std::vector<Term> &s) -> Term;
// The basic term op(x0,...,x_{k-1}).
auto basic_term(const Signature &sig, int op) -> Term;

auto term_to_string(const Term &t, const Signature &sig) -> std::string;
auto parse_term(std::string_view text, const Signature &sig) -> Term;
auto is_variable_name(std::string_view s) -> bool;

struct Identity {
  Term lhs, rhs;
  int nvars = 0;
  friend auto operator==(const Identity &, const Identity &) -> bool = default;
};

auto make_identity(Term lhs, Term rhs) -> Identity;

struct VarietyPresentation {
  std::string name;
  Signature signature;
  std::vector<Identity> identities;
  std::optional<Term> difference_term;
  friend auto operator==(const VarietyPresentation &, const VarietyPresentation &) -> bool = default;
};

} // namespace abelext
