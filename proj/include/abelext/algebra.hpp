#pragma once

#include "abelext/term.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace abelext {

// Mixed-radix helpers for argument tuples over a carrier of size `base`.
auto ipow(int base, int exponent) -> std::size_t;
void decode_tuple(std::size_t index, int base, int k, int *out);
auto encode_tuple(const int *digits, int base, int k) -> std::size_t;

struct FiniteAlgebra {
  std::string name;
  std::string variety;
  Signature sig;
  int size = 0;
  // tables[op] is row-major over size^arity argument tuples
  std::vector<std::vector<int>> tables;

  [[nodiscard]] auto apply(int op, const int *args) const -> int {
    return tables[op][encode_tuple(args, size, sig.arity(op))];
  }
  [[nodiscard]] auto apply(int op, std::initializer_list<int> args) const -> int {
    return apply(op, std::data(args));
  }
  friend auto operator==(const FiniteAlgebra &, const FiniteAlgebra &) -> bool = default;
};

// Throws Shape/Invariant errors for malformed tables.
void validate_algebra(const FiniteAlgebra &A);

auto eval_term(const Term &t, const FiniteAlgebra &A, const std::vector<int> &args) -> int;

struct IdentityReport {
  bool holds = true;
  int identity = -1;
  std::vector<int> witness;
};

auto check_identities(const FiniteAlgebra &A, const std::vector<Identity> &ids) -> IdentityReport;
auto check_identities(const FiniteAlgebra &A, const VarietyPresentation &V) -> IdentityReport;

struct Congruence {
  std::vector<int> block; // block id = least member

  static auto bottom(int n) -> Congruence;
  static auto top(int n) -> Congruence;
  static auto from_labels(const std::vector<int> &labels) -> Congruence;
  [[nodiscard]] auto size() const -> int { return static_cast<int>(block.size()); }
  [[nodiscard]] auto related(int a, int b) const -> bool { return block[a] == block[b]; }
  [[nodiscard]] auto num_blocks() const -> int;
  [[nodiscard]] auto blocks() const -> std::vector<std::vector<int>>;
  [[nodiscard]] auto leq(const Congruence &o) const -> bool;
  [[nodiscard]] auto meet(const Congruence &o) const -> Congruence;
  [[nodiscard]] auto is_bottom() const -> bool;
  friend auto operator==(const Congruence &, const Congruence &) -> bool = default;
};

struct Homomorphism {
  std::string name, dom, cod;
  std::vector<int> map;
  friend auto operator==(const Homomorphism &, const Homomorphism &) -> bool = default;
};

auto is_homomorphism(const std::vector<int> &map, const FiniteAlgebra &A, const FiniteAlgebra &B) -> bool;
auto kernel(const std::vector<int> &map, const FiniteAlgebra &A, const FiniteAlgebra &B) -> Congruence;
auto is_onto(const std::vector<int> &map, const FiniteAlgebra &B) -> bool;
auto compose_maps(const std::vector<int> &g, const std::vector<int> &f) -> std::vector<int>; // g after f

auto is_congruence(const FiniteAlgebra &A, const Congruence &theta) -> bool;
auto cg_generate(const FiniteAlgebra &A, const std::vector<std::pair<int, int>> &pairs) -> Congruence;
auto join(const FiniteAlgebra &A, const Congruence &a, const Congruence &b) -> Congruence;

// Default enumeration cap, overridable through ABELEXT_CAP.
auto default_cap(int fallback = 12) -> int;

struct CongruenceLattice {
  std::vector<Congruence> elements; // bottom first, top last
  std::vector<std::vector<int>> meet, join;
  [[nodiscard]] auto index_of(const Congruence &c) const -> int;
};

auto all_congruences(const FiniteAlgebra &A, std::optional<int> cap = std::nullopt) -> CongruenceLattice;
auto is_modular(const CongruenceLattice &L) -> bool;

struct QuotientResult {
  FiniteAlgebra algebra;
  std::vector<int> nat;
};
auto quotient(const FiniteAlgebra &A, const Congruence &theta) -> QuotientResult;

struct ProductResult {
  FiniteAlgebra algebra;
  std::vector<std::vector<int>> projections;
};
// Carrier is the lexicographic list of tuples; an empty factor list gives the one-element algebra.
auto product(const std::vector<FiniteAlgebra> &factors, const Signature &sig) -> ProductResult;
auto product(const FiniteAlgebra &A, const FiniteAlgebra &B) -> ProductResult;
auto diagonal_map(int size, int copies) -> std::vector<int>;

auto commutator(const FiniteAlgebra &A, const Congruence &theta, const Congruence &psi) -> Congruence;
auto is_abelian(const FiniteAlgebra &A, const Congruence &theta) -> bool;

struct DifferenceReport {
  bool passed = true;
  std::string algebra;
  int condition = 0; // 1: d(x,x,y)=y, 2: d(x,y,y) [t,t] x
  Congruence congruence;
  std::vector<int> witness;
};
auto verify_difference_term(const Term &d, const std::vector<FiniteAlgebra> &algebras) -> DifferenceReport;

// Exhaustive isomorphism search, used for reporting only.
auto find_isomorphism(const FiniteAlgebra &A, const FiniteAlgebra &B, int cap = 16)
    -> std::optional<std::vector<int>>;

} // namespace abelext
