#pragma once

#include "abelext/algebra.hpp"
#include "abelext/group.hpp"

#include <string>
#include <vector>

namespace abelext {

struct AbOveralgebra {
  std::string name, variety;
  FiniteAlgebra base;
  std::vector<FinAbGroup> groups; // _aM
  // opmaps[op][tuple index]: sum of source fibers -> target fiber (nullary: 0 x 0 source, value 0)
  std::vector<std::vector<Matrix>> opmaps;

  [[nodiscard]] auto source_group(int op, const int *args) const -> FinAbGroup;
  [[nodiscard]] auto opmap(int op, const int *args) const -> const Matrix & {
    return opmaps[op][encode_tuple(args, base.size, base.sig.arity(op))];
  }
  // v^M_a applied to the concatenation of the argument elements
  [[nodiscard]] auto apply_op(int op, const int *args, const std::vector<Vec> &elems) const -> Vec;
  friend auto operator==(const AbOveralgebra &, const AbOveralgebra &) -> bool = default;
};

void validate_abov(const AbOveralgebra &M);
// Compares base tables, fibers and opmaps, ignoring names.
auto same_structure(const AbOveralgebra &M, const AbOveralgebra &N) -> bool;

struct PointedOveralgebra {
  std::string name, variety;
  FiniteAlgebra base;
  std::vector<int> fiber; // fiber sizes
  std::vector<int> point; // basepoint per fiber
  // tables[op][base tuple][mixed-radix tuple of fiber elements] -> element of the target fiber
  std::vector<std::vector<std::vector<int>>> tables;

  [[nodiscard]] auto apply(int op, const int *args, const int *elems) const -> int;
  friend auto operator==(const PointedOveralgebra &, const PointedOveralgebra &) -> bool = default;
};

void validate_pov(const PointedOveralgebra &P);

struct TotalAlgebra {
  FiniteAlgebra algebra;
  std::vector<int> offset; // first index of each fiber
  std::vector<int> base_of, local_of;
  std::vector<int> pi;
  std::vector<int> iota; // basepoint section (pointed case and abelian case)
  [[nodiscard]] auto index(int a, int local) const -> int { return offset[a] + local; }
};

auto total_algebra(const AbOveralgebra &M) -> TotalAlgebra;
auto total_algebra(const PointedOveralgebra &P) -> TotalAlgebra;
auto underlying_pointed(const AbOveralgebra &M) -> PointedOveralgebra;
auto alpha_star(const FiniteAlgebra &A, const Congruence &alpha) -> PointedOveralgebra;
// Pointed overalgebra over A of a surjection pi: B -> A with a homomorphic section iota.
auto pointed_of_surjection(const FiniteAlgebra &B, const std::vector<int> &pi, const std::vector<int> &iota,
                           const FiniteAlgebra &A) -> PointedOveralgebra;

struct TotallyInReport {
  bool holds = true;
  IdentityReport identities;
};
auto totally_in(const AbOveralgebra &M, const VarietyPresentation &V) -> TotallyInReport;
auto totally_in(const PointedOveralgebra &P, const VarietyPresentation &V) -> TotallyInReport;

struct AbelianizeResult {
  AbOveralgebra module;
  std::vector<std::vector<Vec>> coords;   // [a][fiber element] -> group element
  std::vector<std::vector<int>> elements; // [a][encoded group element] -> fiber element
};
auto abelianize_pointed(const PointedOveralgebra &P, const Term &d) -> AbelianizeResult;

struct FreeAbelianResult {
  AbOveralgebra module;
  std::vector<std::vector<Vec>> unit; // [a][element of _aP] -> its image in _aM
  Congruence commutator;              // [kappa,kappa] on the total algebra of P
};
auto free_abelian_on_pointed(const PointedOveralgebra &P, const Term &d) -> FreeAbelianResult;

auto restrict(const FiniteAlgebra &X, const std::vector<int> &f, const AbOveralgebra &M) -> AbOveralgebra;
auto product_ab(const std::vector<AbOveralgebra> &Ms, const FiniteAlgebra &base) -> AbOveralgebra;
auto outer_product(const std::vector<AbOveralgebra> &Ms, const Signature &sig) -> AbOveralgebra;

// Homomorphism of abelian group overalgebras over the same base: one matrix per base element.
struct AbHom {
  std::string name, dom, cod;
  std::vector<Matrix> maps;
  friend auto operator==(const AbHom &, const AbHom &) -> bool = default;
};

void validate_abhom(const AbHom &g, const AbOveralgebra &M, const AbOveralgebra &N);
auto apply_abhom(const AbHom &g, int a, const Vec &m, const AbOveralgebra &N) -> Vec;
// +^M : M x M -> M
auto addition_map(const AbOveralgebra &M) -> AbHom;

} // namespace abelext
