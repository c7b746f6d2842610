#pragma once

#include "abelext/overalgebra.hpp"

#include <optional>
#include <string>
#include <vector>

namespace abelext {

// <chi, E, pi>: extension of A = M.base by M.
struct Extension {
  std::string name;
  FiniteAlgebra E;
  AbOveralgebra M;
  std::vector<int> pi;
  // chi[e][encoded m] = _e chi(m), an element of the pi-fiber of e
  std::vector<std::vector<int>> chi;

  [[nodiscard]] auto A() const -> const FiniteAlgebra & { return M.base; }
  friend auto operator==(const Extension &, const Extension &) -> bool = default;
};

// Per-element inverse tables of chi.
class ChiInverse {
public:
  ChiInverse() = default;
  explicit ChiInverse(const Extension &X);
  // _e chi^{-1}(e2), with e2 in the fiber of e
  [[nodiscard]] auto operator()(int e, int e2) const -> Vec;

private:
  const Extension *X_ = nullptr;
  std::vector<int> fiber_pos_;              // position of e inside its fiber
  std::vector<std::vector<int>> fibers_;    // pi-fibers
  std::vector<std::vector<i64>> inv_;       // [e][position of e2] -> encoded m
};

using Section = std::vector<int>;
using Cochain0 = std::vector<Vec>;              // [a] -> _aM
using Cochain1 = std::vector<std::vector<Vec>>; // [op][tuple] -> _{op(a)}M

// Structural invariants that do not involve the variety: shapes, pi onto, chi bijective, basepoint law.
void check_extension_structure(const Extension &X);

struct ExtensionReport {
  bool valid = true;
  std::string clause; // failed clause
  std::string witness;
};
auto validate_extension(const Extension &X, const VarietyPresentation &V) -> ExtensionReport;
// The chi^{-1} additivity law alone; returns an empty string when it holds.
auto chi_additivity_failure(const Extension &X) -> std::string;

auto canonical_section(const Extension &X) -> Section;
auto is_section(const Extension &X, const Section &s) -> bool;
auto all_sections(const Extension &X) -> std::vector<Section>;
auto delta_sections(const Extension &X, const Section &s, const Section &t) -> Cochain0;
auto factor_set(const Extension &X, const Section &s) -> Cochain1;

auto zero_cochain0(const AbOveralgebra &M) -> Cochain0;
auto zero_cochain1(const AbOveralgebra &M) -> Cochain1;
auto add_cochains(const Cochain1 &f, const Cochain1 &g, const AbOveralgebra &M) -> Cochain1;
auto sub_cochains(const Cochain1 &f, const Cochain1 &g, const AbOveralgebra &M) -> Cochain1;
auto neg_cochain(const Cochain1 &f, const AbOveralgebra &M) -> Cochain1;
auto scale_cochain(i64 c, const Cochain1 &f, const AbOveralgebra &M) -> Cochain1;
auto is_zero_cochain(const Cochain1 &f) -> bool;
auto coboundary0(const Cochain0 &delta, const AbOveralgebra &M) -> Cochain1;
// Checks that every value lies in its fiber group.
auto well_typed(const Cochain1 &f, const AbOveralgebra &M) -> bool;

// f[t; a] via the factor-set recursion.
auto factor_on_term(const Cochain1 &f, const AbOveralgebra &M, const Term &t, const std::vector<int> &a) -> Vec;
// Linear part t^M_a applied to fiber elements.
auto linear_on_term(const AbOveralgebra &M, const Term &t, const std::vector<int> &a, const std::vector<Vec> &m) -> Vec;

struct FactorSetReport {
  bool holds = true;
  bool linear_holds = true;
  int identity = -1;
  std::vector<int> witness;
};
// Authoritative test: the built algebra satisfies V; the identity-expansion test must agree.
auto is_factor_set(const Cochain1 &f, const AbOveralgebra &M, const VarietyPresentation &V) -> FactorSetReport;
auto build_from_factor_set(const Cochain1 &f, const AbOveralgebra &M, const std::string &name = "E") -> Extension;
// The section a -> <a,0> of an extension built from a factor set.
auto zero_section(const Extension &X) -> Section;

// gamma: E1 -> E2 with pi2 gamma = pi1 and gamma chi1 = chi2 gamma
auto is_equivalence(const Extension &X1, const Extension &X2, const std::vector<int> &gamma) -> bool;
auto are_equivalent(const Extension &X1, const Extension &X2) -> std::optional<std::vector<int>>;

// Layout of basic cells as coordinates of one finite abelian group.
struct CellLayout {
  std::vector<std::vector<int>> offset; // [op][tuple] -> first coordinate
  Vec moduli;
  explicit CellLayout(const AbOveralgebra &M);
  CellLayout() = default;
  [[nodiscard]] auto flatten(const Cochain1 &f) const -> Vec;
  [[nodiscard]] auto unflatten(const Vec &x, const AbOveralgebra &M) const -> Cochain1;
};

// Solves f = coboundary0(delta); nullopt when f is not a coboundary.
auto solve_coboundary(const Cochain1 &f, const AbOveralgebra &M) -> std::optional<Cochain0>;

} // namespace abelext
