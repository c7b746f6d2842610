#pragma once

#include "abelext/extension.hpp"
#include "abelext/linalg.hpp"

#include <vector>

namespace abelext {

// E_V(A, M) = factor sets / coboundaries, computed on basic cells.
struct ExtGroup {
  AbOveralgebra M;
  VarietyPresentation V;
  CellLayout layout;
  Subgroup cycles, boundaries;
  QuotientGroup quotient;
  std::vector<Cochain1> generators;
  long constraint_rows = 0;
  long distinct_rows = 0;

  [[nodiscard]] auto invariant_factors() const -> const Vec & { return quotient.factors(); }
  [[nodiscard]] auto order() const -> BigInt { return quotient.order(); }
  // Throws NotFactorSet for cochains outside the cycle group.
  [[nodiscard]] auto classify_cochain(const Cochain1 &f) const -> Vec;
  [[nodiscard]] auto classify(const Extension &X) const -> Vec;
  [[nodiscard]] auto cochain_of(const Vec &coords) const -> Cochain1;
  [[nodiscard]] auto representative(const Vec &coords, const std::string &name = "E") const -> Extension;
  [[nodiscard]] auto contains(const Cochain1 &f) const -> bool;
  // All coordinate vectors of the group, in lexicographic order.
  [[nodiscard]] auto all_classes(long cap = 1 << 16) const -> std::vector<Vec>;
};

auto ext_group(const AbOveralgebra &M, const VarietyPresentation &V) -> ExtGroup;

// E_V(Q, M) = E_V(A x| Q, Res_{pi_Q} M)
struct OveralgebraExt {
  TotalAlgebra total;
  AbOveralgebra restricted;
  ExtGroup ext;
};
auto ext_of_overalgebra(const PointedOveralgebra &Q, const AbOveralgebra &M, const VarietyPresentation &V) -> OveralgebraExt;
// The map A x| Q1 -> A x| Q2 induced by fiber maps r[a]: _aQ1 -> _aQ2.
auto total_map(const PointedOveralgebra &Q1, const PointedOveralgebra &Q2, const std::vector<std::vector<int>> &r)
    -> std::vector<int>;

} // namespace abelext
