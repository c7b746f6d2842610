#pragma once

#include "abelext/cohomology.hpp"

#include <string>
#include <vector>

namespace abelext {

// One named check of the relative construction.
struct RelativeCheck {
  std::string name;
  bool holds = false;
  std::string detail;
};

// C_{V'} -> C_V -> C_{V',V} for V' presented by a superset of V's identities, in dimensions 0..2,
// with the splitting r, s, cohomology in degrees 0 and 1 and exactness of the long sequence there.
struct RelativeReport {
  TruncationParams params;
  std::string larger, smaller; // V and V'
  std::vector<int> classes_v, classes_vp, classes_rel; // class counts per dimension 0..2
  std::vector<int> unknowns_v, unknowns_vp, unknowns_rel;
  Vec h0_vp, h0_v, h1_vp, h1_v, h1_rel;
  std::vector<std::vector<i64>> iota_h1; // images of H^1_{V'} generators in H^1_V coordinates
  std::vector<RelativeCheck> checks;
  std::vector<std::string> warnings;
  [[nodiscard]] auto ok() const -> bool;
};

// Throws Mismatch unless V' has V's signature and every identity of V, Invariant when M is not
// totally in V', and Inconclusive when one V-class meets two V'-classes.
auto relative_cohomology(const VarietyPresentation &V, const VarietyPresentation &Vp, const AbOveralgebra &M,
                         const PointedOveralgebra *Q, const TruncationParams &params) -> RelativeReport;

} // namespace abelext
