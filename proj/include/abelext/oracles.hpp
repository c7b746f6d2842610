#pragma once

#include "abelext/algebra.hpp"
#include "abelext/overalgebra.hpp"
#include "abelext/term.hpp"

#include <string>
#include <vector>

namespace abelext::oracle {

// Brute-force references for tests. They use the workspace types only and
// reimplement every computation they need.
struct OracleReport {
  std::string method;
  std::vector<long> invariant_factors; // ascending divisor chain, empty for the trivial group
  long order = 1;
  long enumerated = 0; // candidates examined
  double seconds = 0;
  // one representative per class: basic-cell values, flattened as residues
  std::vector<std::vector<long>> representatives;
};

// Enumerates every basic-cell assignment, keeps those whose total algebra satisfies V,
// and divides by the enumerated coboundaries.
auto ext_by_enumeration(const AbOveralgebra &M, const VarietyPresentation &V, long cap = 1L << 20) -> OracleReport;

// Abelian groups E on pairs (a,k), a in Z/n, k in Z/m, with 0 -> Z/m -> E -> Z/n -> 0, up to equivalence,
// with the group law given by explicitly built Baer sums.
auto module_ext(int n, int m) -> OracleReport;

// Normalized 2-cocycles of the group (op `mul` of G) with values in the trivial module with the given moduli.
auto group_h2(const FiniteAlgebra &G, int mul, const std::vector<long> &moduli) -> OracleReport;

// Invariant factors of a finite abelian group from the multiset of its element orders.
auto factors_from_orders(const std::vector<long> &orders) -> std::vector<long>;

} // namespace abelext::oracle
