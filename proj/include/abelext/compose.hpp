#pragma once

#include "abelext/ext_group.hpp"
#include "abelext/extension.hpp"

#include <string>
#include <vector>

namespace abelext {

// Fibered product E x_A A2 along g: A2 -> A, with coefficients Res_g M.
auto pullback(const Extension &X, const FiniteAlgebra &A2, const std::vector<int> &g, const std::string &name = "Eg") -> Extension;
// sigma'(c) = <sigma(g(c)), c> on the pullback
auto pullback_section(const Extension &X, const Extension &P, const std::vector<int> &g, const Section &s) -> Section;

auto pushforward_cochain(const Cochain1 &f, const AbHom &h, const AbOveralgebra &N) -> Cochain1;
// Extension built from h applied to the canonical factor set of X.
auto pushforward(const Extension &X, const AbHom &h, const AbOveralgebra &N, const std::string &name = "gE") -> Extension;

auto outer_product_ext(const std::vector<Extension> &Xs, const std::string &name = "EE") -> Extension;
// sigma(a) = <sigma_i(a_i)>
auto product_section(const std::vector<Extension> &Xs, const Extension &P, const std::vector<Section> &sections) -> Section;
// Checks the componentwise factor-set display of an outer product cell by cell; empty when it holds.
auto outer_factor_mismatch(const std::vector<Extension> &Xs, const Extension &P) -> std::string;

struct BaerSum {
  Vec by_cochains;
  Vec by_pipeline;
  bool restriction_matches = false; // Res_diag(M (x) M) = M x M
  Extension pipeline;
};
auto baer_sum(const Extension &X1, const Extension &X2, const ExtGroup &G) -> BaerSum;

} // namespace abelext
