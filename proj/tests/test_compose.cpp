#include "support.hpp"

#include "abelext/compose.hpp"
#include "abelext/module_bridge.hpp"

#include "doctest.h"

using namespace abelext;

namespace {
const auto &W = support::fixture;
auto grp() -> const VarietyPresentation & { return W().variety("GRP"); }
} // namespace

TEST_SUITE("compose") {
  TEST_CASE("pullbacks") {
    const auto &X = W().extension("XZ4");
    auto P = pullback(X, W().algebra("Z2"), W().hom("id2").map);
    CHECK(validate_extension(P, grp()).valid);
    CHECK(are_equivalent(P, X).has_value());
    auto U = pullback(X, W().algebra("Z1"), W().hom("u12").map);
    CHECK(validate_extension(U, grp()).valid);
    CHECK(U.E.size == 2);
    auto GU = ext_group(U.M, grp());
    CHECK(GU.classify(U) == Vec(GU.invariant_factors().size(), 0));
    // along the quotient Z4 -> Z2 then the inclusion Z2 -> Z4
    const auto &g = W().hom("q42").map;
    const auto &h = W().hom("i24").map;
    auto once = pullback(X, W().algebra("Z2"), compose_maps(g, h));
    auto twice = pullback(pullback(X, W().algebra("Z4"), g), W().algebra("Z2"), h);
    CHECK(same_structure(once.M, twice.M));
    CHECK(are_equivalent(once, twice).has_value());
    auto sec = pullback_section(X, P, W().hom("id2").map, canonical_section(X));
    CHECK(is_section(P, sec));
  }

  TEST_CASE("pushforwards") {
    const auto &X = W().extension("XZ4");
    const auto &M = X.M;
    auto G = ext_group(M, grp());
    auto id = pushforward(X, W().abhom("idT2"), M);
    CHECK(G.classify(id) == G.classify(X));
    auto zero = pushforward(X, W().abhom("zeroT2"), M);
    CHECK(G.classify(zero) == Vec{0});
    CHECK(is_zero_cochain(pushforward_cochain(factor_set(X, canonical_section(X)), W().abhom("zeroT2"), M)));
  }

  TEST_CASE("outer products and Baer sums") {
    const auto &X = W().extension("XZ4");
    auto G = ext_group(X.M, grp());
    auto split = G.representative({0});
    CHECK(baer_sum(split, X, G).by_cochains == G.classify(X));
    auto B = baer_sum(X, X, G);
    CHECK(B.by_cochains == Vec{0});
    CHECK(B.by_pipeline == Vec{0});
    CHECK(B.restriction_matches);
    auto P = outer_product_ext({X, X});
    CHECK(validate_extension(P, grp()).valid);
    CHECK(outer_factor_mismatch({X, X}, P).empty());
    auto Q = outer_product_ext({X, W().extension("XV4")});
    CHECK(outer_factor_mismatch({X, W().extension("XV4")}, Q).empty());
    auto s = product_section({X, X}, P, {canonical_section(X), canonical_section(X)});
    CHECK(is_section(P, s));
    // at ((1,1),(1,1)) the factor set is the pair of components
    auto f = factor_set(P, s);
    int mul = P.A().sig.find("mul");
    int a11 = 3; // (1,1) in lexicographic order
    int args[2] = {a11, a11};
    CHECK(f[mul][encode_tuple(args, 4, 2)] == Vec{1, 1});
  }

  TEST_CASE("extensions of overalgebras") {
    const auto &M = W().abov("T2");
    auto bot = alpha_star(M.base, Congruence::bottom(2));
    auto E0 = ext_of_overalgebra(bot, M, grp());
    CHECK(E0.ext.invariant_factors() == ext_group(M, grp()).invariant_factors());
    auto Et = ext_of_overalgebra(W().pov("Top2"), M, grp());
    CHECK(Et.total.algebra.size == 4);
    auto again = ext_of_overalgebra(W().pov("Top2"), M, grp());
    CHECK(again.ext.invariant_factors() == Et.ext.invariant_factors());
    // the identity fiber map induces the identity on A x| Q
    std::vector<std::vector<int>> r{{0, 1}, {0, 1}};
    auto t = total_map(W().pov("Top2"), W().pov("Top2"), r);
    for (int i = 0; i < static_cast<int>(t.size()); ++i) CHECK(t[i] == i);
    // inflation along pi_Q sends inequivalent classes to inequivalent classes
    auto G = ext_group(M, grp());
    auto infl = pullback(G.representative({1}), Et.total.algebra, Et.total.pi);
    CHECK(Et.ext.classify(infl) != Vec(Et.ext.invariant_factors().size(), 0));
  }

  TEST_CASE("module sequences") {
    const auto &X = W().extension("XZ4ab");
    auto S = module_forward(X);
    CHECK(S.kernel.moduli == Vec{2});
    CHECK(S.iota == std::vector<int>{0, 2});
    CHECK(is_homomorphism(S.pi, S.E, X.A()));
    auto back = module_backward(S, X.M, "back");
    CHECK(are_equivalent(back, X).has_value());
    auto G = ext_group(X.M, W().variety("AB"));
    auto split = G.representative({0});
    auto SS = module_forward(split);
    CHECK(find_isomorphism(SS.E, product(X.A(), X.A()).algebra).has_value());
    // inequivalent classes stay apart, equivalent presentations stay together
    auto S1 = module_forward(G.representative({1}));
    CHECK(find_isomorphism(S1.E, X.E).has_value());
    CHECK_FALSE(are_equivalent(module_backward(SS, X.M), module_backward(S1, X.M)).has_value());
    std::vector<int> id(S.E.size);
    for (int e = 0; e < S.E.size; ++e) id[e] = e;
    CHECK(is_module_equivalence(S, module_forward(back), id));
    Signature two{{{"add", 2}, {"mul", 2}, {"zero", 0}}};
    CHECK(support::throws_kind([&] { module_signature(two); }, ErrorKind::NotModuleShape));
  }
}
