#include "support.hpp"

#include "doctest.h"

using namespace abelext;

namespace {
const auto &W = support::fixture;
auto d_grp() -> Term { return *W().variety("GRP").difference_term; }
} // namespace

TEST_SUITE("overalgebra") {
  TEST_CASE("total algebra of the trivial module on Z2") {
    auto T = total_algebra(W().abov("T2"));
    CHECK(T.algebra.size == 4);
    CHECK(T.pi == std::vector<int>{0, 0, 1, 1});
    CHECK(find_isomorphism(T.algebra, W().algebra("V4")).has_value());
    CHECK(check_identities(T.algebra, W().variety("GRP")).holds);
    CHECK(totally_in(W().abov("T2"), W().variety("GRP")).holds);
    CHECK(is_homomorphism(T.pi, T.algebra, W().algebra("Z2")));
    CHECK(is_homomorphism(T.iota, W().algebra("Z2"), T.algebra));
  }

  TEST_CASE("twisted coefficients") {
    auto T = total_algebra(W().abov("W2"));
    CHECK(T.algebra.size == 8);
    CHECK(find_isomorphism(T.algebra, W().algebra("D8")).has_value());
  }

  TEST_CASE("alpha star") {
    const auto &Z4 = W().algebra("Z4");
    auto alpha = cg_generate(Z4, {{0, 2}});
    auto P = alpha_star(Z4, alpha);
    CHECK(P.fiber == std::vector<int>{2, 2, 2, 2});
    auto T = total_algebra(P);
    // <a, point> corresponds to the pair (a, a)
    for (int a = 0; a < 4; ++a) CHECK(T.iota[a] == T.index(a, P.point[a]));
    CHECK(find_isomorphism(T.algebra, W().algebra("Z4xZ2")).has_value());
    auto Pb = alpha_star(Z4, Congruence::bottom(4));
    CHECK(Pb.fiber == std::vector<int>{1, 1, 1, 1});
    CHECK(find_isomorphism(total_algebra(Pb).algebra, Z4).has_value());
    auto Pt = alpha_star(Z4, Congruence::top(4));
    CHECK(Pt.fiber == std::vector<int>{4, 4, 4, 4});
    CHECK(totally_in(Pt, W().variety("GRP")).holds);
  }

  TEST_CASE("abelianization") {
    const auto &Z4 = W().algebra("Z4");
    auto P = alpha_star(Z4, kernel(W().hom("q42").map, Z4, W().algebra("Z2")));
    auto R = abelianize_pointed(P, d_grp());
    for (const auto &g : R.module.groups) CHECK(g.canonical() == Vec{2});
    CHECK(totally_in(R.module, W().variety("GRP")).holds);
    auto Rb = abelianize_pointed(alpha_star(Z4, Congruence::bottom(4)), d_grp());
    for (const auto &g : Rb.module.groups) CHECK(g.order() == 1);
    CHECK(support::throws_kind([&] { abelianize_pointed(W().pov("TopS3"), d_grp()); }, ErrorKind::NotAbelianKernel));
    // the underlying pointed overalgebra of T2 abelianizes back to T2
    auto back = abelianize_pointed(underlying_pointed(W().abov("T2")), d_grp());
    CHECK(same_structure(back.module, W().abov("T2")));
  }

  TEST_CASE("free abelian overalgebras") {
    const auto &K = W().pov("Kap4");
    auto F = free_abelian_on_pointed(K, d_grp());
    auto R = abelianize_pointed(K, d_grp());
    CHECK(F.commutator.is_bottom());
    CHECK(same_structure(F.module, R.module));
    // over S3 the kernel fibers are S3 and the commutator cuts each down to S3 / A3
    auto FS = free_abelian_on_pointed(W().pov("TopS3"), d_grp());
    for (const auto &g : FS.module.groups) CHECK(g.canonical() == Vec{2});
    CHECK(totally_in(FS.module, W().variety("GRP")).holds);
    for (int a = 0; a < 6; ++a) {
      // the unit is onto each fiber and sends the basepoint to zero
      const auto &P = W().pov("TopS3");
      CHECK(FS.unit[a][P.point[a]] == FS.module.groups[a].zero());
    }
  }

  TEST_CASE("restriction") {
    const auto &T2 = W().abov("T2");
    CHECK(same_structure(restrict(W().algebra("Z2"), W().hom("id2").map, T2), T2));
    auto R = restrict(W().algebra("Z4"), W().hom("q42").map, T2);
    CHECK(R.groups.size() == 4);
    for (const auto &g : R.groups) CHECK(g.moduli == Vec{2});
    auto C = restrict(W().algebra("Z2"), W().hom("c22").map, W().abov("W2"));
    for (const auto &g : C.groups) CHECK(g == W().abov("W2").groups[0]);
    CHECK(totally_in(C, W().variety("GRP")).holds);
  }

  TEST_CASE("products of overalgebras") {
    const auto &T2 = W().abov("T2");
    auto P = outer_product({T2, T2}, T2.base.sig);
    CHECK(P.base.size == 4);
    for (const auto &g : P.groups) CHECK(g.moduli == Vec{2, 2});
    auto diag = restrict(T2.base, diagonal_map(2, 2), P);
    CHECK(same_structure(diag, product_ab({T2, T2}, T2.base)));
    auto E = outer_product({}, T2.base.sig);
    CHECK(E.base.size == 1);
    CHECK(E.groups.at(0).order() == 1);
  }

  TEST_CASE("abelian homomorphisms") {
    const auto &T2 = W().abov("T2");
    validate_abhom(W().abhom("idT2"), T2, T2);
    CHECK(apply_abhom(W().abhom("zeroT2"), 1, {1}, T2) == Vec{0});
    auto plus = addition_map(T2);
    CHECK(plus.maps.size() == 2);
  }
}
