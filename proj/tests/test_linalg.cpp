#include "abelext/error.hpp"
#include "abelext/group.hpp"
#include "abelext/linalg.hpp"

#include "doctest.h"

using namespace abelext;

TEST_SUITE("linalg") {
  TEST_CASE("modular arithmetic") {
    CHECK(mod(-3, 4) == 1);
    CHECK(mulmod(i64{1} << 40, i64{1} << 40, 1000000007) == 496641140);
    auto e = egcd(12, 18);
    CHECK(e.g == 6);
    CHECK(e.s * 12 + e.t * 18 == 6);
    CHECK(lcm_of({4, 6, 10}) == 60);
  }

  TEST_CASE("subgroups") {
    Subgroup S({4, 2});
    CHECK(S.insert({2, 0}));
    CHECK_FALSE(S.insert({0, 0}));
    CHECK(S.contains({2, 0}));
    CHECK_FALSE(S.contains({1, 0}));
    CHECK(S.order() == 2);
    CHECK(S.insert({1, 1}));
    CHECK(S.order() == 4);
    CHECK(S.contains({2, 0}));
    CHECK(S.contains({3, 1}));
    CHECK_FALSE(S.contains({0, 1}));
    auto c = S.express({3, 1});
    REQUIRE(c.has_value());
    Subgroup T({4, 2});
    T.insert({1, 0});
    T.insert({0, 1});
    CHECK(S.subset_of(T));
    CHECK_FALSE(T.subset_of(S));
  }

  TEST_CASE("kernels agree") {
    // x + 2y = 0 in Z/4 and 3y + z = 0 in Z/4, over Z/4 + Z/4 + Z/2
    Vec moduli{4, 4, 2};
    KernelSolver K(moduli);
    EliminationKernel E(moduli);
    SparseRow a{{0, 1}, {1, 2}}, b{{1, 3}, {2, 2}};
    K.add(a, 4);
    K.add(b, 4);
    E.add(a, 4);
    E.add(b, 4);
    auto k1 = K.kernel(), k2 = E.kernel(100);
    CHECK(k1.subset_of(k2));
    CHECK(k2.subset_of(k1));
    long brute = 0;
    for (i64 x = 0; x < 4; ++x)
      for (i64 y = 0; y < 4; ++y)
        for (i64 z = 0; z < 2; ++z)
          if (mod(x + 2 * y, 4) == 0 && mod(3 * y + 2 * z, 4) == 0) {
            ++brute;
            CHECK(k1.contains({x, y, z}));
          }
    CHECK(k1.order() == brute);
    CHECK_THROWS_AS((void)EliminationKernel(Vec{2, 2, 2}).kernel(1), Error);
  }

  TEST_CASE("quotients and Smith form") {
    Subgroup K({4, 4});
    K.insert({1, 0});
    K.insert({0, 1});
    Subgroup L({4, 4});
    L.insert({2, 2});
    QuotientGroup Q(K, L);
    CHECK(Q.factors() == Vec{2, 4});
    CHECK(Q.order() == 8);
    CHECK(Q.classify({2, 2}) == Vec{0, 0});
    CHECK(canonical_factors({2, 3}) == Vec{6});
    CHECK(canonical_factors({2, 4, 1}) == Vec{2, 4});
    auto s = smith_mod({{2, 4}, {6, 8}}, 2, 12);
    CHECK(s.diag.size() == 2);
  }

  TEST_CASE("affine solve") {
    // 2x = 2 (mod 4) has x = 1
    auto sol = solve_affine({4}, {{{0, 2}}}, {4}, {2});
    REQUIRE(sol.has_value());
    CHECK(mod(2 * (*sol)[0], 4) == 2);
    CHECK_FALSE(solve_affine({4}, {{{0, 2}}}, {4}, {1}).has_value());
  }

  TEST_CASE("finite abelian groups") {
    FinAbGroup G{{2, 4}};
    CHECK(G.order() == 8);
    CHECK(G.decode(G.encode({1, 3})) == Vec{1, 3});
    CHECK(G.encode({1, 0}) == 4);
    CHECK(G.add({1, 3}, {1, 2}) == Vec{0, 1});
    CHECK(G.neg({1, 1}) == Vec{1, 3});
    Matrix M{{1, 1}};
    CHECK(apply_matrix(M, {1, 1}, FinAbGroup{{2}}) == Vec{0});
    CHECK(is_hom_matrix({{2}}, FinAbGroup{{2}}, FinAbGroup{{4}}));
    CHECK_FALSE(is_hom_matrix({{1}}, FinAbGroup{{2}}, FinAbGroup{{4}}));
  }
}
