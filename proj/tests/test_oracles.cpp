#include "support.hpp"

#include "abelext/ext_group.hpp"
#include "abelext/oracles.hpp"

#include "doctest.h"

using namespace abelext;

namespace {
const auto &W = support::fixture;
auto as_vec(const std::vector<long> &v) -> Vec { return Vec(v.begin(), v.end()); }
} // namespace

TEST_SUITE("oracles") {
  TEST_CASE("enumerated extension groups") {
    auto r = oracle::ext_by_enumeration(W().abov("T2"), W().variety("GRP"));
    CHECK(r.order == 2);
    CHECK(r.representatives.size() == 2);
    CHECK_FALSE(r.method.empty());
    CHECK(oracle::ext_by_enumeration(W().abov("O2"), W().variety("GRP")).order == 1);
    CHECK(oracle::ext_by_enumeration(W().abov("T2ab"), W().variety("AB")).order == 2);
    CHECK_THROWS_AS(oracle::ext_by_enumeration(W().abov("TV"), W().variety("GRP"), 1000), Error);
  }

  TEST_CASE("oracle agrees with the engine") {
    for (const char *m : {"T2", "T2ab", "T2c", "T1", "K2", "W2", "O2"}) {
      CAPTURE(m);
      const auto &M = W().abov(m);
      const auto &V = W().variety(M.variety);
      CHECK(as_vec(oracle::ext_by_enumeration(M, V).invariant_factors) == ext_group(M, V).invariant_factors());
    }
  }

  TEST_CASE("module extensions") {
    CHECK(as_vec(oracle::module_ext(2, 2).invariant_factors) == Vec{2});
    CHECK(oracle::module_ext(2, 3).order == 1);
    for (int m = 1; m <= 4; ++m) CHECK(oracle::module_ext(1, m).order == 1);
    CHECK(as_vec(oracle::module_ext(4, 2).invariant_factors) == Vec{2});
    CHECK(as_vec(oracle::module_ext(4, 4).invariant_factors) == Vec{4});
  }

  TEST_CASE("group cohomology with trivial coefficients") {
    const auto &Z2 = W().algebra("Z2");
    int mul = Z2.sig.find("mul");
    CHECK(as_vec(oracle::group_h2(Z2, mul, {2}).invariant_factors) == Vec{2});
    CHECK(oracle::group_h2(Z2, mul, {}).order == 1);
    CHECK(as_vec(oracle::group_h2(W().algebra("V4"), mul, {2}).invariant_factors) == Vec{2, 2, 2});
    CHECK(as_vec(oracle::group_h2(W().algebra("Z4"), mul, {2}).invariant_factors) == Vec{2});
    CHECK(as_vec(oracle::group_h2(W().algebra("V4"), mul, {2}).invariant_factors) ==
          ext_group(W().abov("TV"), W().variety("GRP")).invariant_factors());
    CHECK(as_vec(oracle::group_h2(W().algebra("Z4"), mul, {2}).invariant_factors) ==
          ext_group(W().abov("T4"), W().variety("GRP")).invariant_factors());
  }

  TEST_CASE("orders to factors") {
    CHECK(oracle::factors_from_orders({1, 2, 2, 2}) == std::vector<long>{2, 2});
    CHECK(oracle::factors_from_orders({1, 2, 4, 4}) == std::vector<long>{4});
    CHECK(oracle::factors_from_orders({1}).empty());
  }
}
