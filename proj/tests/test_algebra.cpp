#include "support.hpp"

#include "doctest.h"

using namespace abelext;

namespace {
auto var(const std::string &name) -> const VarietyPresentation & { return support::fixture().variety(name); }
auto alg(const std::string &name) -> const FiniteAlgebra & { return support::fixture().algebra(name); }
auto d_grp() -> Term { return *var("GRP").difference_term; }
} // namespace

TEST_SUITE("algebra") {
  TEST_CASE("term evaluation") {
    const auto &Z4 = alg("Z4");
    const auto &sig = Z4.sig;
    CHECK(eval_term(Term::variable(1), Z4, {3, 2}) == 2);
    CHECK(eval_term(parse_term("mul(x0, x0)", sig), Z4, {3}) == 2);
    CHECK(eval_term(parse_term("e()", sig), alg("Z2"), {}) == 0);
  }

  TEST_CASE("identities") {
    CHECK(check_identities(alg("Z2"), var("GRP")).holds);
    CHECK(check_identities(alg("S3"), var("GRP")).holds);
    CHECK_FALSE(check_identities(alg("S3"), var("GRPAB")).holds);
    // left projection: mul(0,1) = 0, mul(1,0) = 1
    FiniteAlgebra L{"L", "", Signature{{{"mul", 2}}}, 2, {{0, 0, 1, 1}}};
    auto comm = make_identity(parse_term("mul(x0, x1)", L.sig), parse_term("mul(x1, x0)", L.sig));
    auto r = check_identities(L, std::vector<Identity>{comm});
    CHECK_FALSE(r.holds);
    CHECK(r.witness == std::vector<int>{0, 1});
  }

  TEST_CASE("empty carrier with a constant is rejected") {
    FiniteAlgebra E{"E", "", Signature{{{"c", 0}}}, 0, {{}}};
    CHECK_THROWS_AS(validate_algebra(E), Error);
  }

  TEST_CASE("homomorphisms and kernels") {
    std::vector<int> f{0, 1, 0, 1};
    CHECK(is_homomorphism(f, alg("Z4"), alg("Z2")));
    CHECK(is_onto(f, alg("Z2")));
    CHECK(kernel(f, alg("Z4"), alg("Z2")).blocks() == std::vector<std::vector<int>>{{0, 2}, {1, 3}});
    std::vector<int> id{0, 1, 2, 3, 4, 5};
    CHECK(kernel(id, alg("S3"), alg("S3")).is_bottom());
    std::vector<int> c{0, 0};
    CHECK(is_homomorphism(c, alg("Z2"), alg("Z2")));
    CHECK(kernel(c, alg("Z2"), alg("Z2")) == Congruence::top(2));
    CHECK_FALSE(is_homomorphism({1, 1}, alg("Z2"), alg("Z2")));
  }

  TEST_CASE("generated congruences") {
    CHECK(cg_generate(alg("Z4"), {{0, 2}}).blocks() == std::vector<std::vector<int>>{{0, 2}, {1, 3}});
    CHECK(cg_generate(alg("Z4"), {}).is_bottom());
    CHECK(cg_generate(alg("S3"), {{0, 3}}) == Congruence::top(6));
    CHECK(cg_generate(alg("S3"), {{0, 1}}).num_blocks() == 2);
  }

  TEST_CASE("congruence lattices") {
    auto L4 = all_congruences(alg("Z4"));
    CHECK(L4.elements.size() == 3);
    CHECK(L4.elements.front().is_bottom());
    CHECK(L4.elements.back() == Congruence::top(4));
    for (const auto &a : L4.elements)
      for (const auto &b : L4.elements) CHECK((a.leq(b) || b.leq(a)));
    CHECK(is_modular(L4));
    auto LV = all_congruences(alg("V4"));
    CHECK(LV.elements.size() == 5);
    CHECK(is_modular(LV));
    FiniteAlgebra set2{"S", "", Signature{}, 2, {}};
    CHECK(all_congruences(set2).elements.size() == 2);
    CHECK(support::throws_kind([&] { all_congruences(alg("D8"), 2); }, ErrorKind::CapExceeded));
  }

  TEST_CASE("quotients and products") {
    auto q = quotient(alg("Z4"), cg_generate(alg("Z4"), {{0, 2}}));
    CHECK(q.algebra.size == 2);
    CHECK(find_isomorphism(q.algebra, alg("Z2")).has_value());
    CHECK(is_homomorphism(q.nat, alg("Z4"), q.algebra));
    auto q0 = quotient(alg("S3"), Congruence::bottom(6));
    CHECK(find_isomorphism(q0.algebra, alg("S3")).has_value());
    auto p = product(alg("Z2"), alg("Z2"));
    CHECK(find_isomorphism(p.algebra, alg("V4")).has_value());
    CHECK_FALSE(find_isomorphism(p.algebra, alg("Z4")).has_value());
    for (const auto &pr : p.projections) CHECK(is_homomorphism(pr, p.algebra, alg("Z2")));
    auto empty = product(std::vector<FiniteAlgebra>{}, alg("Z2").sig);
    CHECK(empty.algebra.size == 1);
  }

  TEST_CASE("commutators") {
    for (const char *n : {"Z2", "Z4", "V4"}) {
      int s = alg(n).size;
      CHECK(commutator(alg(n), Congruence::top(s), Congruence::top(s)).is_bottom());
      CHECK(is_abelian(alg(n), Congruence::top(s)));
    }
    auto c = commutator(alg("S3"), Congruence::top(6), Congruence::top(6));
    CHECK(c.blocks() == std::vector<std::vector<int>>{{0, 1, 2}, {3, 4, 5}});
    CHECK_FALSE(is_abelian(alg("S3"), Congruence::top(6)));
    CHECK(commutator(alg("S3"), Congruence::bottom(6), Congruence::top(6)).is_bottom());
    CHECK(is_abelian(alg("S3"), Congruence::bottom(6)));
    // D8: [top, top] is the center
    auto z = commutator(alg("D8"), Congruence::top(8), Congruence::top(8));
    CHECK(z.num_blocks() == 4);
  }

  TEST_CASE("difference terms") {
    CHECK(verify_difference_term(d_grp(), {alg("Z2"), alg("Z4"), alg("S3"), alg("V4")}).passed);
    auto x2 = Term::variable(2);
    // d(x,x,y) = y holds for the projection; d(x,y,y) = y is never [top,top]-related to x there
    auto r2 = verify_difference_term(x2, {alg("Z2")});
    CHECK_FALSE(r2.passed);
    CHECK(r2.condition == 2);
    auto r = verify_difference_term(x2, {alg("Z4")});
    CHECK_FALSE(r.passed);
    CHECK(r.condition == 2);
    CHECK(r.algebra == "Z4");
    CHECK(verify_difference_term(d_grp(), {}).passed);
  }
}
