#include "support.hpp"

#include "doctest.h"

using namespace abelext;

TEST_SUITE("dsl") {
  TEST_CASE("a document with one variety and one algebra") {
    auto w = parse_spec("variety GRP {\n ops { mul/2, inv/1, e/0 }\n identities { mul(e(), x0) = x0; }\n}\n"
                        "algebra Z2 : GRP {\n size 2\n mul [[0, 1], [1, 0]]\n inv [0, 1]\n e 0\n}\n");
    CHECK(w.varieties.size() == 1);
    CHECK(w.algebras.size() == 1);
    CHECK(w.algebra("Z2").size == 2);
    CHECK(w.kind_of("Z2") == std::optional<std::string>("algebra"));
    CHECK_FALSE(w.kind_of("nothing").has_value());
  }

  TEST_CASE("term grammar") {
    const auto &sig = support::fixture().variety("GRP").signature;
    int mul = sig.find("mul"), inv = sig.find("inv");
    auto t = parse_term("mul(x0, mul(inv(x1), x2))", sig);
    auto expected = Term::apply(mul, {Term::variable(0), Term::apply(mul, {Term::apply(inv, {Term::variable(1)}), Term::variable(2)})});
    CHECK(t == expected);
    CHECK(term_to_string(t, sig) == "mul(x0, mul(inv(x1), x2))");
    CHECK(term_span(t) == 3);
    CHECK(term_depth(t) == 3);
    CHECK(support::throws_kind([&] { parse_term("mul(x0)", sig); }, ErrorKind::Arity));
    CHECK(support::throws_kind([&] { parse_term("pow(x0, x1)", sig); }, ErrorKind::UnknownSymbol));
  }

  TEST_CASE("ragged table is a shape error") {
    std::string doc = "variety G {\n ops { mul/2 }\n identities { }\n}\nalgebra A : G {\n size 2\n mul [[0, 1], [1]]\n}\n";
    CHECK(support::throws_kind([&] { parse_spec(doc); }, ErrorKind::Shape));
  }

  TEST_CASE("syntax errors carry a position") {
    try {
      parse_spec("variety G {\n ops { mul/2 \n}\n");
      FAIL("expected a syntax error");
    } catch (const Error &e) {
      CHECK(e.line() > 0);
      CHECK(e.column() > 0);
    }
  }

  TEST_CASE("duplicate names are rejected") {
    std::string doc = "variety G {\n ops { u/1 }\n identities { }\n}\nvariety G {\n ops { u/1 }\n identities { }\n}\n";
    CHECK(support::throws_kind([&] { parse_spec(doc); }, ErrorKind::Duplicate));
  }

  TEST_CASE("fixture round trip") {
    const auto &w = support::fixture();
    auto text = render_spec(w);
    auto back = parse_spec(text);
    CHECK(back == w);
    CHECK(render_spec(back) == text);
    for (const auto &[name, x] : w.extensions) CHECK(back.extension(name).chi == x.chi);
  }

  TEST_CASE("unnamed entities cannot be rendered") {
    Workspace w;
    auto a = support::fixture().algebra("Z2");
    a.name.clear();
    w.varieties.emplace("GRP", support::fixture().variety("GRP"));
    w.algebras.emplace("", a);
    CHECK_THROWS_AS(render_spec(w), Error);
  }

  TEST_CASE("lookups") {
    const auto &w = support::fixture();
    CHECK(support::throws_kind([&] { (void)w.algebra("T2"); }, ErrorKind::UnknownSymbol));
    CHECK(w.hom("q42").map == std::vector<int>{0, 1, 0, 1});
    CHECK(w.abhom("idT2").maps.size() == 2);
  }
}
