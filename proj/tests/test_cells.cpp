#include "support.hpp"

#include "abelext/cohomology.hpp"
#include "abelext/ext_group.hpp"
#include "abelext/relative.hpp"

#include "doctest.h"

#include <map>

using namespace abelext;

namespace {
const auto &W = support::fixture;
auto grp() -> const VarietyPresentation & { return W().variety("GRP"); }

auto params(int depth, int arity, int max_dim) -> TruncationParams {
  TruncationParams p;
  p.depth = depth;
  p.arity = arity;
  p.max_dim = max_dim;
  return p;
}

// Sum over j of (-1)^j d_j as a sparse matrix, rows as maps of columns.
auto boundary(const CloneComplex &cx, int i) -> std::pair<std::vector<std::map<int, i64>>, Vec> {
  std::vector<std::map<int, i64>> rows;
  Vec row_moduli;
  for (int j = 0; j <= i; ++j) {
    auto F = face_map(cx, i, j);
    if (rows.empty()) {
      rows.resize(F.rows.size());
      row_moduli = F.row_moduli;
    }
    for (size_t r = 0; r < F.rows.size(); ++r)
      for (auto [c, v] : F.rows[r]) rows[r][c] += (j % 2 ? -v : v);
  }
  return {rows, row_moduli};
}
} // namespace

TEST_SUITE("cells") {
  TEST_CASE("cell counts") {
    CloneComplex bot(grp(), W().abov("T2"), nullptr, params(1, 2, 1));
    CHECK(bot.cells().cell_count(0) == 2);
    // 4 mul cells, 2 inv cells and 1 e cell sit among the one-term cells of arity <= 2
    long basic = 0;
    const auto &pool = bot.pool();
    bot.cells().for_each_cell(1, [&](const CellKey &c) {
      const auto &L = pool.level(c.lv[0]);
      if (L.terms.size() == 1) {
        const auto &n = pool.bank().node(L.terms[0]);
        bool basic_term = n.op >= 0;
        for (size_t k = 0; k < n.kids.size(); ++k) basic_term = basic_term && pool.bank().node(n.kids[k]).var == static_cast<int>(k);
        if (basic_term && L.arity == static_cast<int>(n.kids.size())) ++basic;
      }
    });
    CHECK(basic == 7);
    CHECK(bot.cells().cell_count(1) > 7);
    CHECK(bot.cells().cell_count(2) > bot.cells().cell_count(1));
  }

  TEST_CASE("face matrices") {
    CloneComplex cx(grp(), W().abov("T2"), nullptr, params(1, 2, 1));
    auto F00 = face_map(cx, 0, 0);
    CHECK(F00.col_moduli.empty());
    for (const auto &r : F00.rows) CHECK(r.empty());
    // the last face of a 1-cell is the 0-cell at its value, with the identity coefficient
    auto F11 = face_map(cx, 1, 1);
    for (const auto &r : F11.rows) {
      REQUIRE(r.size() == 1);
      CHECK(r[0].second == 1);
    }
  }

  TEST_CASE("boundary of boundary vanishes as matrices") {
    for (const char *m : {"T2", "K2", "W2"}) {
      CAPTURE(m);
      CloneComplex cx(grp(), W().abov(m), nullptr, params(1, 2, 1));
      auto [d1, mod1] = boundary(cx, 1);
      auto [d2, mod2] = boundary(cx, 2);
      for (size_t r = 0; r < d2.size(); ++r) {
        std::map<int, i64> out;
        for (auto [k, v] : d2[r])
          for (auto [c, w] : d1[k]) out[c] += v * w;
        for (auto [c, v] : out) CHECK(mod(v, mod2[r]) == 0);
      }
    }
  }

  TEST_CASE("simplicial identities") {
    CloneComplex cx(grp(), W().abov("T2"), nullptr, params(1, 2, 2));
    auto c2 = check_complex(cx, 2);
    CHECK(c2.ok());
    CHECK(c2.cells == cx.cells().cell_count(2));
    CHECK(check_complex(cx, 3).ok());
  }

  TEST_CASE("truncated cohomology") {
    auto r = cohomology(grp(), W().abov("T2"), nullptr, params(2, 3, 1));
    REQUIRE(r.groups.size() == 2);
    CHECK(r.groups[0].invariant_factors() == Vec{2});
    CHECK(r.groups[1].invariant_factors() == Vec{2});
    CHECK(r.h1_exact == Vec{2});
    CHECK(r.h1_agrees == std::optional<bool>(true));
    CHECK_FALSE(r.warnings.empty());
    auto o = cohomology(grp(), W().abov("O2"), nullptr, params(1, 2, 1));
    for (const auto &g : o.groups) CHECK(g.invariant_factors().empty());
    auto q = cohomology(grp(), W().abov("T2"), &W().pov("Bot2"), params(2, 3, 1));
    CHECK(q.groups[1].invariant_factors() == Vec{2});
    CHECK(support::throws_kind([&] { cohomology(grp(), W().abov("T2ab"), nullptr, params(1, 2, 1)); },
                               ErrorKind::SignatureMismatch));
  }

  TEST_CASE("exact first cohomology") {
    CHECK(h1_exact(W().abov("T2"), grp()) == ext_group(W().abov("T2"), grp()).invariant_factors());
    CHECK(h1_exact(W().abov("T2"), grp(), &W().pov("Top2")) ==
          ext_of_overalgebra(W().pov("Top2"), W().abov("T2"), grp()).ext.invariant_factors());
  }

  TEST_CASE("cells over an overalgebra match cells over its total algebra") {
    for (int i = 0; i <= 2; ++i) {
      CAPTURE(i);
      CHECK(cell_bijection_check(grp(), W().pov("Bot2"), W().abov("T2"), i, params(1, 2, 1)).ok());
      auto r = cell_bijection_check(grp(), W().pov("Top2"), W().abov("T2"), i, params(1, 2, 1));
      CHECK(r.ok());
      CHECK(r.q_cells == r.b_cells);
    }
  }

  TEST_CASE("relative cohomology") {
    auto same = relative_cohomology(grp(), grp(), W().abov("T2"), nullptr, params(1, 2, 1));
    CHECK(same.ok());
    for (int c : same.classes_rel) CHECK(c == 0);
    CHECK(same.h1_rel.empty());
    auto r = relative_cohomology(W().variety("GRP"), W().variety("GRPAB"), W().abov("T2c"), nullptr, params(1, 2, 1));
    CHECK(r.ok());
    CHECK(r.classes_rel[0] == 0);
    CHECK(support::throws_kind(
        [&] { relative_cohomology(W().variety("GRPAB"), W().variety("GRP"), W().abov("T2c"), nullptr, params(1, 2, 1)); },
        ErrorKind::Mismatch));
  }
}
