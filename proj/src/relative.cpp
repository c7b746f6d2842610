#include "abelext/relative.hpp"

#include "abelext/error.hpp"
#include "abelext/overalgebra.hpp"

#include <algorithm>

namespace abelext {

namespace {

using Sparse = std::vector<std::pair<int, i64>>;

auto reduce(Sparse v, const Vec &moduli) -> Sparse {
  std::sort(v.begin(), v.end());
  Sparse out;
  for (auto [c, x] : v) {
    if (!out.empty() && out.back().first == c)
      out.back().second = mod(out.back().second + x, moduli[c]);
    else
      out.emplace_back(c, mod(x, moduli[c]));
  }
  std::erase_if(out, [](const auto &cx) { return cx.second == 0; });
  return out;
}

auto dense(const Sparse &v, int n) -> Vec {
  Vec out(n, 0);
  for (auto [c, x] : v) out[c] = x;
  return out;
}

auto sparse(const Vec &v) -> Sparse {
  Sparse out;
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i]) out.emplace_back(static_cast<int>(i), v[i]);
  return out;
}

auto unit(int u) -> Sparse { return {{u, 1}}; }

auto same_subgroup(const Subgroup &a, const Subgroup &b) -> bool { return a.subset_of(b) && b.subset_of(a); }

auto factors_text(const Vec &f) -> std::string {
  std::string s = "[";
  for (size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + std::to_string(f[i]);
  return s + "]";
}

// The split short exact sequence C_{V'} -> C_V -> C_rel in one dimension.
struct Split {
  const CochainLayout *LV = nullptr, *LW = nullptr;
  std::vector<int> p;                    // V-class -> V'-class
  std::vector<int> rep;                  // V'-class -> V-class of its first cell
  std::vector<std::vector<int>> members; // V'-class -> V-classes
  std::vector<int> rel_offset;           // V-class -> first relative unknown, -1 for representatives
  Vec rel_moduli;
  std::vector<int> v_class, v_coord, rel_class, w_class; // unknown -> class (and coordinate)

  [[nodiscard]] auto rel_unknowns() const -> int { return static_cast<int>(rel_moduli.size()); }

  [[nodiscard]] auto iota(const Sparse &h) const -> Sparse {
    Sparse out;
    for (auto [u, x] : h) {
      int w = w_class[u], t = u - LW->offset[w];
      for (int C : members[w]) out.emplace_back(LV->offset[C] + t, x);
    }
    return reduce(out, LV->moduli);
  }
  [[nodiscard]] auto r(const Sparse &g) const -> Sparse {
    Sparse out;
    for (auto [u, x] : g) {
      int C = v_class[u];
      if (rep[p[C]] == C) out.emplace_back(LW->offset[p[C]] + v_coord[u], x);
    }
    return reduce(out, LW->moduli);
  }
  [[nodiscard]] auto s(const Sparse &z) const -> Sparse {
    Sparse out;
    for (auto [u, x] : z) {
      int C = rel_class[u];
      out.emplace_back(LV->offset[C] + (u - rel_offset[C]), x);
    }
    return reduce(out, LV->moduli);
  }
  [[nodiscard]] auto q(const Sparse &g) const -> Sparse {
    Sparse out;
    for (auto [u, x] : g) {
      int C = v_class[u], t = v_coord[u];
      if (rel_offset[C] >= 0) out.emplace_back(rel_offset[C] + t, x);
      if (rep[p[C]] == C)
        for (int D : members[p[C]])
          if (D != C) out.emplace_back(rel_offset[D] + t, -x);
    }
    return reduce(out, rel_moduli);
  }
};

auto make_split(const CloneComplex &cv, const CloneComplex &cw, const CochainLayout &LV, const CochainLayout &LW) -> Split {
  Split S;
  S.LV = &LV;
  S.LW = &LW;
  S.p.assign(LV.class_count(), -1);
  cv.cells().for_each_cell(LV.dim, [&](const CellKey &c) {
    int a = LV.class_of(c, cv.classes()), b = LW.class_of(c, cw.classes());
    if (a < 0 || b < 0) throw Error(ErrorKind::Internal, "cell missing from a layout");
    if (S.p[a] < 0)
      S.p[a] = b;
    else if (S.p[a] != b)
      throw Error(ErrorKind::Inconclusive, "a cell class of the larger variety meets two classes of the smaller one");
  });
  S.members.assign(LW.class_count(), {});
  for (int C = 0; C < LV.class_count(); ++C) {
    if (LV.values[C] != LW.values[S.p[C]]) throw Error(ErrorKind::Internal, "class map changes the base element");
    S.members[S.p[C]].push_back(C);
  }
  for (int w = 0; w < LW.class_count(); ++w) {
    S.rep.push_back(LV.class_of(LW.reps[w], cv.classes()));
    int end = w + 1 < LW.class_count() ? LW.offset[w + 1] : LW.unknowns();
    for (int u = LW.offset[w]; u < end; ++u) S.w_class.push_back(w);
  }
  S.rel_offset.assign(LV.class_count(), -1);
  for (int C = 0; C < LV.class_count(); ++C) {
    int rank = (C + 1 < LV.class_count() ? LV.offset[C + 1] : LV.unknowns()) - LV.offset[C];
    for (int t = 0; t < rank; ++t) {
      S.v_class.push_back(C);
      S.v_coord.push_back(t);
    }
    if (S.rep[S.p[C]] == C) continue;
    S.rel_offset[C] = S.rel_unknowns();
    for (int t = 0; t < rank; ++t) {
      S.rel_moduli.push_back(LV.moduli[LV.offset[C] + t]);
      S.rel_class.push_back(C);
    }
  }
  return S;
}

// Verifies r i = 1, q i = 0, q s = 1 and i r + s q = 1 on unit vectors.
auto check_split(const Split &S, int dim) -> RelativeCheck {
  long bad = 0;
  for (int u = 0; u < S.LW->unknowns(); ++u) {
    auto e = reduce(unit(u), S.LW->moduli);
    if (S.r(S.iota(e)) != e) ++bad;
    if (!S.q(S.iota(e)).empty()) ++bad;
  }
  for (int u = 0; u < S.rel_unknowns(); ++u) {
    auto e = reduce(unit(u), S.rel_moduli);
    if (S.q(S.s(e)) != e) ++bad;
  }
  for (int u = 0; u < S.LV->unknowns(); ++u) {
    auto e = reduce(unit(u), S.LV->moduli);
    auto sum = S.iota(S.r(e));
    auto b = S.s(S.q(e));
    sum.insert(sum.end(), b.begin(), b.end());
    if (reduce(sum, S.LV->moduli) != e) ++bad;
  }
  RelativeCheck c;
  c.name = "split sequence in dimension " + std::to_string(dim);
  c.holds = bad == 0;
  c.detail = std::to_string(S.LW->unknowns()) + " + " + std::to_string(S.rel_unknowns()) + " = " + std::to_string(S.LV->unknowns()) +
             " unknowns, " + std::to_string(bad) + " failures";
  if (S.LW->unknowns() + S.rel_unknowns() != S.LV->unknowns()) c.holds = false;
  return c;
}

void require_inclusion(const VarietyPresentation &V, const VarietyPresentation &Vp) {
  if (!(V.signature == Vp.signature)) throw Error(ErrorKind::Mismatch, "the two varieties have different signatures");
  for (const auto &id : V.identities)
    if (std::find(Vp.identities.begin(), Vp.identities.end(), id) == Vp.identities.end())
      throw Error(ErrorKind::Mismatch, "variety '" + Vp.name + "' does not contain every identity of '" + V.name + "'");
}

} // namespace

auto RelativeReport::ok() const -> bool {
  return std::all_of(checks.begin(), checks.end(), [](const RelativeCheck &c) { return c.holds; });
}

auto relative_cohomology(const VarietyPresentation &V, const VarietyPresentation &Vp, const AbOveralgebra &M,
                         const PointedOveralgebra *Q, const TruncationParams &params) -> RelativeReport {
  require_inclusion(V, Vp);
  if (!totally_in(M, Vp).holds) throw Error(ErrorKind::Invariant, "the coefficients are not totally in '" + Vp.name + "'");
  if (Q && !totally_in(*Q, Vp).holds) throw Error(ErrorKind::Invariant, "the pointed overalgebra is not totally in '" + Vp.name + "'");
  RelativeReport rep;
  rep.params = params;
  rep.larger = V.name;
  rep.smaller = Vp.name;
  CloneComplex cv(V, M, Q, params), cw(Vp, M, Q, params);
  if (cv.pool().level_count() != cw.pool().level_count()) throw Error(ErrorKind::Internal, "term pools differ");

  std::vector<CochainLayout> LV, LW;
  std::vector<Split> S;
  for (int i = 0; i <= 2; ++i) {
    LV.push_back(build_layout(cv, i));
    LW.push_back(build_layout(cw, i));
  }
  for (int i = 0; i <= 2; ++i) {
    S.push_back(make_split(cv, cw, LV[i], LW[i]));
    rep.classes_v.push_back(LV[i].class_count());
    rep.classes_vp.push_back(LW[i].class_count());
    rep.classes_rel.push_back(LV[i].class_count() - LW[i].class_count());
    rep.unknowns_v.push_back(LV[i].unknowns());
    rep.unknowns_vp.push_back(LW[i].unknowns());
    rep.unknowns_rel.push_back(S[i].rel_unknowns());
  }
  rep.checks.push_back({"relative cochains vanish in dimension 0", rep.unknowns_rel[0] == 0,
                        std::to_string(rep.unknowns_rel[0]) + " relative unknowns"});
  for (int i = 0; i <= 2; ++i) rep.checks.push_back(check_split(S[i], i));

  // absolute cohomology on both sides
  auto ZV0 = cocycle_group(cv, LV[0]), ZW0 = cocycle_group(cw, LW[0]);
  auto ZV1 = cocycle_group(cv, LV[1]), ZW1 = cocycle_group(cw, LW[1]);
  auto BV1 = coboundary_group(cv, LV[0], LV[1]), BW1 = coboundary_group(cw, LW[0], LW[1]);
  QuotientGroup H0V(ZV0, Subgroup(LV[0].moduli)), H0W(ZW0, Subgroup(LW[0].moduli));
  QuotientGroup H1V(ZV1, BV1), H1W(ZW1, BW1);
  rep.h0_v = H0V.factors();
  rep.h0_vp = H0W.factors();
  rep.h1_v = H1V.factors();
  rep.h1_vp = H1W.factors();

  // H^0_{V'} -> H^0_V is onto and one to one: the cocycle groups correspond under i
  Subgroup iZW0(LV[0].moduli);
  for (int k = 0; k < ZW0.pivot_count(); ++k) iZW0.insert(dense(S[0].iota(sparse(ZW0.pivot(k))), LV[0].unknowns()));
  rep.checks.push_back({"H^0 of " + Vp.name + " -> H^0 of " + V.name + " is an isomorphism", same_subgroup(iZW0, ZV0),
                        factors_text(rep.h0_vp) + " -> " + factors_text(rep.h0_v)});

  // relative cocycles and the connecting-map kernel from one pass over the 2-cells
  const auto &S1 = S[1];
  int nrel = S1.rel_unknowns();
  EliminationKernel zrel(S1.rel_moduli);
  Vec joint = S1.rel_moduli;
  joint.insert(joint.end(), LW[1].moduli.begin(), LW[1].moduli.end());
  EliminationKernel kz(joint);
  std::vector<SparseRow> rc, rr;
  cv.cells().for_each_cell(2, [&](const CellKey &c) {
    const auto &F = cv.cells().fiber(c);
    coboundary_rows(cv, LV[1], c, rc);
    // (d_V (s z - i k))(c) = 0
    for (int r = 0; r < F.rank(); ++r) {
      SparseRow row;
      for (auto [u, x] : rc[r]) {
        int C = S1.v_class[u], t = S1.v_coord[u];
        if (S1.rel_offset[C] >= 0) row.emplace_back(S1.rel_offset[C] + t, x);
        row.emplace_back(nrel + LW[1].offset[S1.p[C]] + t, -x);
      }
      kz.add(std::move(row), F.moduli[r]);
    }
    int C2 = LV[2].class_of(c, cv.classes());
    const auto &first = LW[2].reps[LW[2].class_of(c, cw.classes())];
    if (LV[2].class_of(first, cv.classes()) == C2) return;
    coboundary_rows(cv, LV[1], first, rr);
    // (q d_V s z)(c) = (d_V s z)(c) - (d_V s z)(first cell of the V'-class of c)
    for (int r = 0; r < F.rank(); ++r) {
      SparseRow row;
      for (auto [u, x] : rc[r])
        if (S1.rel_offset[S1.v_class[u]] >= 0) row.emplace_back(S1.rel_offset[S1.v_class[u]] + S1.v_coord[u], x);
      for (auto [u, x] : rr[r])
        if (S1.rel_offset[S1.v_class[u]] >= 0) row.emplace_back(S1.rel_offset[S1.v_class[u]] + S1.v_coord[u], -x);
      zrel.add(std::move(row), F.moduli[r]);
    }
  });
  auto Zrel = zrel.kernel(params.unknown_cap);
  QuotientGroup H1rel(Zrel, Subgroup(S1.rel_moduli));
  rep.h1_rel = H1rel.factors();

  // i_* on H^1 is one to one
  const auto &gw = H1W.generators();
  for (const auto &g : gw) {
    auto img = dense(S1.iota(sparse(g)), LV[1].unknowns());
    if (!ZV1.contains(img)) throw Error(ErrorKind::Internal, "image of a cocycle is not a cocycle");
    rep.iota_h1.push_back(H1V.classify(img));
  }
  KernelSolver inj(H1W.factors());
  for (size_t j = 0; j < H1V.factors().size(); ++j) {
    SparseRow row;
    for (size_t i = 0; i < gw.size(); ++i)
      if (rep.iota_h1[i][j]) row.emplace_back(static_cast<int>(i), rep.iota_h1[i][j]);
    inj.add(std::move(row), H1V.factors()[j]);
  }
  bool injective = inj.kernel().order() == 1;
  rep.checks.push_back({"H^1 of " + Vp.name + " -> H^1 of " + V.name + " is one to one", injective,
                        factors_text(rep.h1_vp) + " -> " + factors_text(rep.h1_v)});

  // im i_* = ker q_* inside H^1_V
  Subgroup im(H1V.factors());
  for (const auto &v : rep.iota_h1) im.insert(v);
  KernelSolver kq(H1V.factors());
  std::vector<Sparse> qg;
  for (const auto &g : H1V.generators()) {
    auto z = S1.q(sparse(g));
    if (!Zrel.contains(dense(z, nrel))) throw Error(ErrorKind::Internal, "q of a cocycle is not a relative cocycle");
    qg.push_back(z);
  }
  for (int rho = 0; rho < nrel; ++rho) {
    SparseRow row;
    for (size_t i = 0; i < qg.size(); ++i)
      for (auto [u, x] : qg[i])
        if (u == rho) row.emplace_back(static_cast<int>(i), x);
    if (!row.empty()) kq.add(std::move(row), S1.rel_moduli[rho]);
  }
  rep.checks.push_back({"exact at H^1 of " + V.name, same_subgroup(im, kq.kernel()),
                        "image order " + to_string(im.order()) + ", kernel order " + to_string(kq.kernel().order())});

  // ker(connecting map) = im q_* inside H^1_rel = Z^1_rel
  auto K = kz.kernel(params.unknown_cap);
  Subgroup ker_delta(S1.rel_moduli), im_q(S1.rel_moduli);
  for (int k = 0; k < K.pivot_count(); ++k) {
    const auto &v = K.pivot(k);
    ker_delta.insert(Vec(v.begin(), v.begin() + nrel));
  }
  for (int k = 0; k < ZV1.pivot_count(); ++k) im_q.insert(dense(S1.q(sparse(ZV1.pivot(k))), nrel));
  bool at_rel = same_subgroup(ker_delta, im_q) && ker_delta.subset_of(Zrel);
  rep.checks.push_back({"exact at relative H^1", at_rel,
                        "kernel order " + to_string(ker_delta.order()) + ", image order " + to_string(im_q.order())});
  rep.warnings.push_back("truncated: cells come from the term pool of depth " + std::to_string(params.depth) + " and arity " +
                         std::to_string(params.arity));
  return rep;
}

} // namespace abelext
