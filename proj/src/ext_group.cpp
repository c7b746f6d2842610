#include "abelext/ext_group.hpp"

#include "abelext/error.hpp"

#include <algorithm>

namespace abelext {

namespace {

constexpr std::size_t kUnknownCap = 1 << 15;

// A linear expression in the basic-cell unknowns, one sparse row per target coordinate.
struct Form {
  int base = 0;
  std::vector<SparseRow> rows;
};

auto form_of(const Term &t, const std::vector<int> &a, const AbOveralgebra &M, const CellLayout &L) -> Form {
  if (t.is_var()) {
    Form f;
    f.base = a.at(t.var);
    f.rows.resize(M.groups[f.base].rank());
    return f;
  }
  int k = static_cast<int>(t.args.size());
  std::vector<Form> kids;
  std::vector<int> bases(k);
  for (int i = 0; i < k; ++i) {
    kids.push_back(form_of(t.args[i], a, M, L));
    bases[i] = kids.back().base;
  }
  Form f;
  std::size_t idx = encode_tuple(bases.data(), M.base.size, k);
  f.base = M.base.tables[t.op][idx];
  const auto &G = M.groups[f.base];
  const Matrix &Mx = M.opmaps[t.op][idx];
  f.rows.resize(G.rank());
  for (int r = 0; r < G.rank(); ++r) {
    i64 m = G.moduli[r];
    SparseRow row;
    int col = 0;
    for (int i = 0; i < k; ++i)
      for (int c = 0; c < M.groups[bases[i]].rank(); ++c, ++col) {
        i64 coef = mod(Mx[r][col], m);
        if (coef == 0) continue;
        for (auto [u, v] : kids[i].rows[c]) row.emplace_back(u, mulmod(coef, v, m));
      }
    row.emplace_back(L.offset[t.op][idx] + r, 1);
    f.rows[r] = std::move(row);
  }
  return f;
}

} // namespace

auto ext_group(const AbOveralgebra &M, const VarietyPresentation &V) -> ExtGroup {
  validate_abov(M);
  if (!(M.base.sig == V.signature)) throw Error(ErrorKind::SignatureMismatch, "module and variety have different signatures");
  ExtGroup X;
  X.M = M;
  X.V = V;
  X.layout = CellLayout(M);
  const auto &A = M.base;
  if (X.layout.moduli.size() > kUnknownCap) throw Error(ErrorKind::CapExceeded, "too many basic-cell unknowns");
  KernelSolver ks(X.layout.moduli);
  for (const auto &id : V.identities) {
    std::size_t count = ipow(A.size, id.nvars);
    std::vector<int> a(id.nvars);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, A.size, id.nvars, a.data());
      Form l = form_of(id.lhs, a, M, X.layout), r = form_of(id.rhs, a, M, X.layout);
      if (l.base != r.base) throw Error(ErrorKind::Invariant, "base algebra violates an identity of the variety");
      const auto &G = M.groups[l.base];
      for (int c = 0; c < G.rank(); ++c) {
        SparseRow row = l.rows[c];
        for (auto [u, v] : r.rows[c]) row.emplace_back(u, -v);
        ks.add(std::move(row), G.moduli[c]);
      }
    }
  }
  X.constraint_rows = ks.rows_seen();
  X.distinct_rows = ks.rows_distinct();
  X.cycles = ks.kernel();
  X.boundaries = Subgroup(X.layout.moduli);
  for (int a = 0; a < A.size; ++a)
    for (int j = 0; j < M.groups[a].rank(); ++j) {
      Cochain0 d = zero_cochain0(M);
      d[a][j] = 1;
      X.boundaries.insert(X.layout.flatten(coboundary0(d, M)));
    }
  if (!X.boundaries.subset_of(X.cycles)) throw Error(ErrorKind::Internal, "a coboundary failed the identity constraints");
  X.quotient = QuotientGroup(X.cycles, X.boundaries);
  for (const auto &g : X.quotient.generators()) X.generators.push_back(X.layout.unflatten(g, M));
  return X;
}

auto ExtGroup::contains(const Cochain1 &f) const -> bool {
  return well_typed(f, M) && cycles.contains(layout.flatten(f));
}

auto ExtGroup::classify_cochain(const Cochain1 &f) const -> Vec {
  if (!contains(f)) throw Error(ErrorKind::NotFactorSet, "cochain is not a factor set");
  return quotient.classify(layout.flatten(f));
}

auto ExtGroup::classify(const Extension &X) const -> Vec {
  if (!same_structure(X.M, M)) throw Error(ErrorKind::Mismatch, "extension has different coefficient data");
  return classify_cochain(factor_set(X, canonical_section(X)));
}

auto ExtGroup::cochain_of(const Vec &coords) const -> Cochain1 {
  const auto &fac = quotient.factors();
  if (coords.size() != fac.size()) throw Error(ErrorKind::Shape, "class coordinates do not match the group rank");
  Cochain1 f = zero_cochain1(M);
  for (std::size_t i = 0; i < fac.size(); ++i) f = add_cochains(f, scale_cochain(mod(coords[i], fac[i]), generators[i], M), M);
  return f;
}

auto ExtGroup::representative(const Vec &coords, const std::string &name) const -> Extension {
  return build_from_factor_set(cochain_of(coords), M, name);
}

auto ExtGroup::all_classes(long cap) const -> std::vector<Vec> {
  FinAbGroup G{quotient.factors()};
  i64 n = G.size(cap);
  std::vector<Vec> out;
  for (i64 c = 0; c < n; ++c) out.push_back(G.decode(c));
  return out;
}

auto ext_of_overalgebra(const PointedOveralgebra &Q, const AbOveralgebra &M, const VarietyPresentation &V) -> OveralgebraExt {
  validate_pov(Q);
  OveralgebraExt R;
  R.total = total_algebra(Q);
  R.restricted = restrict(R.total.algebra, R.total.pi, M);
  R.ext = ext_group(R.restricted, V);
  return R;
}

auto total_map(const PointedOveralgebra &Q1, const PointedOveralgebra &Q2, const std::vector<std::vector<int>> &r)
    -> std::vector<int> {
  TotalAlgebra T1 = total_algebra(Q1), T2 = total_algebra(Q2);
  std::vector<int> out(T1.algebra.size);
  for (int x = 0; x < T1.algebra.size; ++x) out[x] = T2.index(T1.base_of[x], r.at(T1.base_of[x]).at(T1.local_of[x]));
  if (!is_homomorphism(out, T1.algebra, T2.algebra)) throw Error(ErrorKind::NotHomomorphism, "fiber maps do not form an overalgebra map");
  return out;
}

} // namespace abelext
