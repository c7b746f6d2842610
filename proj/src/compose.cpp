#include "abelext/compose.hpp"

#include "abelext/error.hpp"

#include <algorithm>

namespace abelext {

auto pullback(const Extension &X, const FiniteAlgebra &A2, const std::vector<int> &g, const std::string &name) -> Extension {
  const auto &A = X.A();
  if (!is_homomorphism(g, A2, A)) throw Error(ErrorKind::NotHomomorphism, "pullback along a non-homomorphism");
  Extension P;
  P.name = name;
  P.M = restrict(A2, g, X.M);
  std::vector<std::pair<int, int>> elems;
  std::vector<int> index(static_cast<std::size_t>(X.E.size) * A2.size, -1);
  for (int e = 0; e < X.E.size; ++e)
    for (int c = 0; c < A2.size; ++c)
      if (X.pi[e] == g[c]) {
        index[static_cast<std::size_t>(e) * A2.size + c] = static_cast<int>(elems.size());
        elems.emplace_back(e, c);
      }
  auto &E = P.E;
  E.name = name;
  E.variety = X.E.variety;
  E.sig = A.sig;
  E.size = static_cast<int>(elems.size());
  E.tables.resize(A.sig.size());
  std::vector<int> args(std::max(1, A.sig.max_arity())), l(args.size()), r(args.size());
  for (int op = 0; op < A.sig.size(); ++op) {
    int k = A.sig.arity(op);
    std::size_t count = ipow(E.size, k);
    E.tables[op].resize(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, E.size, k, args.data());
      for (int i = 0; i < k; ++i) {
        l[i] = elems[args[i]].first;
        r[i] = elems[args[i]].second;
      }
      E.tables[op][idx] = index[static_cast<std::size_t>(X.E.apply(op, l.data())) * A2.size + A2.apply(op, r.data())];
    }
  }
  P.pi.resize(E.size);
  P.chi.resize(E.size);
  for (int x = 0; x < E.size; ++x) {
    auto [e, c] = elems[x];
    P.pi[x] = c;
    for (int y : X.chi[e]) P.chi[x].push_back(index[static_cast<std::size_t>(y) * A2.size + c]);
  }
  return P;
}

auto pullback_section(const Extension &X, const Extension &P, const std::vector<int> &g, const Section &s) -> Section {
  Section out(P.A().size, -1);
  // pairs are ordered lexicographically, so find them directly
  std::vector<std::pair<int, int>> elems;
  for (int e = 0; e < X.E.size; ++e)
    for (int c = 0; c < P.A().size; ++c)
      if (X.pi[e] == g[c]) elems.emplace_back(e, c);
  for (int x = 0; x < static_cast<int>(elems.size()); ++x) {
    auto [e, c] = elems[x];
    if (e == s[g[c]]) out[c] = x;
  }
  return out;
}

auto pushforward_cochain(const Cochain1 &f, const AbHom &h, const AbOveralgebra &N) -> Cochain1 {
  const auto &A = N.base;
  Cochain1 out(A.sig.size());
  for (int op = 0; op < A.sig.size(); ++op)
    for (std::size_t idx = 0; idx < A.tables[op].size(); ++idx) {
      int t = A.tables[op][idx];
      out[op].push_back(apply_abhom(h, t, f[op][idx], N));
    }
  return out;
}

auto pushforward(const Extension &X, const AbHom &h, const AbOveralgebra &N, const std::string &name) -> Extension {
  validate_abhom(h, X.M, N);
  Cochain1 f = factor_set(X, canonical_section(X));
  return build_from_factor_set(pushforward_cochain(f, h, N), N, name);
}

namespace {

struct Digits {
  std::vector<int> sizes;
  [[nodiscard]] auto encode(const std::vector<int> &d) const -> int {
    int x = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) x = x * sizes[i] + d[i];
    return x;
  }
  [[nodiscard]] auto decode(int x) const -> std::vector<int> {
    std::vector<int> d(sizes.size());
    for (int i = static_cast<int>(sizes.size()) - 1; i >= 0; --i) {
      d[i] = x % sizes[i];
      x /= sizes[i];
    }
    return d;
  }
};

} // namespace

auto outer_product_ext(const std::vector<Extension> &Xs, const std::string &name) -> Extension {
  if (Xs.empty()) throw Error(ErrorKind::Shape, "outer product of no extensions");
  const auto &sig = Xs[0].A().sig;
  std::vector<FiniteAlgebra> Es;
  std::vector<AbOveralgebra> Ms;
  Digits de, da;
  for (const auto &X : Xs) {
    Es.push_back(X.E);
    Ms.push_back(X.M);
    de.sizes.push_back(X.E.size);
    da.sizes.push_back(X.A().size);
  }
  Extension P;
  P.name = name;
  P.E = product(Es, sig).algebra;
  P.E.name = name;
  P.M = outer_product(Ms, sig);
  const int n = static_cast<int>(Xs.size());
  P.pi.resize(P.E.size);
  P.chi.resize(P.E.size);
  for (int x = 0; x < P.E.size; ++x) {
    auto d = de.decode(x);
    std::vector<int> a(n);
    for (int k = 0; k < n; ++k) a[k] = Xs[k].pi[d[k]];
    int base = da.encode(a);
    P.pi[x] = base;
    const auto &G = P.M.groups[base];
    i64 count = G.size();
    for (i64 c = 0; c < count; ++c) {
      Vec m = G.decode(c);
      std::vector<int> img(n);
      int pos = 0;
      for (int k = 0; k < n; ++k) {
        const auto &Gk = Xs[k].M.groups[a[k]];
        Vec part(m.begin() + pos, m.begin() + pos + Gk.rank());
        pos += Gk.rank();
        img[k] = Xs[k].chi[d[k]][Gk.encode(part)];
      }
      P.chi[x].push_back(de.encode(img));
    }
  }
  return P;
}

auto product_section(const std::vector<Extension> &Xs, const Extension &P, const std::vector<Section> &sections) -> Section {
  Digits de, da;
  for (const auto &X : Xs) {
    de.sizes.push_back(X.E.size);
    da.sizes.push_back(X.A().size);
  }
  Section s(P.A().size);
  for (int b = 0; b < P.A().size; ++b) {
    auto a = da.decode(b);
    std::vector<int> e(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) e[k] = sections[k][a[k]];
    s[b] = de.encode(e);
  }
  return s;
}

auto outer_factor_mismatch(const std::vector<Extension> &Xs, const Extension &P) -> std::string {
  std::vector<Section> secs;
  std::vector<Cochain1> fs;
  for (const auto &X : Xs) {
    secs.push_back(canonical_section(X));
    fs.push_back(factor_set(X, secs.back()));
  }
  Cochain1 f = factor_set(P, product_section(Xs, P, secs));
  Digits da;
  for (const auto &X : Xs) da.sizes.push_back(X.A().size);
  const auto &B = P.A();
  const int n = static_cast<int>(Xs.size());
  std::vector<int> args(std::max(1, B.sig.max_arity())), comp(args.size());
  for (int op = 0; op < B.sig.size(); ++op) {
    int k = B.sig.arity(op);
    for (std::size_t idx = 0; idx < B.tables[op].size(); ++idx) {
      decode_tuple(idx, B.size, k, args.data());
      Vec expect;
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < k; ++i) comp[i] = da.decode(args[i])[j];
        const auto &v = fs[j][op][encode_tuple(comp.data(), Xs[j].A().size, k)];
        expect.insert(expect.end(), v.begin(), v.end());
      }
      if (f[op][idx] != expect) return B.sig.name(op) + " at cell " + std::to_string(idx);
    }
  }
  return {};
}

auto baer_sum(const Extension &X1, const Extension &X2, const ExtGroup &G) -> BaerSum {
  const auto &M = G.M;
  if (!same_structure(X1.M, M) || !same_structure(X2.M, M)) throw Error(ErrorKind::Mismatch, "Baer sum needs equal coefficients");
  BaerSum R;
  Cochain1 f1 = factor_set(X1, canonical_section(X1)), f2 = factor_set(X2, canonical_section(X2));
  R.by_cochains = G.classify_cochain(add_cochains(f1, f2, M));
  Extension O = outer_product_ext({X1, X2});
  const auto &A = M.base;
  Extension D = pullback(O, A, diagonal_map(A.size, 2), "EEd");
  R.restriction_matches = same_structure(D.M, product_ab({M, M}, A));
  if (!R.restriction_matches) throw Error(ErrorKind::Internal, "restriction of the outer product along the diagonal differs from the product");
  AbHom plus = addition_map(M);
  R.pipeline = pushforward(D, plus, M, "baer");
  R.by_pipeline = G.classify(R.pipeline);
  return R;
}

} // namespace abelext
