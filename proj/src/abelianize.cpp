#include "abelext/error.hpp"
#include "abelext/overalgebra.hpp"

#include <algorithm>

namespace abelext {

namespace {

struct FiberGroup {
  FinAbGroup group;
  std::vector<Vec> coords;   // element -> coordinates
  std::vector<int> elements; // encoded coordinates -> element
};

// Recognizes the abelian group given by a Cayley table with identity `zero`.
auto recognize(const std::vector<std::vector<int>> &add, int zero) -> FiberGroup {
  const int n = static_cast<int>(add.size());
  FiberGroup F;
  if (n == 1) {
    F.coords = {Vec{}};
    F.elements = {0};
    return F;
  }
  std::vector<Vec> rel;
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) {
      Vec r(n, 0);
      r[p] += 1;
      r[q] += 1;
      r[add[p][q]] -= 1;
      rel.push_back(r);
    }
  Vec z(n, 0);
  z[zero] = 1;
  rel.push_back(z);
  auto S = smith_mod(rel, n, n);
  std::vector<int> keep;
  for (int t = 0; t < n; ++t)
    if (S.diag[t] > 1) {
      keep.push_back(t);
      F.group.moduli.push_back(S.diag[t]);
    }
  F.coords.resize(n);
  for (int x = 0; x < n; ++x) {
    Vec c;
    for (int t : keep) c.push_back(mod(S.V[x][t], S.diag[t]));
    F.coords[x] = c;
  }
  F.elements.assign(n, -1);
  for (int x = 0; x < n; ++x) {
    i64 code = F.group.encode(F.coords[x]);
    if (code >= n || F.elements[code] >= 0) throw Error(ErrorKind::Internal, "fiber group recognition failed");
    F.elements[code] = x;
  }
  return F;
}

} // namespace

auto abelianize_pointed(const PointedOveralgebra &P, const Term &d) -> AbelianizeResult {
  validate_pov(P);
  if (term_span(d) > 3) throw Error(ErrorKind::Arity, "difference term must be ternary");
  const auto &A = P.base;
  TotalAlgebra T = total_algebra(P);
  auto fail = [&](const std::string &what, int a) {
    throw Error(ErrorKind::NotAbelianKernel, what + " fails in the fiber over " + std::to_string(a));
  };
  AbelianizeResult R;
  R.module.name = P.name + "_ab";
  R.module.variety = P.variety;
  R.module.base = A;
  std::vector<std::vector<std::vector<int>>> addt(A.size);
  std::vector<FiberGroup> fibers;
  for (int a = 0; a < A.size; ++a) {
    const int n = P.fiber[a], z = P.point[a];
    // d^P restricted to the fiber
    std::vector<int> dt(static_cast<std::size_t>(n) * n * n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r) {
          int v = eval_term(d, T.algebra, {T.index(a, p), T.index(a, q), T.index(a, r)});
          if (T.base_of[v] != a) fail("difference term closure", a);
          dt[(static_cast<std::size_t>(p) * n + q) * n + r] = T.local_of[v];
        }
    auto D = [&](int p, int q, int r) { return dt[(static_cast<std::size_t>(p) * n + q) * n + r]; };
    auto &add = addt[a];
    add.assign(n, std::vector<int>(n));
    std::vector<int> neg(n);
    for (int p = 0; p < n; ++p) {
      neg[p] = D(z, p, z);
      for (int q = 0; q < n; ++q) add[p][q] = D(p, z, q);
    }
    for (int p = 0; p < n; ++p) {
      if (add[z][p] != p || add[p][z] != p) fail("identity law", a);
      if (add[p][neg[p]] != z) fail("inverse law", a);
      for (int q = 0; q < n; ++q) {
        if (add[p][q] != add[q][p]) fail("commutativity", a);
        for (int r = 0; r < n; ++r) {
          if (add[add[p][q]][r] != add[p][add[q][r]]) fail("associativity", a);
          if (add[add[p][neg[q]]][r] != D(p, q, r)) fail("the difference-term formula", a);
        }
      }
    }
    fibers.push_back(recognize(add, z));
    R.module.groups.push_back(fibers.back().group);
    R.coords.push_back(fibers.back().coords);
    R.elements.push_back(fibers.back().elements);
  }
  // operations must be fiberwise homomorphisms
  R.module.opmaps.resize(A.sig.size());
  std::vector<int> args(std::max(1, A.sig.max_arity())), p(args.size()), q(args.size()), s(args.size());
  for (int op = 0; op < A.sig.size(); ++op) {
    int k = A.sig.arity(op);
    std::size_t count = ipow(A.size, k);
    R.module.opmaps[op].resize(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, A.size, k, args.data());
      int target = A.tables[op][idx];
      std::size_t cells = 1;
      for (int i = 0; i < k; ++i) cells *= static_cast<std::size_t>(P.fiber[args[i]]);
      auto unpack = [&](std::size_t c, std::vector<int> &out) {
        for (int i = k - 1; i >= 0; --i) {
          out[i] = static_cast<int>(c % static_cast<std::size_t>(P.fiber[args[i]]));
          c /= static_cast<std::size_t>(P.fiber[args[i]]);
        }
      };
      for (std::size_t c1 = 0; c1 < cells; ++c1) {
        unpack(c1, p);
        int wp = P.apply(op, args.data(), p.data());
        for (std::size_t c2 = 0; c2 < cells; ++c2) {
          unpack(c2, q);
          for (int i = 0; i < k; ++i) s[i] = addt[args[i]][p[i]][q[i]];
          int lhs = P.apply(op, args.data(), s.data());
          if (lhs != addt[target][wp][P.apply(op, args.data(), q.data())])
            throw Error(ErrorKind::NotAbelianKernel, "operation " + A.sig.name(op) + " is not additive over its fibers");
        }
      }
      const auto &tg = R.module.groups[target];
      int cols = 0;
      for (int i = 0; i < k; ++i) cols += R.module.groups[args[i]].rank();
      Matrix Mx = zero_matrix(tg.rank(), cols);
      int col = 0;
      for (int i = 0; i < k; ++i) {
        const auto &src = R.module.groups[args[i]];
        for (int j = 0; j < src.rank(); ++j) {
          Vec unit(src.rank(), 0);
          unit[j] = 1;
          for (int l = 0; l < k; ++l) p[l] = P.point[args[l]];
          p[i] = fibers[args[i]].elements[src.encode(unit)];
          const Vec &img = fibers[target].coords[P.apply(op, args.data(), p.data())];
          for (int r = 0; r < tg.rank(); ++r) Mx[r][col] = img[r];
          ++col;
        }
      }
      R.module.opmaps[op][idx] = Mx;
    }
  }
  validate_abov(R.module);
  return R;
}

auto free_abelian_on_pointed(const PointedOveralgebra &P, const Term &d) -> FreeAbelianResult {
  validate_pov(P);
  const auto &A = P.base;
  TotalAlgebra T = total_algebra(P);
  Congruence kappa = Congruence::from_labels(T.pi);
  FreeAbelianResult R;
  R.commutator = commutator(T.algebra, kappa, kappa);
  QuotientResult Q = quotient(T.algebra, R.commutator);
  std::vector<int> pi(Q.algebra.size), iota(A.size);
  for (int b = 0; b < T.algebra.size; ++b) pi[Q.nat[b]] = T.pi[b];
  for (int a = 0; a < A.size; ++a) iota[a] = Q.nat[T.iota[a]];
  PointedOveralgebra P2 = pointed_of_surjection(Q.algebra, pi, iota, A);
  P2.name = P.name + "_free";
  P2.variety = P.variety;
  auto ab = abelianize_pointed(P2, d);
  std::vector<int> local(Q.algebra.size);
  std::vector<int> seen(A.size, 0);
  for (int x = 0; x < Q.algebra.size; ++x) local[x] = seen[pi[x]]++;
  R.unit.resize(A.size);
  for (int a = 0; a < A.size; ++a)
    for (int p = 0; p < P.fiber[a]; ++p) R.unit[a].push_back(ab.coords[a][local[Q.nat[T.index(a, p)]]]);
  R.module = ab.module;
  R.module.name = P.name + "_free";
  return R;
}

} // namespace abelext
