#include "abelext/overalgebra.hpp"

#include "abelext/error.hpp"

#include <algorithm>

namespace abelext {

namespace {

constexpr long kTotalCap = 1L << 22;

void check_total_size(long n, const std::string &what) {
  if (n > kTotalCap) throw Error(ErrorKind::CapExceeded, "total algebra of " + what + " is too large");
}

} // namespace

auto AbOveralgebra::source_group(int op, const int *args) const -> FinAbGroup {
  FinAbGroup g;
  for (int i = 0; i < base.sig.arity(op); ++i)
    g.moduli.insert(g.moduli.end(), groups[args[i]].moduli.begin(), groups[args[i]].moduli.end());
  return g;
}

auto AbOveralgebra::apply_op(int op, const int *args, const std::vector<Vec> &elems) const -> Vec {
  Vec x;
  for (const auto &m : elems) x.insert(x.end(), m.begin(), m.end());
  int k = base.sig.arity(op);
  int target = base.apply(op, args);
  (void)k;
  return apply_matrix(opmap(op, args), x, groups[target]);
}

void validate_abov(const AbOveralgebra &M) {
  validate_algebra(M.base);
  const auto &A = M.base;
  auto where = "overalgebra " + M.name;
  if (static_cast<int>(M.groups.size()) != A.size) throw Error(ErrorKind::Shape, where + ": one group per element required");
  for (const auto &g : M.groups)
    for (i64 m : g.moduli)
      if (m < 2) throw Error(ErrorKind::Invariant, where + ": group moduli must be at least 2");
  if (static_cast<int>(M.opmaps.size()) != A.sig.size()) throw Error(ErrorKind::Shape, where + ": one opmap family per symbol");
  std::vector<int> args(std::max(1, A.sig.max_arity()));
  for (int op = 0; op < A.sig.size(); ++op) {
    int k = A.sig.arity(op);
    std::size_t count = ipow(A.size, k);
    if (M.opmaps[op].size() != count) throw Error(ErrorKind::Shape, where + ": opmap count for " + A.sig.name(op));
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, A.size, k, args.data());
      const auto &target = M.groups[A.tables[op][idx]];
      if (!is_hom_matrix(M.opmaps[op][idx], M.source_group(op, args.data()), target))
        throw Error(ErrorKind::Invariant, where + ": opmap " + A.sig.name(op) + " is not a homomorphism of the fibers");
    }
  }
}

auto same_structure(const AbOveralgebra &M, const AbOveralgebra &N) -> bool {
  if (M.base.size != N.base.size || !(M.base.sig == N.base.sig) || M.base.tables != N.base.tables) return false;
  if (M.groups != N.groups) return false;
  for (int op = 0; op < M.base.sig.size(); ++op)
    for (std::size_t idx = 0; idx < M.opmaps[op].size(); ++idx) {
      const auto &t = M.groups[M.base.tables[op][idx]];
      if (reduce_matrix(M.opmaps[op][idx], t) != reduce_matrix(N.opmaps[op][idx], t)) return false;
    }
  return true;
}

auto PointedOveralgebra::apply(int op, const int *args, const int *elems) const -> int {
  int k = base.sig.arity(op);
  std::size_t idx = 0;
  for (int i = 0; i < k; ++i) idx = idx * static_cast<std::size_t>(fiber[args[i]]) + static_cast<std::size_t>(elems[i]);
  return tables[op][encode_tuple(args, base.size, k)][idx];
}

void validate_pov(const PointedOveralgebra &P) {
  validate_algebra(P.base);
  const auto &A = P.base;
  auto where = "pointed overalgebra " + P.name;
  if (static_cast<int>(P.fiber.size()) != A.size || static_cast<int>(P.point.size()) != A.size)
    throw Error(ErrorKind::Shape, where + ": one fiber per element required");
  for (int a = 0; a < A.size; ++a)
    if (P.fiber[a] < 1 || P.point[a] < 0 || P.point[a] >= P.fiber[a])
      throw Error(ErrorKind::Invariant, where + ": every fiber needs its basepoint");
  if (static_cast<int>(P.tables.size()) != A.sig.size()) throw Error(ErrorKind::Shape, where + ": one table family per symbol");
  std::vector<int> args(std::max(1, A.sig.max_arity())), pts(args.size());
  for (int op = 0; op < A.sig.size(); ++op) {
    int k = A.sig.arity(op);
    std::size_t count = ipow(A.size, k);
    if (P.tables[op].size() != count) throw Error(ErrorKind::Shape, where + ": table count for " + A.sig.name(op));
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, A.size, k, args.data());
      std::size_t cells = 1;
      for (int i = 0; i < k; ++i) cells *= static_cast<std::size_t>(P.fiber[args[i]]);
      const auto &t = P.tables[op][idx];
      int target = A.tables[op][idx];
      if (t.size() != cells) throw Error(ErrorKind::Shape, where + ": table shape for " + A.sig.name(op));
      for (int v : t)
        if (v < 0 || v >= P.fiber[target]) throw Error(ErrorKind::Invariant, where + ": entry outside the target fiber");
      for (int i = 0; i < k; ++i) pts[i] = P.point[args[i]];
      if (P.apply(op, args.data(), pts.data()) != P.point[target])
        throw Error(ErrorKind::Invariant, where + ": " + A.sig.name(op) + " does not preserve basepoints");
    }
  }
}

namespace {

template <class Fiber, class Eval>
auto build_total(const FiniteAlgebra &A, const std::vector<int> &sizes, Eval eval, const std::string &what) -> TotalAlgebra {
  TotalAlgebra T;
  long n = 0;
  for (int a = 0; a < A.size; ++a) {
    T.offset.push_back(static_cast<int>(n));
    n += sizes[a];
    check_total_size(n, what);
  }
  T.base_of.resize(n);
  T.local_of.resize(n);
  for (int a = 0; a < A.size; ++a)
    for (int l = 0; l < sizes[a]; ++l) {
      T.base_of[T.offset[a] + l] = a;
      T.local_of[T.offset[a] + l] = l;
    }
  T.pi = T.base_of;
  auto &B = T.algebra;
  B.name = what;
  B.variety = A.variety;
  B.sig = A.sig;
  B.size = static_cast<int>(n);
  B.tables.resize(A.sig.size());
  std::vector<int> args(std::max(1, A.sig.max_arity())), bases(args.size()), locals(args.size());
  for (int op = 0; op < A.sig.size(); ++op) {
    int k = A.sig.arity(op);
    std::size_t count = ipow(B.size, k);
    if (count > static_cast<std::size_t>(kTotalCap) * 4) throw Error(ErrorKind::CapExceeded, "total algebra tables too large");
    B.tables[op].resize(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, B.size, k, args.data());
      for (int i = 0; i < k; ++i) {
        bases[i] = T.base_of[args[i]];
        locals[i] = T.local_of[args[i]];
      }
      int target = A.apply(op, bases.data());
      B.tables[op][idx] = T.offset[target] + eval(op, bases.data(), locals.data());
    }
  }
  return T;
}

struct Dummy {};

} // namespace

auto total_algebra(const AbOveralgebra &M) -> TotalAlgebra {
  std::vector<int> sizes;
  for (const auto &g : M.groups) sizes.push_back(static_cast<int>(g.size(kTotalCap)));
  int k_max = std::max(1, M.base.sig.max_arity());
  std::vector<Vec> elems(k_max);
  auto eval = [&](int op, const int *bases, const int *locals) {
    int k = M.base.sig.arity(op);
    std::vector<Vec> e(k);
    for (int i = 0; i < k; ++i) e[i] = M.groups[bases[i]].decode(locals[i]);
    int target = M.base.apply(op, bases);
    return static_cast<int>(M.groups[target].encode(M.apply_op(op, bases, e)));
  };
  auto T = build_total<Dummy>(M.base, sizes, eval, M.base.name + "x" + M.name);
  T.iota.resize(M.base.size);
  for (int a = 0; a < M.base.size; ++a) T.iota[a] = T.offset[a];
  return T;
}

auto total_algebra(const PointedOveralgebra &P) -> TotalAlgebra {
  auto eval = [&](int op, const int *bases, const int *locals) { return P.apply(op, bases, locals); };
  auto T = build_total<Dummy>(P.base, P.fiber, eval, P.base.name + "x" + P.name);
  T.iota.resize(P.base.size);
  for (int a = 0; a < P.base.size; ++a) T.iota[a] = T.offset[a] + P.point[a];
  return T;
}

auto underlying_pointed(const AbOveralgebra &M) -> PointedOveralgebra {
  PointedOveralgebra P;
  P.name = M.name;
  P.variety = M.variety;
  P.base = M.base;
  const auto &A = M.base;
  for (const auto &g : M.groups) P.fiber.push_back(static_cast<int>(g.size(kTotalCap)));
  P.point.assign(A.size, 0);
  P.tables.resize(A.sig.size());
  std::vector<int> args(std::max(1, A.sig.max_arity())), locals(args.size());
  for (int op = 0; op < A.sig.size(); ++op) {
    int k = A.sig.arity(op);
    std::size_t count = ipow(A.size, k);
    P.tables[op].resize(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, A.size, k, args.data());
      int target = A.tables[op][idx];
      std::size_t cells = 1;
      for (int i = 0; i < k; ++i) cells *= static_cast<std::size_t>(P.fiber[args[i]]);
      auto &t = P.tables[op][idx];
      t.resize(cells);
      for (std::size_t c = 0; c < cells; ++c) {
        std::size_t rest = c;
        for (int i = k - 1; i >= 0; --i) {
          locals[i] = static_cast<int>(rest % static_cast<std::size_t>(P.fiber[args[i]]));
          rest /= static_cast<std::size_t>(P.fiber[args[i]]);
        }
        std::vector<Vec> e(k);
        for (int i = 0; i < k; ++i) e[i] = M.groups[args[i]].decode(locals[i]);
        t[c] = static_cast<int>(M.groups[target].encode(M.apply_op(op, args.data(), e)));
      }
    }
  }
  return P;
}

auto pointed_of_surjection(const FiniteAlgebra &B, const std::vector<int> &pi, const std::vector<int> &iota,
                           const FiniteAlgebra &A) -> PointedOveralgebra {
  PointedOveralgebra P;
  P.base = A;
  P.variety = A.variety;
  std::vector<std::vector<int>> fib(A.size);
  std::vector<int> local(B.size);
  for (int b = 0; b < B.size; ++b) {
    local[b] = static_cast<int>(fib[pi[b]].size());
    fib[pi[b]].push_back(b);
  }
  for (int a = 0; a < A.size; ++a) {
    P.fiber.push_back(static_cast<int>(fib[a].size()));
    if (pi[iota[a]] != a) throw Error(ErrorKind::Invariant, "basepoint section is not a right inverse");
    P.point.push_back(local[iota[a]]);
  }
  P.tables.resize(A.sig.size());
  std::vector<int> args(std::max(1, A.sig.max_arity())), elems(args.size());
  for (int op = 0; op < A.sig.size(); ++op) {
    int k = A.sig.arity(op);
    std::size_t count = ipow(A.size, k);
    P.tables[op].resize(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, A.size, k, args.data());
      std::size_t cells = 1;
      for (int i = 0; i < k; ++i) cells *= fib[args[i]].size();
      auto &t = P.tables[op][idx];
      t.resize(cells);
      for (std::size_t c = 0; c < cells; ++c) {
        std::size_t rest = c;
        for (int i = k - 1; i >= 0; --i) {
          elems[i] = fib[args[i]][rest % fib[args[i]].size()];
          rest /= fib[args[i]].size();
        }
        int y = B.apply(op, elems.data());
        if (pi[y] != A.tables[op][idx]) throw Error(ErrorKind::NotHomomorphism, "projection is not a homomorphism");
        t[c] = local[y];
      }
    }
  }
  return P;
}

auto alpha_star(const FiniteAlgebra &A, const Congruence &alpha) -> PointedOveralgebra {
  if (!is_congruence(A, alpha)) throw Error(ErrorKind::NotCongruence, "alpha* needs a congruence");
  PointedOveralgebra P;
  P.name = A.name + "_star";
  P.variety = A.variety;
  P.base = A;
  auto blocks = alpha.blocks();
  std::vector<int> block_of(A.size), pos(A.size);
  for (int b = 0; b < static_cast<int>(blocks.size()); ++b)
    for (int i = 0; i < static_cast<int>(blocks[b].size()); ++i) {
      block_of[blocks[b][i]] = b;
      pos[blocks[b][i]] = i;
    }
  for (int a = 0; a < A.size; ++a) {
    P.fiber.push_back(static_cast<int>(blocks[block_of[a]].size()));
    P.point.push_back(pos[a]);
  }
  P.tables.resize(A.sig.size());
  std::vector<int> args(std::max(1, A.sig.max_arity())), elems(args.size());
  for (int op = 0; op < A.sig.size(); ++op) {
    int k = A.sig.arity(op);
    std::size_t count = ipow(A.size, k);
    P.tables[op].resize(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, A.size, k, args.data());
      std::size_t cells = 1;
      for (int i = 0; i < k; ++i) cells *= static_cast<std::size_t>(P.fiber[args[i]]);
      auto &t = P.tables[op][idx];
      t.resize(cells);
      for (std::size_t c = 0; c < cells; ++c) {
        std::size_t rest = c;
        for (int i = k - 1; i >= 0; --i) {
          const auto &blk = blocks[block_of[args[i]]];
          elems[i] = blk[rest % blk.size()];
          rest /= blk.size();
        }
        t[c] = pos[A.apply(op, elems.data())];
      }
    }
  }
  return P;
}

auto totally_in(const AbOveralgebra &M, const VarietyPresentation &V) -> TotallyInReport {
  TotallyInReport r;
  r.identities = check_identities(total_algebra(M).algebra, V);
  r.holds = r.identities.holds;
  return r;
}

auto totally_in(const PointedOveralgebra &P, const VarietyPresentation &V) -> TotallyInReport {
  TotallyInReport r;
  r.identities = check_identities(total_algebra(P).algebra, V);
  r.holds = r.identities.holds;
  return r;
}

auto restrict(const FiniteAlgebra &X, const std::vector<int> &f, const AbOveralgebra &M) -> AbOveralgebra {
  if (!is_homomorphism(f, X, M.base)) throw Error(ErrorKind::NotHomomorphism, "restriction along a non-homomorphism");
  AbOveralgebra R;
  R.name = M.name + "_res";
  R.variety = M.variety;
  R.base = X;
  for (int x = 0; x < X.size; ++x) R.groups.push_back(M.groups[f[x]]);
  R.opmaps.resize(X.sig.size());
  std::vector<int> args(std::max(1, X.sig.max_arity())), img(args.size());
  for (int op = 0; op < X.sig.size(); ++op) {
    int k = X.sig.arity(op);
    std::size_t count = ipow(X.size, k);
    R.opmaps[op].resize(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, X.size, k, args.data());
      for (int i = 0; i < k; ++i) img[i] = f[args[i]];
      R.opmaps[op][idx] = M.opmap(op, img.data());
    }
  }
  return R;
}

auto product_ab(const std::vector<AbOveralgebra> &Ms, const FiniteAlgebra &base) -> AbOveralgebra {
  for (const auto &M : Ms)
    if (M.base.size != base.size || M.base.tables != base.tables || !(M.base.sig == base.sig))
      throw Error(ErrorKind::SignatureMismatch, "product of overalgebras over different bases");
  AbOveralgebra P;
  P.base = base;
  for (std::size_t k = 0; k < Ms.size(); ++k) P.name += (k ? "x" : "") + Ms[k].name;
  if (!Ms.empty()) P.variety = Ms[0].variety;
  const int n = static_cast<int>(Ms.size());
  for (int a = 0; a < base.size; ++a) {
    std::vector<FinAbGroup> parts;
    for (const auto &M : Ms) parts.push_back(M.groups[a]);
    P.groups.push_back(direct_sum(parts));
  }
  P.opmaps.resize(base.sig.size());
  std::vector<int> args(std::max(1, base.sig.max_arity()));
  for (int op = 0; op < base.sig.size(); ++op) {
    int k = base.sig.arity(op);
    std::size_t count = ipow(base.size, k);
    P.opmaps[op].resize(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, base.size, k, args.data());
      int target = base.tables[op][idx];
      int rows = P.groups[target].rank();
      int cols = 0;
      for (int i = 0; i < k; ++i) cols += P.groups[args[i]].rank();
      Matrix Mx = zero_matrix(rows, cols);
      int row0 = 0;
      for (int f = 0; f < n; ++f) {
        const Matrix &src = Ms[f].opmap(op, args.data());
        int col_src = 0, col0 = 0;
        for (int i = 0; i < k; ++i) {
          int before = 0;
          for (int g = 0; g < f; ++g) before += Ms[g].groups[args[i]].rank();
          int width = Ms[f].groups[args[i]].rank();
          for (int r = 0; r < Ms[f].groups[target].rank(); ++r)
            for (int c = 0; c < width; ++c) Mx[row0 + r][col0 + before + c] = src[r][col_src + c];
          col_src += width;
          col0 += P.groups[args[i]].rank();
        }
        row0 += Ms[f].groups[target].rank();
      }
      P.opmaps[op][idx] = Mx;
    }
  }
  return P;
}

auto outer_product(const std::vector<AbOveralgebra> &Ms, const Signature &sig) -> AbOveralgebra {
  std::vector<FiniteAlgebra> bases;
  for (const auto &M : Ms) bases.push_back(M.base);
  auto prod = product(bases, sig);
  const auto &B = prod.algebra;
  const int n = static_cast<int>(Ms.size());
  AbOveralgebra P;
  P.base = B;
  for (std::size_t k = 0; k < Ms.size(); ++k) P.name += (k ? "(x)" : "") + Ms[k].name;
  if (!Ms.empty()) P.variety = Ms[0].variety;
  auto comp = [&](int x, int f) { return prod.projections[f][x]; };
  for (int x = 0; x < B.size; ++x) {
    std::vector<FinAbGroup> parts;
    for (int f = 0; f < n; ++f) parts.push_back(Ms[f].groups[comp(x, f)]);
    P.groups.push_back(direct_sum(parts));
  }
  P.opmaps.resize(sig.size());
  std::vector<int> args(std::max(1, sig.max_arity())), local(args.size());
  for (int op = 0; op < sig.size(); ++op) {
    int k = sig.arity(op);
    std::size_t count = ipow(B.size, k);
    P.opmaps[op].resize(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, B.size, k, args.data());
      int target = B.tables[op][idx];
      int cols = 0;
      for (int i = 0; i < k; ++i) cols += P.groups[args[i]].rank();
      Matrix Mx = zero_matrix(P.groups[target].rank(), cols);
      int row0 = 0;
      for (int f = 0; f < n; ++f) {
        for (int i = 0; i < k; ++i) local[i] = comp(args[i], f);
        const Matrix &src = Ms[f].opmap(op, local.data());
        int tr = Ms[f].groups[comp(target, f)].rank();
        int col_src = 0, col0 = 0;
        for (int i = 0; i < k; ++i) {
          int before = 0;
          for (int g = 0; g < f; ++g) before += Ms[g].groups[comp(args[i], g)].rank();
          int width = Ms[f].groups[local[i]].rank();
          for (int r = 0; r < tr; ++r)
            for (int c = 0; c < width; ++c) Mx[row0 + r][col0 + before + c] = src[r][col_src + c];
          col_src += width;
          col0 += P.groups[args[i]].rank();
        }
        row0 += tr;
      }
      P.opmaps[op][idx] = Mx;
    }
  }
  return P;
}

void validate_abhom(const AbHom &g, const AbOveralgebra &M, const AbOveralgebra &N) {
  auto where = "module map " + g.name;
  if (M.base.size != N.base.size || M.base.tables != N.base.tables)
    throw Error(ErrorKind::SignatureMismatch, where + ": overalgebras over different bases");
  const auto &A = M.base;
  if (static_cast<int>(g.maps.size()) != A.size) throw Error(ErrorKind::Shape, where + ": one matrix per element required");
  for (int a = 0; a < A.size; ++a)
    if (!is_hom_matrix(g.maps[a], M.groups[a], N.groups[a]))
      throw Error(ErrorKind::Shape, where + ": matrix at " + std::to_string(a) + " is not a fiber homomorphism");
  std::vector<int> args(std::max(1, A.sig.max_arity()));
  for (int op = 0; op < A.sig.size(); ++op) {
    int k = A.sig.arity(op);
    std::size_t count = ipow(A.size, k);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, A.size, k, args.data());
      int target = A.tables[op][idx];
      const auto &T = N.groups[target];
      int width = 0;
      for (int i = 0; i < k; ++i) width += M.groups[args[i]].rank();
      Matrix left = matrix_product(g.maps[target], M.opmaps[op][idx], T, width);
      // block diagonal of the argument maps
      int rows = 0, cols = 0;
      for (int i = 0; i < k; ++i) {
        rows += N.groups[args[i]].rank();
        cols += M.groups[args[i]].rank();
      }
      Matrix D = zero_matrix(rows, cols);
      int r0 = 0, c0 = 0;
      for (int i = 0; i < k; ++i) {
        const auto &G = g.maps[args[i]];
        for (int r = 0; r < N.groups[args[i]].rank(); ++r)
          for (int c = 0; c < M.groups[args[i]].rank(); ++c) D[r0 + r][c0 + c] = G[r][c];
        r0 += N.groups[args[i]].rank();
        c0 += M.groups[args[i]].rank();
      }
      Matrix right = matrix_product(N.opmaps[op][idx], D, T, cols);
      if (reduce_matrix(left, T) != reduce_matrix(right, T))
        throw Error(ErrorKind::NotHomomorphism, where + ": does not commute with " + A.sig.name(op));
    }
  }
}

auto apply_abhom(const AbHom &g, int a, const Vec &m, const AbOveralgebra &N) -> Vec {
  return apply_matrix(g.maps[a], m, N.groups[a]);
}

auto addition_map(const AbOveralgebra &M) -> AbHom {
  AbHom h;
  h.name = "add_" + M.name;
  h.cod = M.name;
  for (const auto &g : M.groups) {
    int r = g.rank();
    Matrix X = zero_matrix(r, 2 * r);
    for (int i = 0; i < r; ++i) X[i][i] = X[i][r + i] = 1;
    h.maps.push_back(X);
  }
  return h;
}

} // namespace abelext
