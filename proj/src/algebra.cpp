#include "abelext/algebra.hpp"

#include "abelext/error.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace abelext {

auto ipow(int base, int exponent) -> std::size_t {
  std::size_t r = 1;
  for (int i = 0; i < exponent; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

void decode_tuple(std::size_t index, int base, int k, int *out) {
  for (int i = k - 1; i >= 0; --i) {
    out[i] = static_cast<int>(index % static_cast<std::size_t>(base));
    index /= static_cast<std::size_t>(base);
  }
}

auto encode_tuple(const int *digits, int base, int k) -> std::size_t {
  std::size_t r = 0;
  for (int i = 0; i < k; ++i) r = r * static_cast<std::size_t>(base) + static_cast<std::size_t>(digits[i]);
  return r;
}

void validate_algebra(const FiniteAlgebra &A) {
  if (A.size < 0) throw Error(ErrorKind::Invariant, "algebra " + A.name + ": negative size");
  if (static_cast<int>(A.tables.size()) != A.sig.size())
    throw Error(ErrorKind::Shape, "algebra " + A.name + ": one table per symbol required");
  if (A.size == 0 && A.sig.has_nullary())
    throw Error(ErrorKind::Invariant, "algebra " + A.name + ": empty carrier with a nullary symbol");
  for (int op = 0; op < A.sig.size(); ++op) {
    const auto &t = A.tables[op];
    if (t.size() != ipow(A.size, A.sig.arity(op)))
      throw Error(ErrorKind::Shape, "algebra " + A.name + ": table for " + A.sig.name(op) + " has wrong shape");
    for (int v : t)
      if (v < 0 || v >= A.size)
        throw Error(ErrorKind::Invariant, "algebra " + A.name + ": entry out of carrier in " + A.sig.name(op));
  }
}

static auto eval_rec(const Term &t, const FiniteAlgebra &A, const std::vector<int> &args) -> int {
  if (t.is_var()) {
    if (t.var >= static_cast<int>(args.size())) throw Error(ErrorKind::Invariant, "variable beyond argument tuple");
    int v = args[t.var];
    if (v < 0 || v >= A.size) throw Error(ErrorKind::Invariant, "argument out of carrier");
    return v;
  }
  int buf[16];
  int k = static_cast<int>(t.args.size());
  for (int i = 0; i < k; ++i) buf[i] = eval_rec(t.args[i], A, args);
  return A.apply(t.op, buf);
}

auto eval_term(const Term &t, const FiniteAlgebra &A, const std::vector<int> &args) -> int {
  return eval_rec(t, A, args);
}

auto check_identities(const FiniteAlgebra &A, const std::vector<Identity> &ids) -> IdentityReport {
  if (A.size == 0 && A.sig.has_nullary())
    throw Error(ErrorKind::Invariant, "empty algebra over a signature with a nullary symbol");
  IdentityReport rep;
  for (int i = 0; i < static_cast<int>(ids.size()); ++i) {
    const auto &id = ids[i];
    std::size_t count = ipow(A.size, id.nvars);
    std::vector<int> args(id.nvars);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, A.size, id.nvars, args.data());
      if (eval_term(id.lhs, A, args) != eval_term(id.rhs, A, args)) {
        rep.holds = false;
        rep.identity = i;
        rep.witness = args;
        return rep;
      }
    }
  }
  return rep;
}

auto check_identities(const FiniteAlgebra &A, const VarietyPresentation &V) -> IdentityReport {
  if (!(A.sig == V.signature))
    throw Error(ErrorKind::SignatureMismatch, "algebra " + A.name + " is not over the signature of " + V.name);
  return check_identities(A, V.identities);
}

auto is_homomorphism(const std::vector<int> &map, const FiniteAlgebra &A, const FiniteAlgebra &B) -> bool {
  if (!(A.sig == B.sig)) return false;
  if (static_cast<int>(map.size()) != A.size) return false;
  for (int v : map)
    if (v < 0 || v >= B.size) return false;
  std::vector<int> a(A.sig.max_arity()), b(A.sig.max_arity());
  for (int op = 0; op < A.sig.size(); ++op) {
    int k = A.sig.arity(op);
    std::size_t count = ipow(A.size, k);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, A.size, k, a.data());
      for (int i = 0; i < k; ++i) b[i] = map[a[i]];
      if (map[A.tables[op][idx]] != B.apply(op, b.data())) return false;
    }
  }
  return true;
}

auto kernel(const std::vector<int> &map, const FiniteAlgebra &A, const FiniteAlgebra &B) -> Congruence {
  if (!is_homomorphism(map, A, B)) throw Error(ErrorKind::NotHomomorphism, "kernel of a map that is not a homomorphism");
  return Congruence::from_labels(map);
}

auto is_onto(const std::vector<int> &map, const FiniteAlgebra &B) -> bool {
  std::vector<char> hit(B.size, 0);
  for (int v : map)
    if (v >= 0 && v < B.size) hit[v] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

auto compose_maps(const std::vector<int> &g, const std::vector<int> &f) -> std::vector<int> {
  std::vector<int> out(f.size());
  for (size_t i = 0; i < f.size(); ++i) out[i] = g.at(f[i]);
  return out;
}

auto quotient(const FiniteAlgebra &A, const Congruence &theta) -> QuotientResult {
  if (!is_congruence(A, theta)) throw Error(ErrorKind::NotCongruence, "quotient by a non-congruence");
  std::vector<int> reps;
  for (int x = 0; x < A.size; ++x)
    if (theta.block[x] == x) reps.push_back(x);
  std::vector<int> pos(A.size, -1);
  for (int i = 0; i < static_cast<int>(reps.size()); ++i) pos[reps[i]] = i;
  QuotientResult r;
  r.nat.resize(A.size);
  for (int x = 0; x < A.size; ++x) r.nat[x] = pos[theta.block[x]];
  FiniteAlgebra &Q = r.algebra;
  Q.name = A.name + "_quo";
  Q.variety = A.variety;
  Q.sig = A.sig;
  Q.size = static_cast<int>(reps.size());
  Q.tables.resize(A.sig.size());
  std::vector<int> a(A.sig.max_arity()), b(A.sig.max_arity());
  for (int op = 0; op < A.sig.size(); ++op) {
    int k = A.sig.arity(op);
    std::size_t count = ipow(Q.size, k);
    Q.tables[op].resize(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, Q.size, k, b.data());
      for (int i = 0; i < k; ++i) a[i] = reps[b[i]];
      Q.tables[op][idx] = r.nat[A.apply(op, a.data())];
    }
  }
  return r;
}

auto product(const std::vector<FiniteAlgebra> &factors, const Signature &sig) -> ProductResult {
  ProductResult r;
  int n = static_cast<int>(factors.size());
  std::vector<int> sizes;
  int total = 1;
  for (const auto &F : factors) {
    if (!(F.sig == sig)) throw Error(ErrorKind::SignatureMismatch, "product of algebras over different signatures");
    sizes.push_back(F.size);
    total *= F.size;
  }
  // element x <-> digits, first factor most significant
  auto digits = [&](int x, int *out) {
    for (int i = n - 1; i >= 0; --i) {
      out[i] = x % sizes[i];
      x /= sizes[i];
    }
  };
  auto encode = [&](const int *d) {
    int x = 0;
    for (int i = 0; i < n; ++i) x = x * sizes[i] + d[i];
    return x;
  };
  FiniteAlgebra &P = r.algebra;
  P.sig = sig;
  P.size = total;
  for (int i = 0; i < n; ++i) P.name += (i ? "x" : "") + factors[i].name;
  if (!factors.empty()) P.variety = factors[0].variety;
  P.tables.resize(sig.size());
  int ma = std::max(1, sig.max_arity());
  std::vector<int> args(ma), comp(static_cast<size_t>(ma) * std::max(n, 1)), fa(ma), res(std::max(n, 1));
  for (int op = 0; op < sig.size(); ++op) {
    int k = sig.arity(op);
    std::size_t count = ipow(total, k);
    P.tables[op].resize(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, total, k, args.data());
      for (int i = 0; i < k; ++i) digits(args[i], &comp[static_cast<size_t>(i) * std::max(n, 1)]);
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < k; ++i) fa[i] = comp[static_cast<size_t>(i) * std::max(n, 1) + j];
        res[j] = factors[j].apply(op, fa.data());
      }
      P.tables[op][idx] = encode(res.data());
    }
  }
  r.projections.assign(n, std::vector<int>(total));
  std::vector<int> d(std::max(n, 1));
  for (int x = 0; x < total; ++x) {
    digits(x, d.data());
    for (int j = 0; j < n; ++j) r.projections[j][x] = d[j];
  }
  return r;
}

auto product(const FiniteAlgebra &A, const FiniteAlgebra &B) -> ProductResult {
  return product(std::vector<FiniteAlgebra>{A, B}, A.sig);
}

auto diagonal_map(int size, int copies) -> std::vector<int> {
  std::vector<int> out(size);
  for (int a = 0; a < size; ++a) {
    int x = 0;
    for (int j = 0; j < copies; ++j) x = x * size + a;
    out[a] = x;
  }
  return out;
}

namespace {

// Size of the subalgebra generated by x together with the constants; used to prune the search.
auto fingerprint(const FiniteAlgebra &A, int x) -> std::vector<int> {
  std::vector<char> in(A.size, 0);
  std::vector<int> elems;
  auto add = [&](int y) {
    if (!in[y]) {
      in[y] = 1;
      elems.push_back(y);
    }
  };
  add(x);
  for (int op = 0; op < A.sig.size(); ++op)
    if (A.sig.arity(op) == 0) add(A.tables[op][0]);
  bool grew = true;
  std::vector<int> args(A.sig.max_arity());
  while (grew) {
    grew = false;
    std::vector<int> snapshot = elems;
    for (int op = 0; op < A.sig.size(); ++op) {
      int k = A.sig.arity(op);
      if (k == 0) continue;
      std::size_t count = ipow(static_cast<int>(snapshot.size()), k);
      std::vector<int> d(k);
      for (std::size_t idx = 0; idx < count; ++idx) {
        decode_tuple(idx, static_cast<int>(snapshot.size()), k, d.data());
        for (int i = 0; i < k; ++i) args[i] = snapshot[d[i]];
        int y = A.apply(op, args.data());
        if (!in[y]) {
          add(y);
          grew = true;
        }
      }
    }
  }
  std::vector<int> fp{static_cast<int>(elems.size())};
  for (int op = 0; op < A.sig.size(); ++op) {
    if (A.sig.arity(op) == 1) fp.push_back(A.apply(op, {x}) == x);
    if (A.sig.arity(op) == 2) fp.push_back(A.apply(op, {x, x}) == x);
  }
  return fp;
}

} // namespace

auto find_isomorphism(const FiniteAlgebra &A, const FiniteAlgebra &B, int cap) -> std::optional<std::vector<int>> {
  if (!(A.sig == B.sig) || A.size != B.size) return std::nullopt;
  if (A.size > cap) throw Error(ErrorKind::CapExceeded, "isomorphism search beyond carrier cap");
  int n = A.size;
  std::vector<std::vector<int>> fa(n), fb(n);
  for (int x = 0; x < n; ++x) {
    fa[x] = fingerprint(A, x);
    fb[x] = fingerprint(B, x);
  }
  std::vector<int> map(n, -1);
  std::vector<char> used(n, 0);
  std::vector<int> args(A.sig.max_arity()), img(A.sig.max_arity());
  // check every table entry whose arguments are all within the first `upto` elements and involve `upto-1`
  auto consistent = [&](int upto) {
    for (int op = 0; op < A.sig.size(); ++op) {
      int k = A.sig.arity(op);
      std::size_t count = ipow(upto, k);
      for (std::size_t idx = 0; idx < count; ++idx) {
        decode_tuple(idx, upto, k, args.data());
        bool touches = k == 0 ? upto == 1 : false;
        for (int i = 0; i < k; ++i) touches = touches || args[i] == upto - 1;
        if (!touches) continue;
        int out = A.apply(op, args.data());
        for (int i = 0; i < k; ++i) img[i] = map[args[i]];
        int want = B.apply(op, img.data());
        if (map[out] >= 0 && map[out] != want) return false;
        if (map[out] < 0 && used[want]) return false;
      }
    }
    return true;
  };
  std::function<bool(int)> rec = [&](int x) -> bool {
    if (x == n) return is_homomorphism(map, A, B);
    for (int y = 0; y < n; ++y) {
      if (used[y] || fa[x] != fb[y]) continue;
      map[x] = y;
      used[y] = 1;
      if (consistent(x + 1) && rec(x + 1)) return true;
      map[x] = -1;
      used[y] = 0;
    }
    return false;
  };
  if (rec(0)) return map;
  return std::nullopt;
}

} // namespace abelext
