#include "abelext/algebra.hpp"

#include "abelext/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>

namespace abelext {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  auto find(int x) -> int {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  // keeps the smaller root so labels stay canonical
  auto unite(int a, int b) -> bool {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[b] = a;
    return true;
  }
  auto labels() -> Congruence {
    Congruence c;
    c.block.resize(parent.size());
    for (int x = 0; x < static_cast<int>(parent.size()); ++x) c.block[x] = find(x);
    return c;
  }
};

} // namespace

auto Congruence::bottom(int n) -> Congruence {
  Congruence c;
  c.block.resize(n);
  std::iota(c.block.begin(), c.block.end(), 0);
  return c;
}

auto Congruence::top(int n) -> Congruence {
  Congruence c;
  c.block.assign(n, 0);
  return c;
}

auto Congruence::from_labels(const std::vector<int> &labels) -> Congruence {
  std::map<int, int> first;
  Congruence c;
  c.block.resize(labels.size());
  for (int x = 0; x < static_cast<int>(labels.size()); ++x) {
    auto [it, fresh] = first.emplace(labels[x], x);
    c.block[x] = it->second;
  }
  return c;
}

auto Congruence::num_blocks() const -> int {
  int n = 0;
  for (int x = 0; x < size(); ++x) n += block[x] == x;
  return n;
}

auto Congruence::blocks() const -> std::vector<std::vector<int>> {
  std::vector<std::vector<int>> out;
  std::vector<int> pos(size(), -1);
  for (int x = 0; x < size(); ++x) {
    if (block[x] == x) {
      pos[x] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[pos[block[x]]].push_back(x);
  }
  return out;
}

auto Congruence::leq(const Congruence &o) const -> bool {
  for (int x = 0; x < size(); ++x)
    if (o.block[x] != o.block[block[x]]) return false;
  return true;
}

auto Congruence::meet(const Congruence &o) const -> Congruence {
  std::vector<int> labels(size());
  for (int x = 0; x < size(); ++x) labels[x] = block[x] * size() + o.block[x];
  return from_labels(labels);
}

auto Congruence::is_bottom() const -> bool {
  for (int x = 0; x < size(); ++x)
    if (block[x] != x) return false;
  return true;
}

auto is_congruence(const FiniteAlgebra &A, const Congruence &theta) -> bool {
  if (theta.size() != A.size) return false;
  for (int x = 0; x < A.size; ++x)
    if (theta.block[x] < 0 || theta.block[x] > x || theta.block[theta.block[x]] != theta.block[x]) return false;
  std::vector<int> a(A.sig.max_arity()), b(A.sig.max_arity());
  for (int op = 0; op < A.sig.size(); ++op) {
    int k = A.sig.arity(op);
    std::size_t count = ipow(A.size, k);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, A.size, k, a.data());
      for (int i = 0; i < k; ++i) b[i] = theta.block[a[i]];
      if (!theta.related(A.tables[op][idx], A.apply(op, b.data()))) return false;
    }
  }
  return true;
}

auto cg_generate(const FiniteAlgebra &A, const std::vector<std::pair<int, int>> &pairs) -> Congruence {
  UnionFind uf(A.size);
  std::vector<std::pair<int, int>> work;
  for (auto [x, y] : pairs) {
    if (x < 0 || y < 0 || x >= A.size || y >= A.size) throw Error(ErrorKind::Invariant, "pair outside carrier");
    work.emplace_back(x, y);
  }
  std::vector<int> args(std::max(1, A.sig.max_arity()));
  // every merged edge is pushed through each basic translation
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    if (!uf.unite(x, y)) continue;
    for (int op = 0; op < A.sig.size(); ++op) {
      int k = A.sig.arity(op);
      if (k == 0) continue;
      std::size_t count = ipow(A.size, k - 1);
      std::vector<int> rest(k - 1);
      for (int pos = 0; pos < k; ++pos)
        for (std::size_t idx = 0; idx < count; ++idx) {
          decode_tuple(idx, A.size, k - 1, rest.data());
          for (int i = 0, r = 0; i < k; ++i) args[i] = i == pos ? x : rest[r++];
          int u = A.apply(op, args.data());
          args[pos] = y;
          int v = A.apply(op, args.data());
          if (uf.find(u) != uf.find(v)) work.emplace_back(u, v);
        }
    }
  }
  return uf.labels();
}

auto join(const FiniteAlgebra &A, const Congruence &a, const Congruence &b) -> Congruence {
  (void)A;
  UnionFind uf(a.size());
  for (int x = 0; x < a.size(); ++x) {
    uf.unite(x, a.block[x]);
    uf.unite(x, b.block[x]);
  }
  return uf.labels();
}

auto default_cap(int fallback) -> int {
  if (const char *env = std::getenv("ABELEXT_CAP")) {
    char *end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<int>(v);
  }
  return fallback;
}

auto CongruenceLattice::index_of(const Congruence &c) const -> int {
  auto it = std::find(elements.begin(), elements.end(), c);
  return it == elements.end() ? -1 : static_cast<int>(it - elements.begin());
}

auto all_congruences(const FiniteAlgebra &A, std::optional<int> cap) -> CongruenceLattice {
  int limit = cap ? *cap : default_cap();
  if (A.size > limit)
    throw Error(ErrorKind::CapExceeded,
                "congruence enumeration on " + std::to_string(A.size) + " elements exceeds cap " + std::to_string(limit));
  std::map<std::vector<int>, int> seen;
  std::vector<Congruence> found;
  auto add = [&](const Congruence &c) {
    if (seen.emplace(c.block, static_cast<int>(found.size())).second) found.push_back(c);
  };
  add(Congruence::bottom(A.size));
  std::vector<Congruence> principal;
  for (int x = 0; x < A.size; ++x)
    for (int y = x + 1; y < A.size; ++y) {
      Congruence c = cg_generate(A, {{x, y}});
      if (!seen.count(c.block)) principal.push_back(c);
      add(c);
    }
  // every congruence is a join of principal ones
  for (std::size_t i = 1; i < found.size(); ++i)
    for (const auto &p : principal) add(join(A, found[i], p));
  std::sort(found.begin(), found.end(), [](const Congruence &a, const Congruence &b) {
    int na = a.num_blocks(), nb = b.num_blocks();
    if (na != nb) return na > nb;
    return a.block < b.block;
  });
  CongruenceLattice L;
  L.elements = found;
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < static_cast<int>(found.size()); ++i) index[found[i].block] = i;
  int n = static_cast<int>(found.size());
  L.meet.assign(n, std::vector<int>(n));
  L.join.assign(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      L.meet[i][j] = L.meet[j][i] = index.at(found[i].meet(found[j]).block);
      L.join[i][j] = L.join[j][i] = index.at(join(A, found[i], found[j]).block);
    }
  return L;
}

auto is_modular(const CongruenceLattice &L) -> bool {
  int n = static_cast<int>(L.elements.size());
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      if (L.meet[a][c] != a) continue; // a <= c
      for (int b = 0; b < n; ++b)
        if (L.join[a][L.meet[b][c]] != L.meet[L.join[a][b]][c]) return false;
    }
  return true;
}

auto commutator(const FiniteAlgebra &A, const Congruence &theta, const Congruence &psi) -> Congruence {
  if (!is_congruence(A, theta) || !is_congruence(A, psi))
    throw Error(ErrorKind::NotCongruence, "commutator arguments must be congruences");
  int n = A.size;
  // A(psi): psi-related pairs, lexicographic
  std::vector<std::pair<int, int>> elems;
  std::vector<int> index(static_cast<std::size_t>(n) * n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (psi.related(a, b)) {
        index[static_cast<std::size_t>(a) * n + b] = static_cast<int>(elems.size());
        elems.emplace_back(a, b);
      }
  FiniteAlgebra P;
  P.sig = A.sig;
  P.size = static_cast<int>(elems.size());
  P.tables.resize(A.sig.size());
  std::vector<int> args(std::max(1, A.sig.max_arity())), l(args.size()), r(args.size());
  for (int op = 0; op < A.sig.size(); ++op) {
    int k = A.sig.arity(op);
    std::size_t count = ipow(P.size, k);
    P.tables[op].resize(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, P.size, k, args.data());
      for (int i = 0; i < k; ++i) {
        l[i] = elems[args[i]].first;
        r[i] = elems[args[i]].second;
      }
      P.tables[op][idx] = index[static_cast<std::size_t>(A.apply(op, l.data())) * n + A.apply(op, r.data())];
    }
  }
  std::vector<std::pair<int, int>> gens;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (theta.related(a, b))
        gens.emplace_back(index[static_cast<std::size_t>(a) * n + a], index[static_cast<std::size_t>(b) * n + b]);
  Congruence delta = cg_generate(P, gens);
  std::vector<std::pair<int, int>> related;
  for (int i = 0; i < P.size; ++i) {
    auto [x, y] = elems[i];
    if (x != y && delta.related(i, index[static_cast<std::size_t>(y) * n + y])) related.emplace_back(x, y);
  }
  return cg_generate(A, related);
}

auto is_abelian(const FiniteAlgebra &A, const Congruence &theta) -> bool {
  return commutator(A, theta, theta).is_bottom();
}

auto verify_difference_term(const Term &d, const std::vector<FiniteAlgebra> &algebras) -> DifferenceReport {
  DifferenceReport rep;
  if (term_span(d) > 3) throw Error(ErrorKind::Arity, "difference term must be ternary");
  for (const auto &A : algebras) {
    std::vector<int> args(3);
    for (int x = 0; x < A.size; ++x)
      for (int y = 0; y < A.size; ++y) {
        args = {x, x, y};
        if (eval_term(d, A, args) != y) {
          rep.passed = false;
          rep.algebra = A.name;
          rep.condition = 1;
          rep.witness = {x, y};
          return rep;
        }
      }
    auto L = all_congruences(A);
    for (const auto &theta : L.elements) {
      Congruence c = commutator(A, theta, theta);
      for (int x = 0; x < A.size; ++x)
        for (int y = 0; y < A.size; ++y) {
          if (!theta.related(x, y)) continue;
          args = {x, y, y};
          if (!c.related(eval_term(d, A, args), x)) {
            rep.passed = false;
            rep.algebra = A.name;
            rep.condition = 2;
            rep.congruence = theta;
            rep.witness = {x, y};
            return rep;
          }
        }
    }
  }
  return rep;
}

} // namespace abelext
