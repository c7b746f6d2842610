#include "abelext/extension.hpp"

#include "abelext/error.hpp"

#include <algorithm>
#include <functional>

namespace abelext {

ChiInverse::ChiInverse(const Extension &X) : X_(&X) {
  const int n = X.E.size;
  fibers_.assign(X.A().size, {});
  fiber_pos_.assign(n, -1);
  for (int e = 0; e < n; ++e) {
    fiber_pos_[e] = static_cast<int>(fibers_[X.pi[e]].size());
    fibers_[X.pi[e]].push_back(e);
  }
  inv_.assign(n, {});
  for (int e = 0; e < n; ++e) {
    const auto &row = X.chi[e];
    inv_[e].assign(fibers_[X.pi[e]].size(), -1);
    for (std::size_t m = 0; m < row.size(); ++m) inv_[e][fiber_pos_[row[m]]] = static_cast<i64>(m);
  }
}

auto ChiInverse::operator()(int e, int e2) const -> Vec {
  if (X_->pi[e] != X_->pi[e2]) throw Error(ErrorKind::Internal, "chi inverse across fibers");
  return X_->M.groups[X_->pi[e]].decode(inv_[e][fiber_pos_[e2]]);
}

void check_extension_structure(const Extension &X) {
  auto where = "extension " + X.name;
  validate_algebra(X.E);
  validate_abov(X.M);
  const auto &A = X.A();
  if (!(X.E.sig == A.sig)) throw Error(ErrorKind::SignatureMismatch, where + ": E and A have different signatures");
  if (static_cast<int>(X.pi.size()) != X.E.size) throw Error(ErrorKind::Shape, where + ": pi must list one image per element");
  for (int v : X.pi)
    if (v < 0 || v >= A.size) throw Error(ErrorKind::Invariant, where + ": pi leaves the base");
  if (!is_homomorphism(X.pi, X.E, A)) throw Error(ErrorKind::NotHomomorphism, where + ": pi is not a homomorphism");
  if (!is_onto(X.pi, A)) throw Error(ErrorKind::Invariant, where + ": pi is not onto");
  if (static_cast<int>(X.chi.size()) != X.E.size) throw Error(ErrorKind::Shape, where + ": chi needs one row per element");
  std::vector<int> fiber_size(A.size, 0);
  for (int v : X.pi) ++fiber_size[v];
  for (int e = 0; e < X.E.size; ++e) {
    int a = X.pi[e];
    i64 n = X.M.groups[a].size();
    if (static_cast<i64>(X.chi[e].size()) != n || fiber_size[a] != n)
      throw Error(ErrorKind::Shape, where + ": chi at " + std::to_string(e) + " does not match the fiber size");
    std::vector<char> hit(X.E.size, 0);
    for (int y : X.chi[e]) {
      if (y < 0 || y >= X.E.size || X.pi[y] != a || hit[y])
        throw Error(ErrorKind::Invariant, where + ": chi at " + std::to_string(e) + " is not a bijection onto the fiber");
      hit[y] = 1;
    }
    if (X.chi[e][0] != e) throw Error(ErrorKind::Invariant, where + ": basepoint law fails at " + std::to_string(e));
  }
}

auto chi_additivity_failure(const Extension &X) -> std::string {
  ChiInverse inv(X);
  std::vector<std::vector<int>> fib(X.A().size);
  for (int e = 0; e < X.E.size; ++e) fib[X.pi[e]].push_back(e);
  for (const auto &F : fib) {
    if (F.empty()) continue;
    const auto &G = X.M.groups[X.pi[F[0]]];
    for (int e : F)
      for (int e1 : F) {
        Vec x = inv(e, e1);
        for (int e2 : F)
          if (G.add(x, inv(e1, e2)) != inv(e, e2))
            return "(" + std::to_string(e) + "," + std::to_string(e1) + "," + std::to_string(e2) + ")";
      }
  }
  return {};
}

namespace {

auto tuple_string(const std::vector<int> &v) -> std::string {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

// Calls fn(decoded element list) for every tuple of the product of the given groups.
void for_each_tuple(const std::vector<const FinAbGroup *> &groups, const std::function<void(const std::vector<Vec> &)> &fn) {
  std::vector<i64> sizes;
  i64 total = 1;
  for (auto *g : groups) {
    sizes.push_back(g->size());
    total *= sizes.back();
  }
  std::vector<Vec> elems(groups.size());
  for (i64 c = 0; c < total; ++c) {
    i64 rest = c;
    for (int i = static_cast<int>(groups.size()) - 1; i >= 0; --i) {
      elems[i] = groups[i]->decode(rest % sizes[i]);
      rest /= sizes[i];
    }
    fn(elems);
  }
}

} // namespace

auto validate_extension(const Extension &X, const VarietyPresentation &V) -> ExtensionReport {
  ExtensionReport rep;
  try {
    check_extension_structure(X);
  } catch (const Error &err) {
    rep.valid = false;
    rep.clause = "structure";
    rep.witness = err.what();
    return rep;
  }
  auto ids = check_identities(X.E, V);
  if (!ids.holds) {
    rep.valid = false;
    rep.clause = "E in V";
    rep.witness = "identity " + std::to_string(ids.identity) + " at " + tuple_string(ids.witness);
    return rep;
  }
  const auto &A = X.A();
  const auto &M = X.M;
  std::vector<int> ebar(std::max(1, A.sig.max_arity())), abar(ebar.size()), img(ebar.size());
  for (int op = 0; op < A.sig.size() && rep.valid; ++op) {
    int k = A.sig.arity(op);
    std::size_t count = ipow(X.E.size, k);
    for (std::size_t idx = 0; idx < count && rep.valid; ++idx) {
      decode_tuple(idx, X.E.size, k, ebar.data());
      std::vector<const FinAbGroup *> gs;
      for (int i = 0; i < k; ++i) {
        abar[i] = X.pi[ebar[i]];
        gs.push_back(&M.groups[abar[i]]);
      }
      int ve = X.E.tables[op][idx];
      int target = A.apply(op, abar.data());
      for_each_tuple(gs, [&](const std::vector<Vec> &m) {
        if (!rep.valid) return;
        int lhs = X.chi[ve][M.groups[target].encode(M.apply_op(op, abar.data(), m))];
        for (int i = 0; i < k; ++i) img[i] = X.chi[ebar[i]][M.groups[abar[i]].encode(m[i])];
        if (lhs != X.E.apply(op, img.data())) {
          rep.valid = false;
          rep.clause = "operation law";
          std::vector<int> codes;
          for (int i = 0; i < k; ++i) codes.push_back(static_cast<int>(M.groups[abar[i]].encode(m[i])));
          rep.witness = A.sig.name(op) + " at e=" + tuple_string(std::vector<int>(ebar.begin(), ebar.begin() + k)) +
                        " m=" + tuple_string(codes);
        }
      });
    }
  }
  if (!rep.valid) return rep;
  auto w = chi_additivity_failure(X);
  if (!w.empty()) {
    rep.valid = false;
    rep.clause = "chi additivity";
    rep.witness = w;
  }
  return rep;
}

auto canonical_section(const Extension &X) -> Section {
  Section s(X.A().size, -1);
  for (int e = X.E.size - 1; e >= 0; --e) s[X.pi[e]] = e;
  return s;
}

auto is_section(const Extension &X, const Section &s) -> bool {
  if (static_cast<int>(s.size()) != X.A().size) return false;
  for (int a = 0; a < X.A().size; ++a)
    if (s[a] < 0 || s[a] >= X.E.size || X.pi[s[a]] != a) return false;
  return true;
}

auto all_sections(const Extension &X) -> std::vector<Section> {
  std::vector<std::vector<int>> fib(X.A().size);
  for (int e = 0; e < X.E.size; ++e) fib[X.pi[e]].push_back(e);
  double total = 1;
  for (const auto &F : fib) total *= static_cast<double>(F.size());
  if (total > 1 << 20) throw Error(ErrorKind::CapExceeded, "too many sections to enumerate");
  std::vector<Section> out;
  Section cur(X.A().size);
  std::function<void(int)> rec = [&](int a) {
    if (a == X.A().size) {
      out.push_back(cur);
      return;
    }
    for (int e : fib[a]) {
      cur[a] = e;
      rec(a + 1);
    }
  };
  rec(0);
  return out;
}

auto delta_sections(const Extension &X, const Section &s, const Section &t) -> Cochain0 {
  if (!is_section(X, s) || !is_section(X, t)) throw Error(ErrorKind::Invariant, "not a section");
  ChiInverse inv(X);
  Cochain0 d;
  for (int a = 0; a < X.A().size; ++a) d.push_back(inv(s[a], t[a]));
  return d;
}

auto factor_set(const Extension &X, const Section &s) -> Cochain1 {
  if (!is_section(X, s)) throw Error(ErrorKind::Invariant, "not a section");
  ChiInverse inv(X);
  const auto &A = X.A();
  Cochain1 f(A.sig.size());
  std::vector<int> args(std::max(1, A.sig.max_arity())), lifted(args.size());
  for (int op = 0; op < A.sig.size(); ++op) {
    int k = A.sig.arity(op);
    std::size_t count = ipow(A.size, k);
    f[op].resize(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, A.size, k, args.data());
      for (int i = 0; i < k; ++i) lifted[i] = s[args[i]];
      f[op][idx] = inv(s[A.tables[op][idx]], X.E.apply(op, lifted.data()));
    }
  }
  return f;
}

auto zero_cochain0(const AbOveralgebra &M) -> Cochain0 {
  Cochain0 d;
  for (const auto &g : M.groups) d.push_back(g.zero());
  return d;
}

auto zero_cochain1(const AbOveralgebra &M) -> Cochain1 {
  const auto &A = M.base;
  Cochain1 f(A.sig.size());
  for (int op = 0; op < A.sig.size(); ++op)
    for (int t : A.tables[op]) f[op].push_back(M.groups[t].zero());
  return f;
}

namespace {

template <class F>
auto cellwise(const Cochain1 &f, const AbOveralgebra &M, F fn) -> Cochain1 {
  Cochain1 out = f;
  for (std::size_t op = 0; op < f.size(); ++op)
    for (std::size_t idx = 0; idx < f[op].size(); ++idx) out[op][idx] = fn(M.groups[M.base.tables[op][idx]], op, idx);
  return out;
}

} // namespace

auto add_cochains(const Cochain1 &f, const Cochain1 &g, const AbOveralgebra &M) -> Cochain1 {
  return cellwise(f, M, [&](const FinAbGroup &G, std::size_t op, std::size_t i) { return G.add(f[op][i], g[op][i]); });
}

auto sub_cochains(const Cochain1 &f, const Cochain1 &g, const AbOveralgebra &M) -> Cochain1 {
  return cellwise(f, M, [&](const FinAbGroup &G, std::size_t op, std::size_t i) { return G.sub(f[op][i], g[op][i]); });
}

auto neg_cochain(const Cochain1 &f, const AbOveralgebra &M) -> Cochain1 {
  return cellwise(f, M, [&](const FinAbGroup &G, std::size_t op, std::size_t i) { return G.neg(f[op][i]); });
}

auto scale_cochain(i64 c, const Cochain1 &f, const AbOveralgebra &M) -> Cochain1 {
  return cellwise(f, M, [&](const FinAbGroup &G, std::size_t op, std::size_t i) {
    Vec v = f[op][i];
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = mulmod(c, v[j], G.moduli[j]);
    return v;
  });
}

auto is_zero_cochain(const Cochain1 &f) -> bool {
  for (const auto &row : f)
    for (const auto &v : row)
      for (i64 x : v)
        if (x != 0) return false;
  return true;
}

auto well_typed(const Cochain1 &f, const AbOveralgebra &M) -> bool {
  const auto &A = M.base;
  if (static_cast<int>(f.size()) != A.sig.size()) return false;
  for (int op = 0; op < A.sig.size(); ++op) {
    if (f[op].size() != A.tables[op].size()) return false;
    for (std::size_t idx = 0; idx < f[op].size(); ++idx)
      if (!M.groups[A.tables[op][idx]].contains(f[op][idx])) return false;
  }
  return true;
}

auto coboundary0(const Cochain0 &delta, const AbOveralgebra &M) -> Cochain1 {
  const auto &A = M.base;
  Cochain1 f(A.sig.size());
  std::vector<int> args(std::max(1, A.sig.max_arity()));
  for (int op = 0; op < A.sig.size(); ++op) {
    int k = A.sig.arity(op);
    std::size_t count = ipow(A.size, k);
    f[op].resize(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, A.size, k, args.data());
      std::vector<Vec> d;
      for (int i = 0; i < k; ++i) d.push_back(delta[args[i]]);
      int t = A.tables[op][idx];
      f[op][idx] = M.groups[t].sub(M.apply_op(op, args.data(), d), delta[t]);
    }
  }
  return f;
}

namespace {

// returns the base element t(a) and fills `value`
auto factor_rec(const Cochain1 &f, const AbOveralgebra &M, const Term &t, const std::vector<int> &a, Vec &value) -> int {
  if (t.is_var()) {
    int b = a.at(t.var);
    value = M.groups[b].zero();
    return b;
  }
  int k = static_cast<int>(t.args.size());
  std::vector<int> bases(k);
  std::vector<Vec> vals(k);
  for (int i = 0; i < k; ++i) bases[i] = factor_rec(f, M, t.args[i], a, vals[i]);
  int target = M.base.apply(t.op, bases.data());
  const auto &G = M.groups[target];
  value = G.add(M.apply_op(t.op, bases.data(), vals), f[t.op][encode_tuple(bases.data(), M.base.size, k)]);
  return target;
}

auto linear_rec(const AbOveralgebra &M, const Term &t, const std::vector<int> &a, const std::vector<Vec> &m, Vec &value) -> int {
  if (t.is_var()) {
    value = m.at(t.var);
    return a.at(t.var);
  }
  int k = static_cast<int>(t.args.size());
  std::vector<int> bases(k);
  std::vector<Vec> vals(k);
  for (int i = 0; i < k; ++i) bases[i] = linear_rec(M, t.args[i], a, m, vals[i]);
  value = M.apply_op(t.op, bases.data(), vals);
  return M.base.apply(t.op, bases.data());
}

} // namespace

auto factor_on_term(const Cochain1 &f, const AbOveralgebra &M, const Term &t, const std::vector<int> &a) -> Vec {
  Vec v;
  factor_rec(f, M, t, a, v);
  return v;
}

auto linear_on_term(const AbOveralgebra &M, const Term &t, const std::vector<int> &a, const std::vector<Vec> &m) -> Vec {
  Vec v;
  linear_rec(M, t, a, m, v);
  return v;
}

auto build_from_factor_set(const Cochain1 &f, const AbOveralgebra &M, const std::string &name) -> Extension {
  if (!well_typed(f, M)) throw Error(ErrorKind::NotFactorSet, "cochain values do not lie in their fibers");
  TotalAlgebra T = total_algebra(M);
  const auto &A = M.base;
  Extension X;
  X.name = name;
  X.M = M;
  X.E = T.algebra;
  X.E.name = name;
  X.E.variety = M.variety;
  std::vector<int> args(std::max(1, A.sig.max_arity())), bases(args.size());
  for (int op = 0; op < A.sig.size(); ++op) {
    int k = A.sig.arity(op);
    auto &tab = X.E.tables[op];
    for (std::size_t idx = 0; idx < tab.size(); ++idx) {
      decode_tuple(idx, X.E.size, k, args.data());
      for (int i = 0; i < k; ++i) bases[i] = T.base_of[args[i]];
      int y = tab[idx];
      int t = T.base_of[y];
      const auto &G = M.groups[t];
      Vec m = G.add(G.decode(T.local_of[y]), f[op][encode_tuple(bases.data(), A.size, k)]);
      tab[idx] = T.index(t, static_cast<int>(G.encode(m)));
    }
  }
  X.pi = T.pi;
  X.chi.resize(X.E.size);
  for (int e = 0; e < X.E.size; ++e) {
    int a = T.base_of[e];
    const auto &G = M.groups[a];
    Vec m = G.decode(T.local_of[e]);
    i64 n = G.size();
    X.chi[e].resize(n);
    for (i64 c = 0; c < n; ++c) X.chi[e][c] = T.index(a, static_cast<int>(G.encode(G.add(G.decode(c), m))));
  }
  return X;
}

auto zero_section(const Extension &X) -> Section {
  // built extensions list each fiber starting at <a,0>
  Section s(X.A().size, -1);
  for (int e = X.E.size - 1; e >= 0; --e) s[X.pi[e]] = e;
  return s;
}

auto is_factor_set(const Cochain1 &f, const AbOveralgebra &M, const VarietyPresentation &V) -> FactorSetReport {
  FactorSetReport rep;
  if (!well_typed(f, M)) {
    rep.holds = rep.linear_holds = false;
    return rep;
  }
  Extension X = build_from_factor_set(f, M);
  auto ids = check_identities(X.E, V);
  rep.holds = ids.holds;
  const auto &A = M.base;
  for (int i = 0; i < static_cast<int>(V.identities.size()) && rep.linear_holds; ++i) {
    const auto &id = V.identities[i];
    std::size_t count = ipow(A.size, id.nvars);
    std::vector<int> a(id.nvars);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, A.size, id.nvars, a.data());
      if (factor_on_term(f, M, id.lhs, a) != factor_on_term(f, M, id.rhs, a)) {
        rep.linear_holds = false;
        rep.identity = i;
        rep.witness = a;
        break;
      }
    }
  }
  if (rep.holds != rep.linear_holds)
    throw Error(ErrorKind::Internal, "factor-set tests disagree; is the coefficient overalgebra totally in the variety?");
  if (!rep.holds && rep.identity < 0) {
    rep.identity = ids.identity;
    rep.witness = ids.witness;
  }
  return rep;
}

auto is_equivalence(const Extension &X1, const Extension &X2, const std::vector<int> &gamma) -> bool {
  if (static_cast<int>(gamma.size()) != X1.E.size || X1.E.size != X2.E.size) return false;
  for (int v : gamma)
    if (v < 0 || v >= X2.E.size) return false;
  if (!is_homomorphism(gamma, X1.E, X2.E)) return false;
  for (int e = 0; e < X1.E.size; ++e) {
    if (X2.pi[gamma[e]] != X1.pi[e]) return false;
    for (std::size_t m = 0; m < X1.chi[e].size(); ++m)
      if (gamma[X1.chi[e][m]] != X2.chi[gamma[e]][m]) return false;
  }
  return true;
}

CellLayout::CellLayout(const AbOveralgebra &M) {
  const auto &A = M.base;
  offset.resize(A.sig.size());
  int pos = 0;
  for (int op = 0; op < A.sig.size(); ++op)
    for (int t : A.tables[op]) {
      offset[op].push_back(pos);
      const auto &g = M.groups[t];
      moduli.insert(moduli.end(), g.moduli.begin(), g.moduli.end());
      pos += g.rank();
    }
}

auto CellLayout::flatten(const Cochain1 &f) const -> Vec {
  Vec x;
  x.reserve(moduli.size());
  for (const auto &row : f)
    for (const auto &v : row) x.insert(x.end(), v.begin(), v.end());
  return x;
}

auto CellLayout::unflatten(const Vec &x, const AbOveralgebra &M) const -> Cochain1 {
  const auto &A = M.base;
  Cochain1 f(A.sig.size());
  for (int op = 0; op < A.sig.size(); ++op)
    for (std::size_t idx = 0; idx < A.tables[op].size(); ++idx) {
      int r = M.groups[A.tables[op][idx]].rank();
      Vec v(x.begin() + offset[op][idx], x.begin() + offset[op][idx] + r);
      f[op].push_back(M.groups[A.tables[op][idx]].reduce(v));
    }
  return f;
}

auto solve_coboundary(const Cochain1 &f, const AbOveralgebra &M) -> std::optional<Cochain0> {
  const auto &A = M.base;
  std::vector<int> off;
  Vec moduli;
  for (const auto &g : M.groups) {
    off.push_back(static_cast<int>(moduli.size()));
    moduli.insert(moduli.end(), g.moduli.begin(), g.moduli.end());
  }
  std::vector<SparseRow> rows;
  Vec row_mod, rhs;
  std::vector<int> args(std::max(1, A.sig.max_arity()));
  for (int op = 0; op < A.sig.size(); ++op) {
    int k = A.sig.arity(op);
    std::size_t count = ipow(A.size, k);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(idx, A.size, k, args.data());
      int t = A.tables[op][idx];
      const Matrix &Mx = M.opmaps[op][idx];
      for (int r = 0; r < M.groups[t].rank(); ++r) {
        SparseRow row;
        int col = 0;
        for (int i = 0; i < k; ++i)
          for (int c = 0; c < M.groups[args[i]].rank(); ++c, ++col)
            if (Mx[r][col] != 0) row.emplace_back(off[args[i]] + c, Mx[r][col]);
        row.emplace_back(off[t] + r, -1);
        rows.push_back(row);
        row_mod.push_back(M.groups[t].moduli[r]);
        rhs.push_back(f[op][idx][r]);
      }
    }
  }
  auto x = solve_affine(moduli, rows, row_mod, rhs);
  if (!x) return std::nullopt;
  Cochain0 d;
  for (int a = 0; a < A.size; ++a)
    d.push_back(M.groups[a].reduce(Vec(x->begin() + off[a], x->begin() + off[a] + M.groups[a].rank())));
  if (coboundary0(d, M) != f) throw Error(ErrorKind::Internal, "coboundary solver returned a non-solution");
  return d;
}

auto are_equivalent(const Extension &X1, const Extension &X2) -> std::optional<std::vector<int>> {
  if (!same_structure(X1.M, X2.M)) throw Error(ErrorKind::Mismatch, "extensions have different coefficient data");
  const auto &M = X1.M;
  Section s = canonical_section(X1), t = canonical_section(X2);
  Cochain1 f1 = factor_set(X1, s), f2 = factor_set(X2, t);
  auto delta = solve_coboundary(sub_cochains(f1, f2, M), M);
  if (!delta) return std::nullopt;
  ChiInverse inv1(X1);
  Section hat(M.base.size);
  for (int a = 0; a < M.base.size; ++a) hat[a] = X2.chi[t[a]][M.groups[a].encode((*delta)[a])];
  std::vector<int> gamma(X1.E.size);
  for (int e = 0; e < X1.E.size; ++e) {
    int a = X1.pi[e];
    gamma[e] = X2.chi[hat[a]][M.groups[a].encode(inv1(s[a], e))];
  }
  if (!is_equivalence(X1, X2, gamma)) throw Error(ErrorKind::Internal, "constructed map is not an equivalence");
  return gamma;
}

} // namespace abelext
