#include "abelext/linalg.hpp"

#include "abelext/error.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace abelext {

auto mod(i64 a, i64 m) -> i64 {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

auto mulmod(i64 a, i64 b, i64 m) -> i64 {
  return static_cast<i64>(((static_cast<__int128>(a) * b) % m + m) % m);
}

auto addmod(i64 a, i64 b, i64 m) -> i64 { return mod(mod(a, m) + mod(b, m), m); }

auto egcd(i64 a, i64 b) -> Egcd {
  if (a != 0 && b % a == 0) return a > 0 ? Egcd{a, 1, 0} : Egcd{-a, -1, 0};
  i64 r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    i64 q = r0 / r1;
    r0 -= q * r1;
    std::swap(r0, r1);
    s0 -= q * s1;
    std::swap(s0, s1);
    t0 -= q * t1;
    std::swap(t0, t1);
  }
  if (r0 < 0) return {-r0, -s0, -t0};
  return {r0, s0, t0};
}

auto gcd64(i64 a, i64 b) -> i64 { return std::gcd(a, b); }
auto lcm64(i64 a, i64 b) -> i64 { return a / std::gcd(a, b) * b; }

auto lcm_of(const Vec &moduli) -> i64 {
  i64 e = 1;
  for (i64 m : moduli) e = lcm64(e, m);
  return e;
}

auto to_string(const BigInt &x) -> std::string { return x.str(); }

// ---------------------------------------------------------------- Subgroup

Subgroup::Subgroup(Vec moduli) : moduli_(std::move(moduli)), where_(moduli_.size(), -1) {
  for (i64 m : moduli_)
    if (m < 1) throw Error(ErrorKind::Internal, "subgroup ambient modulus must be positive");
}

namespace {

void reduce_vec(Vec &v, const Vec &moduli) {
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = mod(v[i], moduli[i]);
}

// a*x + b*y coordinatewise
auto combine(i64 a, const Vec &x, i64 b, const Vec &y, const Vec &moduli) -> Vec {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = mod(mulmod(a, x[i], moduli[i]) + mulmod(b, y[i], moduli[i]), moduli[i]);
  return out;
}

auto scaled(i64 a, const Vec &x, const Vec &moduli) -> Vec {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = mulmod(a, x[i], moduli[i]);
  return out;
}

auto is_zero(const Vec &v) -> bool {
  return std::all_of(v.begin(), v.end(), [](i64 x) { return x == 0; });
}

} // namespace

auto Subgroup::insert(Vec v) -> bool {
  if (v.size() != moduli_.size()) throw Error(ErrorKind::Internal, "subgroup vector length mismatch");
  reduce_vec(v, moduli_);
  bool grew = false;
  std::deque<Vec> work;
  work.push_back(std::move(v));
  const int r = static_cast<int>(moduli_.size());
  while (!work.empty()) {
    Vec x = std::move(work.front());
    work.pop_front();
    for (int i = 0; i < r; ++i) {
      if (x[i] == 0) continue;
      const i64 m = moduli_[i];
      int slot = where_[i];
      if (slot < 0) {
        Egcd e = egcd(x[i], m);
        Vec p = scaled(e.s, x, moduli_);
        Vec rest = combine(1, x, -(x[i] / e.g), p, moduli_);
        Vec tail = scaled(m / e.g, p, moduli_);
        where_[i] = static_cast<int>(rows_.size());
        cols_.push_back(i);
        rows_.push_back(std::move(p));
        if (!is_zero(rest)) work.push_back(std::move(rest));
        if (!is_zero(tail)) work.push_back(std::move(tail));
        grew = true;
        break;
      }
      Vec &p = rows_[slot];
      const i64 d = p[i];
      if (x[i] % d == 0) {
        x = combine(1, x, -(x[i] / d), p, moduli_);
        continue;
      }
      Egcd e = egcd(d, x[i]);
      Vec np = combine(e.s, p, e.t, x, moduli_);
      Vec rest = combine(x[i] / e.g, p, -(d / e.g), x, moduli_);
      Vec tail = scaled(m / e.g, np, moduli_);
      p = std::move(np);
      if (!is_zero(rest)) work.push_back(std::move(rest));
      if (!is_zero(tail)) work.push_back(std::move(tail));
      grew = true;
      break;
    }
  }
  return grew;
}

auto Subgroup::express(Vec v) const -> std::optional<Vec> {
  if (v.size() != moduli_.size()) throw Error(ErrorKind::Internal, "subgroup vector length mismatch");
  reduce_vec(v, moduli_);
  Vec coeff(rows_.size(), 0);
  for (int i = 0; i < static_cast<int>(moduli_.size()); ++i) {
    if (v[i] == 0) continue;
    int slot = where_[i];
    if (slot < 0) return std::nullopt;
    const Vec &p = rows_[slot];
    if (v[i] % p[i] != 0) return std::nullopt;
    i64 c = v[i] / p[i];
    coeff[slot] += c;
    v = combine(1, v, -c, p, moduli_);
  }
  return coeff;
}

auto Subgroup::contains(Vec v) const -> bool { return express(std::move(v)).has_value(); }

auto Subgroup::reduce(Vec v) const -> Vec {
  reduce_vec(v, moduli_);
  for (int i = 0; i < static_cast<int>(moduli_.size()); ++i) {
    int slot = where_[i];
    if (slot < 0 || v[i] == 0) continue;
    const Vec &p = rows_[slot];
    v = combine(1, v, -(v[i] / p[i]), p, moduli_);
  }
  return v;
}

auto Subgroup::order() const -> BigInt {
  BigInt n = 1;
  for (std::size_t k = 0; k < rows_.size(); ++k) n *= moduli_[cols_[k]] / rows_[k][cols_[k]];
  return n;
}

auto Subgroup::subset_of(const Subgroup &other) const -> bool {
  for (const auto &p : rows_)
    if (!other.contains(p)) return false;
  return true;
}

// ---------------------------------------------------------------- KernelSolver

KernelSolver::KernelSolver(Vec moduli) : moduli_(std::move(moduli)) {
  basis_.reserve(moduli_.size());
  for (std::size_t j = 0; j < moduli_.size(); ++j) {
    if (moduli_[j] == 1) continue;
    Vec e(moduli_.size(), 0);
    e[j] = 1;
    basis_.push_back(std::move(e));
  }
}

void KernelSolver::add(SparseRow row, i64 modulus) {
  ++rows_seen_;
  if (modulus == 1) return;
  for (auto &[c, v] : row) v = mod(v, modulus);
  std::sort(row.begin(), row.end());
  // merge repeated columns
  SparseRow clean;
  for (auto [c, v] : row) {
    if (!clean.empty() && clean.back().first == c)
      clean.back().second = mod(clean.back().second + v, modulus);
    else
      clean.emplace_back(c, v);
  }
  std::erase_if(clean, [](const auto &cv) { return cv.second == 0; });
  if (clean.empty()) return;
  for (auto [c, v] : clean)
    if (mulmod(v, moduli_[c], modulus) != 0) throw Error(ErrorKind::Internal, "linear form not well defined");
  if (!seen_.emplace(modulus, clean).second) return;

  std::vector<int> live;
  Vec w(basis_.size(), 0);
  for (std::size_t b = 0; b < basis_.size(); ++b) {
    i64 s = 0;
    for (auto [c, v] : clean) s = mod(s + mulmod(v, basis_[b][c], modulus), modulus);
    w[b] = s;
    if (s != 0) live.push_back(static_cast<int>(b));
  }
  if (live.empty()) return;
  int a = live[0];
  for (std::size_t k = 1; k < live.size(); ++k) {
    int b = live[k];
    Egcd e = egcd(w[a], w[b]);
    Vec na = combine(e.s, basis_[a], e.t, basis_[b], moduli_);
    Vec nb = combine(w[b] / e.g, basis_[a], -(w[a] / e.g), basis_[b], moduli_);
    basis_[a] = std::move(na);
    basis_[b] = std::move(nb);
    w[a] = e.g;
  }
  basis_[a] = scaled(modulus / std::gcd(w[a], modulus), basis_[a], moduli_);
  std::erase_if(basis_, [](const Vec &v) { return is_zero(v); });
}

auto KernelSolver::kernel() const -> Subgroup {
  Subgroup K(moduli_);
  for (const auto &b : basis_) K.insert(b);
  return K;
}

// ---------------------------------------------------------------- elimination

namespace {

auto clean_row(SparseRow row, i64 modulus) -> SparseRow {
  std::sort(row.begin(), row.end());
  SparseRow out;
  for (auto [c, v] : row) {
    if (!out.empty() && out.back().first == c)
      out.back().second = mod(out.back().second + v, modulus);
    else
      out.emplace_back(c, mod(v, modulus));
  }
  std::erase_if(out, [](const auto &cv) { return cv.second == 0; });
  return out;
}

auto inverse_mod(i64 a, i64 m) -> std::optional<i64> {
  Egcd e = egcd(mod(a, m), m);
  if (e.g != 1) return std::nullopt;
  return mod(e.s, m);
}

} // namespace

EliminationKernel::EliminationKernel(Vec moduli) : moduli_(std::move(moduli)), expr_(moduli_.size()) {}

auto EliminationKernel::resolve(SparseRow row, i64 modulus) -> SparseRow {
  // substitute eliminated unknowns until none remain; resolved expressions are cached
  for (;;) {
    row = clean_row(std::move(row), modulus);
    bool any = false;
    SparseRow next;
    for (auto [c, v] : row) {
      if (!expr_[c]) {
        next.emplace_back(c, v);
        continue;
      }
      any = true;
      auto &e = *expr_[c];
      bool stale = false;
      for (auto [d, w] : e)
        if (expr_[d]) stale = true;
      if (stale) e = resolve(e, moduli_[c]);
      for (auto [d, w] : e) next.emplace_back(d, mulmod(v, w, modulus));
    }
    row = std::move(next);
    if (!any) return clean_row(std::move(row), modulus);
  }
}

void EliminationKernel::add(SparseRow row, i64 modulus) {
  ++rows_seen_;
  if (modulus == 1) return;
  row = clean_row(std::move(row), modulus);
  if (row.empty()) return;
  for (auto [c, v] : row)
    if (mulmod(v, moduli_[c], modulus) != 0) throw Error(ErrorKind::Internal, "linear form not well defined");
  if (!seen_.emplace(modulus, row).second) return;
  row = resolve(std::move(row), modulus);
  if (row.empty()) return;
  for (auto it = row.rbegin(); it != row.rend(); ++it) {
    auto [p, c] = *it;
    if (moduli_[p] != modulus) continue;
    auto inv = inverse_mod(c, modulus);
    if (!inv) continue;
    SparseRow e;
    for (auto [s, v] : row)
      if (s != p) e.emplace_back(s, mod(-mulmod(*inv, v, modulus), modulus));
    expr_[p] = std::move(e);
    ++eliminated_;
    return;
  }
  deferred_.emplace_back(std::move(row), modulus);
}

auto EliminationKernel::kernel(int free_cap) -> Subgroup {
  int n = static_cast<int>(moduli_.size());
  std::vector<int> compact(n, -1), free;
  for (int p = 0; p < n; ++p)
    if (!expr_[p]) {
      compact[p] = static_cast<int>(free.size());
      free.push_back(p);
    }
  if (static_cast<int>(free.size()) > free_cap)
    throw Error(ErrorKind::CapExceeded, std::to_string(free.size()) + " unknowns survive elimination");
  Vec fm;
  for (int p : free) fm.push_back(moduli_[p]);
  KernelSolver ks(fm);
  for (auto &[row, m] : deferred_) {
    SparseRow r;
    for (auto [c, v] : resolve(row, m)) r.emplace_back(compact[c], v);
    ks.add(std::move(r), m);
  }
  for (int p = 0; p < n; ++p)
    if (expr_[p]) expr_[p] = resolve(*expr_[p], moduli_[p]);
  Subgroup Kf = ks.kernel(), K(moduli_);
  for (int k = 0; k < Kf.pivot_count(); ++k) {
    const Vec &g = Kf.pivot(k);
    Vec x(n, 0);
    for (size_t j = 0; j < free.size(); ++j) x[free[j]] = g[j];
    for (int p = 0; p < n; ++p)
      if (expr_[p]) {
        i64 acc = 0;
        for (auto [d, w] : *expr_[p]) acc = mod(acc + mulmod(w, x[d], moduli_[p]), moduli_[p]);
        x[p] = acc;
      }
    K.insert(std::move(x));
  }
  return K;
}

// ---------------------------------------------------------------- Smith form

namespace {

void col_op(std::vector<Vec> &M, int t, int j, i64 s, i64 u, i64 x, i64 y, i64 E) {
  // new col_t = s*col_t + u*col_j ; new col_j = x*col_t + y*col_j
  for (auto &row : M) {
    i64 a = row[t], b = row[j];
    row[t] = mod(mulmod(s, a, E) + mulmod(u, b, E), E);
    row[j] = mod(mulmod(x, a, E) + mulmod(y, b, E), E);
  }
}

void row_op(std::vector<Vec> &M, int t, int j, i64 s, i64 u, i64 x, i64 y, i64 E) {
  Vec a = M[t], b = M[j];
  for (std::size_t c = 0; c < a.size(); ++c) {
    M[t][c] = mod(mulmod(s, a[c], E) + mulmod(u, b[c], E), E);
    M[j][c] = mod(mulmod(x, a[c], E) + mulmod(y, b[c], E), E);
  }
}

// Applies the column transform [[s,x],[u,y]] (columns t,j) to V and its inverse to Vinv.
void track(SmithResult &R, int t, int j, i64 s, i64 u, i64 x, i64 y, i64 E) {
  col_op(R.V, t, j, s, u, x, y, E);
  // inverse of [[s,x],[u,y]] with det 1 is [[y,-x],[-u,s]] acting on rows
  row_op(R.Vinv, t, j, y, -x, -u, s, E);
}

} // namespace

auto smith_mod(std::vector<Vec> rows, int cols, i64 E) -> SmithResult {
  SmithResult R;
  R.V.assign(cols, Vec(cols, 0));
  R.Vinv.assign(cols, Vec(cols, 0));
  for (int i = 0; i < cols; ++i) R.V[i][i] = R.Vinv[i][i] = 1 % E;
  for (auto &r : rows) {
    if (static_cast<int>(r.size()) != cols) throw Error(ErrorKind::Internal, "smith row length mismatch");
    for (auto &x : r) x = mod(x, E);
  }
  std::erase_if(rows, [](const Vec &r) { return is_zero(r); });
  const int nr = static_cast<int>(rows.size());
  R.diag.assign(cols, E);
  int t = 0;
  for (; t < std::min(nr, cols); ++t) {
    // pivot of least gcd with E
    int pi = -1, pj = -1;
    i64 best = E;
    for (int i = t; i < nr; ++i)
      for (int j = t; j < cols; ++j)
        if (rows[i][j] != 0) {
          i64 g = std::gcd(rows[i][j], E);
          if (g < best) {
            best = g;
            pi = i;
            pj = j;
          }
        }
    if (pi < 0) break;
    std::swap(rows[t], rows[pi]);
    if (pj != t) {
      for (auto &r : rows) std::swap(r[t], r[pj]);
      for (auto &r : R.V) std::swap(r[t], r[pj]);
      std::swap(R.Vinv[t], R.Vinv[pj]);
    }
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (int i = t + 1; i < nr; ++i) {
        if (rows[i][t] == 0) continue;
        i64 a = rows[t][t], b = rows[i][t];
        Egcd e = egcd(a, b);
        if (e.t != 0) dirty = true;
        row_op(rows, t, i, e.s, e.t, -(b / e.g), a / e.g, E);
      }
      for (int j = t + 1; j < cols; ++j) {
        if (rows[t][j] == 0) continue;
        i64 a = rows[t][t], b = rows[t][j];
        Egcd e = egcd(a, b);
        if (e.t != 0) dirty = true;
        track(R, t, j, e.s, e.t, -(b / e.g), a / e.g, E);
        col_op(rows, t, j, e.s, e.t, -(b / e.g), a / e.g, E);
      }
      for (int i = t + 1; i < nr && !dirty; ++i)
        if (rows[i][t] != 0) dirty = true;
    }
    R.diag[t] = std::gcd(rows[t][t], E);
    if (R.diag[t] == 0) R.diag[t] = E;
  }
  // divisor chain
  for (int a = 0; a < cols; ++a)
    for (int b = a + 1; b < cols; ++b) {
      i64 da = R.diag[a], db = R.diag[b];
      if (db % da == 0) continue;
      Egcd e = egcd(da, db);
      i64 l = da / e.g * db;
      // C = [[1, -t db/g],[1, s da/g]] on columns (a,b)
      track(R, a, b, 1, 1, mod(-e.t * (db / e.g), E), mod(e.s * (da / e.g), E), E);
      R.diag[a] = e.g;
      R.diag[b] = l;
    }
  return R;
}

auto canonical_factors(const Vec &moduli) -> Vec {
  if (moduli.empty()) return {};
  i64 E = lcm_of(moduli);
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    Vec r(moduli.size(), 0);
    r[i] = moduli[i];
    rows.push_back(r);
  }
  auto S = smith_mod(rows, static_cast<int>(moduli.size()), E);
  Vec out;
  for (i64 d : S.diag)
    if (d > 1) out.push_back(d);
  return out;
}

// ---------------------------------------------------------------- quotients

QuotientGroup::QuotientGroup(const Subgroup &K, const Subgroup &L) : K_(K) {
  const Vec &mods = K.moduli();
  if (!L.subset_of(K)) throw Error(ErrorKind::Internal, "quotient by a subgroup that is not contained");
  const int s = K.pivot_count();
  i64 E = lcm_of(mods);
  std::vector<Vec> rel;
  for (int k = 0; k < s; ++k) {
    int c = K.pivot_coordinate(k);
    i64 mult = mods[c] / K.pivot(k)[c];
    Vec v(mods.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = mulmod(mult, K.pivot(k)[i], mods[i]);
    auto co = K.express(v);
    if (!co) throw Error(ErrorKind::Internal, "echelon relation escaped the subgroup");
    Vec row(s, 0);
    for (int j = 0; j < s; ++j) row[j] = -(*co)[j];
    row[k] += mult;
    rel.push_back(row);
  }
  for (int k = 0; k < L.pivot_count(); ++k) rel.push_back(*K.express(L.pivot(k)));
  if (s == 0) return;
  auto S = smith_mod(rel, s, E);
  for (int t = 0; t < s; ++t) {
    if (S.diag[t] <= 1) continue;
    keep_.push_back(t);
    factors_.push_back(S.diag[t]);
    Vec g(mods.size(), 0);
    for (int k = 0; k < s; ++k)
      if (S.Vinv[t][k] != 0) g = combine(1, g, S.Vinv[t][k], K.pivot(k), mods);
    gens_.push_back(g);
  }
  V_.assign(s, Vec(keep_.size(), 0));
  for (int k = 0; k < s; ++k)
    for (std::size_t q = 0; q < keep_.size(); ++q) V_[k][q] = S.V[k][keep_[q]];
}

auto QuotientGroup::classify(const Vec &x) const -> Vec {
  auto co = K_.express(x);
  if (!co) throw Error(ErrorKind::Internal, "classified element lies outside the cycle group");
  Vec out(keep_.size(), 0);
  for (std::size_t q = 0; q < keep_.size(); ++q) {
    i64 d = factors_[q];
    i64 acc = 0;
    for (std::size_t k = 0; k < co->size(); ++k) acc = mod(acc + mulmod(mod((*co)[k], d), mod(V_[k][q], d), d), d);
    out[q] = acc;
  }
  return out;
}

auto QuotientGroup::order() const -> BigInt {
  BigInt n = 1;
  for (i64 d : factors_) n *= d;
  return n;
}

auto solve_affine(const Vec &moduli, const std::vector<SparseRow> &rows, const Vec &row_moduli, const Vec &rhs)
    -> std::optional<Vec> {
  i64 E = lcm64(lcm_of(moduli), lcm_of(row_moduli));
  Vec ext{E};
  ext.insert(ext.end(), moduli.begin(), moduli.end());
  KernelSolver ks(ext);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    SparseRow r;
    r.emplace_back(0, mod(-rhs[i], row_moduli[i]));
    for (auto [c, v] : rows[i]) r.emplace_back(c + 1, v);
    ks.add(std::move(r), row_moduli[i]);
  }
  Subgroup K = ks.kernel();
  for (int k = 0; k < K.pivot_count(); ++k)
    if (K.pivot_coordinate(k) == 0) {
      const Vec &p = K.pivot(k);
      if (p[0] != 1 % E) return std::nullopt;
      return Vec(p.begin() + 1, p.end());
    }
  if (E == 1) return Vec(moduli.size(), 0);
  return std::nullopt;
}

} // namespace abelext
