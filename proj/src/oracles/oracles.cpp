#include "abelext/oracles.hpp"

#include "abelext/error.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <numeric>
#include <unordered_set>

namespace abelext::oracle {

namespace {

using Clock = std::chrono::steady_clock;

auto seconds_since(Clock::time_point t0) -> double {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// A finite abelian group Z/m_0 + ... given by its moduli, elements coded in mixed radix.
struct Cyclics {
  std::vector<long> moduli;
  long size = 1;
  explicit Cyclics(std::vector<long> m) : moduli(std::move(m)) {
    for (long x : moduli) size *= x;
  }
  auto digits(long code) const -> std::vector<long> {
    std::vector<long> d(moduli.size());
    for (size_t i = moduli.size(); i-- > 0;) {
      d[i] = code % moduli[i];
      code /= moduli[i];
    }
    return d;
  }
  auto code(const std::vector<long> &d) const -> long {
    long c = 0;
    for (size_t i = 0; i < moduli.size(); ++i) c = c * moduli[i] + ((d[i] % moduli[i]) + moduli[i]) % moduli[i];
    return c;
  }
  auto add(long x, long y) const -> long {
    auto a = digits(x), b = digits(y);
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return code(a);
  }
  auto neg(long x) const -> long {
    auto a = digits(x);
    for (auto &v : a) v = -v;
    return code(a);
  }
};

// Product of groups, one per slot; codes in mixed radix with the first slot most significant.
struct CochainSpace {
  std::vector<const Cyclics *> slot;
  long total = 1;

  auto decode(long code) const -> std::vector<long> {
    std::vector<long> v(slot.size());
    for (size_t i = slot.size(); i-- > 0;) {
      v[i] = code % slot[i]->size;
      code /= slot[i]->size;
    }
    return v;
  }
  auto encode(const std::vector<long> &v) const -> long {
    long c = 0;
    for (size_t i = 0; i < slot.size(); ++i) c = c * slot[i]->size + v[i];
    return c;
  }
  auto add(long x, long y) const -> long {
    auto a = decode(x), b = decode(y);
    for (size_t i = 0; i < a.size(); ++i) a[i] = slot[i]->add(a[i], b[i]);
    return encode(a);
  }
  auto residues(long code) const -> std::vector<long> {
    std::vector<long> out;
    auto v = decode(code);
    for (size_t i = 0; i < v.size(); ++i)
      for (long d : slot[i]->digits(v[i])) out.push_back(d);
    return out;
  }
};

// Cocycles modulo coboundaries, with the class group read off from element orders.
void quotient_report(const CochainSpace &S, std::vector<long> cycles, const std::unordered_set<long> &bounds, OracleReport &r) {
  std::sort(cycles.begin(), cycles.end());
  std::unordered_set<long> cyc(cycles.begin(), cycles.end());
  for (long b : bounds)
    if (!cyc.count(b)) throw Error(ErrorKind::Internal, "oracle: a coboundary failed the cocycle test");
  std::unordered_set<long> seen;
  std::vector<long> orders;
  for (long z : cycles) {
    if (seen.count(z)) continue;
    for (long b : bounds) seen.insert(S.add(z, b));
    r.representatives.push_back(S.residues(z));
    long k = 1, acc = z;
    while (!bounds.count(acc)) {
      acc = S.add(acc, z);
      ++k;
    }
    orders.push_back(k);
  }
  r.order = static_cast<long>(orders.size());
  if (static_cast<long>(cycles.size()) != r.order * static_cast<long>(bounds.size()))
    throw Error(ErrorKind::Internal, "oracle: cosets do not partition the cocycles");
  r.invariant_factors = factors_from_orders(orders);
}

auto tuple_code(const std::vector<int> &xs, int base) -> long {
  long c = 0;
  for (int x : xs) c = c * base + x;
  return c;
}

// Term evaluation on plain operation tables.
auto eval(const Term &t, const std::vector<std::vector<int>> &tables, const Signature &sig, int size, const std::vector<int> &env)
    -> int {
  if (t.var >= 0) return env[t.var];
  std::vector<int> args;
  for (const auto &a : t.args) args.push_back(eval(a, tables, sig, size, env));
  return tables[t.op][tuple_code(args, size)];
}

auto satisfies(const std::vector<std::vector<int>> &tables, const Signature &sig, int size, const VarietyPresentation &V) -> bool {
  for (const auto &id : V.identities) {
    int k = id.nvars;
    long count = 1;
    for (int i = 0; i < k; ++i) count *= size;
    if (size == 0 && k == 0) count = 1;
    std::vector<int> env(k);
    for (long idx = 0; idx < count; ++idx) {
      long c = idx;
      for (int i = k; i-- > 0;) {
        env[i] = static_cast<int>(c % size);
        c /= size;
      }
      if (eval(id.lhs, tables, sig, size, env) != eval(id.rhs, tables, sig, size, env)) return false;
    }
  }
  return true;
}

} // namespace

auto factors_from_orders(const std::vector<long> &orders) -> std::vector<long> {
  long N = static_cast<long>(orders.size());
  auto torsion = [&](long k) {
    long c = 0;
    for (long o : orders)
      if (k % o == 0) ++c;
    return c;
  };
  // for each prime p, exponents e_j with #(p^j torsion) = p^{sum_i min(j, e_i)}
  std::vector<std::vector<long>> prime_parts; // descending prime powers per prime
  long rest = N;
  for (long p = 2; p <= rest; ++p) {
    if (rest % p) continue;
    while (rest % p == 0) rest /= p;
    std::vector<long> logs{0};
    for (long q = p;; q *= p) {
      long t = torsion(q), l = 0;
      while (t > 1) {
        if (t % p) throw Error(ErrorKind::Internal, "oracle: torsion count is not a prime power");
        t /= p;
        ++l;
      }
      if (l == logs.back()) break;
      logs.push_back(l);
    }
    // number of cyclic factors with exponent >= j is logs[j] - logs[j-1]
    std::vector<long> ge;
    for (size_t j = 1; j < logs.size(); ++j) ge.push_back(logs[j] - logs[j - 1]);
    std::vector<long> powers;
    for (size_t j = 0; j < ge.size(); ++j) {
      long exactly = ge[j] - (j + 1 < ge.size() ? ge[j + 1] : 0);
      long pw = 1;
      for (size_t e = 0; e <= j; ++e) pw *= p;
      for (long c = 0; c < exactly; ++c) powers.push_back(pw);
    }
    std::sort(powers.rbegin(), powers.rend());
    prime_parts.push_back(powers);
  }
  size_t len = 0;
  for (const auto &pp : prime_parts) len = std::max(len, pp.size());
  std::vector<long> out(len, 1);
  // largest factor collects the largest power of every prime
  for (const auto &pp : prime_parts)
    for (size_t i = 0; i < pp.size(); ++i) out[len - 1 - i] *= pp[i];
  return out;
}

auto ext_by_enumeration(const AbOveralgebra &M, const VarietyPresentation &V, long cap) -> OracleReport {
  auto t0 = Clock::now();
  OracleReport r;
  r.method = "enumerate basic-cell assignments, check identities on each built algebra, divide by enumerated coboundaries";
  const auto &A = M.base;
  const auto &sig = A.sig;
  int n = A.size;
  std::vector<Cyclics> fib;
  for (const auto &g : M.groups) fib.emplace_back(std::vector<long>(g.moduli.begin(), g.moduli.end()));
  std::vector<int> offset(n + 1, 0);
  for (int a = 0; a < n; ++a) offset[a + 1] = offset[a] + static_cast<int>(fib[a].size);
  int total = offset[n];

  struct Cell {
    int op;
    std::vector<int> args;
    int target;
  };
  std::vector<Cell> cells;
  CochainSpace S;
  for (int op = 0; op < sig.size(); ++op) {
    int k = sig.arity(op);
    long count = 1;
    for (int i = 0; i < k; ++i) count *= n;
    for (long idx = 0; idx < count; ++idx) {
      std::vector<int> args(k);
      long c = idx;
      for (int i = k; i-- > 0;) {
        args[i] = static_cast<int>(c % n);
        c /= n;
      }
      int target = A.tables[op][idx];
      cells.push_back({op, args, target});
      S.slot.push_back(&fib[target]);
      if (S.total > cap / std::max(1L, fib[target].size)) throw Error(ErrorKind::CapExceeded, "oracle: cochain space too large");
      S.total *= fib[target].size;
    }
  }
  // linear part of each cell on each tuple of fiber elements
  auto linear = [&](const Cell &cl, const std::vector<long> &elems) -> long {
    const Matrix &mat = M.opmaps[cl.op][tuple_code(cl.args, n)];
    std::vector<long> src;
    for (size_t i = 0; i < cl.args.size(); ++i)
      for (long d : fib[cl.args[i]].digits(elems[i])) src.push_back(d);
    const auto &T = fib[cl.target];
    std::vector<long> out(T.moduli.size(), 0);
    for (size_t row = 0; row < out.size(); ++row)
      for (size_t j = 0; j < src.size(); ++j) out[row] = (out[row] + (mat[row][j] % T.moduli[row]) * src[j]) % T.moduli[row];
    return T.code(out);
  };

  std::vector<long> cycles;
  std::vector<std::vector<int>> tables(sig.size());
  for (long code = 0; code < S.total; ++code) {
    ++r.enumerated;
    auto f = S.decode(code);
    for (int op = 0; op < sig.size(); ++op) {
      int k = sig.arity(op);
      long count = 1;
      for (int i = 0; i < k; ++i) count *= total;
      tables[op].assign(count, 0);
    }
    for (size_t ci = 0; ci < cells.size(); ++ci) {
      const auto &cl = cells[ci];
      int k = static_cast<int>(cl.args.size());
      // all tuples of fiber elements over cl.args
      std::vector<long> elems(k, 0);
      while (true) {
        long value = fib[cl.target].add(linear(cl, elems), f[ci]);
        std::vector<int> carrier(k);
        for (int i = 0; i < k; ++i) carrier[i] = offset[cl.args[i]] + static_cast<int>(elems[i]);
        tables[cl.op][tuple_code(carrier, total)] = offset[cl.target] + static_cast<int>(value);
        int i = k - 1;
        while (i >= 0 && ++elems[i] == fib[cl.args[i]].size) elems[i--] = 0;
        if (i < 0) break;
      }
    }
    if (satisfies(tables, sig, total, V)) cycles.push_back(code);
  }
  // coboundaries of all A-functions delta
  std::unordered_set<long> bounds;
  long dcount = 1;
  for (int a = 0; a < n; ++a) dcount *= fib[a].size;
  for (long dc = 0; dc < dcount; ++dc) {
    std::vector<long> delta(n);
    long c = dc;
    for (int a = n; a-- > 0;) {
      delta[a] = c % fib[a].size;
      c /= fib[a].size;
    }
    std::vector<long> vals;
    for (const auto &cl : cells) {
      std::vector<long> elems;
      for (int x : cl.args) elems.push_back(delta[x]);
      vals.push_back(fib[cl.target].add(linear(cl, elems), fib[cl.target].neg(delta[cl.target])));
    }
    bounds.insert(S.encode(vals));
  }
  quotient_report(S, cycles, bounds, r);
  r.seconds = seconds_since(t0);
  return r;
}

auto module_ext(int n, int m) -> OracleReport {
  auto t0 = Clock::now();
  OracleReport r;
  r.method = "enumerate normalized abelian group tables on Z/n x Z/m labels, equivalence by search, Baer sums built explicitly";
  int N = n * m;
  auto label = [&](int a, int k) { return a * m + k; };
  // the structure is fixed by c(a,b) with (a,0)+(b,0) = (a+b, c(a,b)) and (0,k)+x shifting labels
  auto table_of = [&](const std::vector<int> &c) {
    std::vector<int> t(N * N);
    for (int a = 0; a < n; ++a)
      for (int k = 0; k < m; ++k)
        for (int b = 0; b < n; ++b)
          for (int l = 0; l < m; ++l) t[label(a, k) * N + label(b, l)] = label((a + b) % n, (k + l + c[a * n + b]) % m);
    return t;
  };
  auto is_abelian_group = [&](const std::vector<int> &t) {
    for (int x = 0; x < N; ++x)
      for (int y = 0; y < N; ++y) {
        if (t[x * N + y] != t[y * N + x]) return false;
        for (int z = 0; z < N; ++z)
          if (t[t[x * N + y] * N + z] != t[x * N + t[y * N + z]]) return false;
      }
    for (int x = 0; x < N; ++x) {
      bool inv = false;
      for (int y = 0; y < N && !inv; ++y) inv = t[x * N + y] == 0;
      if (!inv) return false;
    }
    return true;
  };
  std::vector<std::vector<int>> valid;
  int free_cells = (n - 1) * (n - 1);
  long count = 1;
  for (int i = 0; i < free_cells; ++i) count *= m;
  for (long code = 0; code < count; ++code) {
    ++r.enumerated;
    std::vector<int> c(n * n, 0);
    long x = code;
    for (int a = n - 1; a >= 1; --a)
      for (int b = n - 1; b >= 1; --b) {
        c[a * n + b] = static_cast<int>(x % m);
        x /= m;
      }
    if (is_abelian_group(table_of(c))) valid.push_back(c);
  }
  // equivalence: gamma(a,k) = (a, k + h(a)) must be a homomorphism from E_c to E_d
  auto equivalent = [&](const std::vector<int> &c, const std::vector<int> &d) {
    auto tc = table_of(c), td = table_of(d);
    long hcount = 1;
    for (int i = 1; i < n; ++i) hcount *= m;
    for (long hc = 0; hc < hcount; ++hc) {
      std::vector<int> h(n, 0);
      long x = hc;
      for (int a = n - 1; a >= 1; --a) {
        h[a] = static_cast<int>(x % m);
        x /= m;
      }
      std::vector<int> g(N);
      for (int a = 0; a < n; ++a)
        for (int k = 0; k < m; ++k) g[label(a, k)] = label(a, (k + h[a]) % m);
      bool ok = true;
      for (int u = 0; u < N && ok; ++u)
        for (int v = 0; v < N && ok; ++v) ok = g[tc[u * N + v]] == td[g[u] * N + g[v]];
      if (ok) return true;
    }
    return false;
  };
  std::vector<std::vector<int>> reps;
  auto class_of = [&](const std::vector<int> &c) -> int {
    for (size_t i = 0; i < reps.size(); ++i)
      if (equivalent(c, reps[i])) return static_cast<int>(i);
    return -1;
  };
  for (const auto &c : valid)
    if (class_of(c) < 0) reps.push_back(c);
  // Baer sum: pullback over Z/n, divided by the antidiagonal copy of Z/m, read back in normalized labels
  auto baer = [&](const std::vector<int> &c1, const std::vector<int> &c2) {
    auto t1 = table_of(c1), t2 = table_of(c2);
    auto cls = [&](int x, int y) {
      // (x, y) ~ (x + iota(l), y - iota(l)); pick the member with y = (a, 0)
      int a = x / m, ly = y % m;
      return label(a, (x % m + ly) % m);
    };
    std::vector<int> c3(n * n, 0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        int x = t1[label(a, 0) * N + label(b, 0)];
        int y = t2[label(a, 0) * N + label(b, 0)];
        int s = cls(x, y);
        if (s / m != (a + b) % n) throw Error(ErrorKind::Internal, "oracle: Baer sum left the fiber");
        c3[a * n + b] = s % m;
      }
    if (!is_abelian_group(table_of(c3))) throw Error(ErrorKind::Internal, "oracle: Baer sum is not a group");
    return c3;
  };
  int zero = class_of(std::vector<int>(n * n, 0));
  std::vector<long> orders;
  for (const auto &rep : reps) {
    long k = 1;
    auto acc = rep;
    while (class_of(acc) != zero) {
      acc = baer(acc, rep);
      ++k;
    }
    orders.push_back(k);
    r.representatives.emplace_back(rep.begin(), rep.end());
  }
  r.order = static_cast<long>(reps.size());
  r.invariant_factors = factors_from_orders(orders);
  r.seconds = seconds_since(t0);
  return r;
}

auto group_h2(const FiniteAlgebra &G, int mul, const std::vector<long> &moduli) -> OracleReport {
  auto t0 = Clock::now();
  OracleReport r;
  r.method = "enumerate normalized 2-cocycles with trivial action, divide by normalized 2-coboundaries";
  int n = G.size;
  const auto &t = G.tables.at(mul);
  auto op = [&](int x, int y) { return t[x * n + y]; };
  int one = -1;
  for (int e = 0; e < n && one < 0; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) ok = op(e, x) == x && op(x, e) == x;
    if (ok) one = e;
  }
  if (one < 0) throw Error(ErrorKind::Invariant, "oracle: no identity element");
  Cyclics Mg(moduli);
  std::vector<int> nonunit;
  for (int x = 0; x < n; ++x)
    if (x != one) nonunit.push_back(x);
  int k = static_cast<int>(nonunit.size());
  CochainSpace S;
  for (int i = 0; i < k * k; ++i) {
    S.slot.push_back(&Mg);
    S.total *= Mg.size;
    if (S.total > (1L << 24)) throw Error(ErrorKind::CapExceeded, "oracle: cocycle space too large");
  }
  std::vector<int> pos(n, -1);
  for (int i = 0; i < k; ++i) pos[nonunit[i]] = i;
  auto value = [&](const std::vector<long> &c, int g, int h) -> long {
    if (g == one || h == one) return 0;
    return c[pos[g] * k + pos[h]];
  };
  std::vector<long> cycles;
  for (long code = 0; code < S.total; ++code) {
    ++r.enumerated;
    auto c = S.decode(code);
    bool ok = true;
    for (int g = 0; g < n && ok; ++g)
      for (int h = 0; h < n && ok; ++h)
        for (int l = 0; l < n && ok; ++l)
          ok = Mg.add(value(c, g, h), value(c, op(g, h), l)) == Mg.add(value(c, h, l), value(c, g, op(h, l)));
    if (ok) cycles.push_back(code);
  }
  std::unordered_set<long> bounds;
  long bcount = 1;
  for (int i = 0; i < k; ++i) bcount *= Mg.size;
  for (long bc = 0; bc < bcount; ++bc) {
    std::vector<long> b(n, 0);
    long x = bc;
    for (int i = k; i-- > 0;) {
      b[nonunit[i]] = x % Mg.size;
      x /= Mg.size;
    }
    std::vector<long> c(k * k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        int g = nonunit[i], h = nonunit[j];
        c[i * k + j] = Mg.add(Mg.add(b[g], b[h]), Mg.neg(b[op(g, h)]));
      }
    bounds.insert(S.encode(c));
  }
  quotient_report(S, cycles, bounds, r);
  r.seconds = seconds_since(t0);
  return r;
}

} // namespace abelext::oracle
