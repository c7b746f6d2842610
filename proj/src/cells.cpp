#include "abelext/cells.hpp"

#include "abelext/error.hpp"

#include <algorithm>
#include <functional>

namespace abelext {

namespace {

inline auto residue(i64 a, i64 m) -> i64 {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

} // namespace

// ---- TermBank ----

TermBank::TermBank(Signature sig) : sig_(std::move(sig)) {}

auto TermBank::variable(int i) -> int {
  auto key = std::make_pair(-1 - i, std::vector<int>{});
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  Node n;
  n.var = i;
  n.span = i + 1;
  int id = size();
  nodes_.push_back(std::move(n));
  index_.emplace(std::move(key), id);
  return id;
}

auto TermBank::apply(int op, const std::vector<int> &kids) -> int {
  auto key = std::make_pair(op, kids);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  Node n;
  n.op = op;
  n.kids = kids;
  for (int k : kids) {
    n.span = std::max(n.span, nodes_[k].span);
    n.nonvar.insert(n.nonvar.end(), nodes_[k].nonvar.begin(), nodes_[k].nonvar.end());
  }
  int id = size();
  n.nonvar.push_back(id);
  std::sort(n.nonvar.begin(), n.nonvar.end());
  n.nonvar.erase(std::unique(n.nonvar.begin(), n.nonvar.end()), n.nonvar.end());
  nodes_.push_back(std::move(n));
  index_.emplace(std::move(key), id);
  return id;
}

auto TermBank::intern(const Term &t) -> int {
  if (t.is_var()) return variable(t.var);
  std::vector<int> kids;
  for (const auto &a : t.args) kids.push_back(intern(a));
  return apply(t.op, kids);
}

auto TermBank::substitute(int t, const std::vector<int> &s) -> int {
  if (nodes_[t].var >= 0) return s.at(nodes_[t].var);
  std::vector<int> kids;
  // copy: apply() may reallocate nodes_
  auto orig = nodes_[t].kids;
  int op = nodes_[t].op;
  for (int k : orig) kids.push_back(substitute(k, s));
  return apply(op, kids);
}

auto TermBank::find_substitute(int t, const std::vector<int> &s) const -> int {
  const auto &n = nodes_[t];
  if (n.var >= 0) return s.at(n.var);
  std::pair<int, std::vector<int>> key{n.op, {}};
  for (int k : n.kids) {
    int r = find_substitute(k, s);
    if (r < 0) return -1;
    key.second.push_back(r);
  }
  auto it = index_.find(key);
  return it == index_.end() ? -1 : it->second;
}

auto TermBank::to_term(int id) const -> Term {
  const auto &n = nodes_[id];
  if (n.var >= 0) return Term::variable(n.var);
  std::vector<Term> args;
  for (int k : n.kids) args.push_back(to_term(k));
  return Term::apply(n.op, std::move(args));
}

auto tuple_cost(const TermBank &bank, const std::vector<int> &terms) -> int {
  std::vector<int> all;
  for (int t : terms) all.insert(all.end(), bank.node(t).nonvar.begin(), bank.node(t).nonvar.end());
  std::sort(all.begin(), all.end());
  return static_cast<int>(std::unique(all.begin(), all.end()) - all.begin());
}

// ---- TermPool ----

namespace {

auto union_size(const std::vector<int> &a, const std::vector<int> &b, std::vector<int> &out) -> int {
  out.clear();
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return static_cast<int>(out.size());
}

} // namespace

TermPool::TermPool(const Signature &sig, int depth, int arity) : bank_(sig), depth_(depth), arity_(arity) {
  if (depth < 0 || arity < 0) throw Error(ErrorKind::Invariant, "truncation parameters must be non-negative");
  if (arity < sig.max_arity()) throw Error(ErrorKind::Invariant, "pool arity must be at least the largest symbol arity");
  if (arity > 6) throw Error(ErrorKind::CapExceeded, "pool arity above 6");
  std::vector<int> pool;
  for (int i = 0; i < arity; ++i) pool.push_back(bank_.variable(i));
  // each round raises the depth by one; depth never exceeds cost
  for (int round = 0; round < depth; ++round) {
    auto snapshot = pool;
    for (int op = 0; op < sig.size(); ++op) {
      int k = sig.arity(op);
      std::vector<int> args(k);
      std::vector<std::vector<int>> acc(k + 1);
      std::vector<int> tmp;
      std::function<void(int)> rec = [&](int i) {
        if (i == k) {
          if (static_cast<int>(acc[k].size()) + 1 > depth) return;
          int before = bank_.size();
          int id = bank_.apply(op, args);
          if (id >= before) pool.push_back(id);
          return;
        }
        for (int t : snapshot) {
          if (union_size(acc[i], bank_.node(t).nonvar, tmp) + 1 > depth) continue;
          acc[i + 1] = tmp;
          args[i] = t;
          rec(i + 1);
        }
      };
      rec(0);
    }
  }
  auto by_cost = [&](int a, int b) {
    int ca = bank_.cost(a), cb = bank_.cost(b);
    return ca != cb ? ca < cb : a < b;
  };
  std::sort(pool.begin(), pool.end(), by_cost);
  terms_.assign(arity + 1, {});
  pos_.assign(arity + 1, std::vector<int>(bank_.size(), -1));
  for (int n = 0; n <= arity; ++n)
    for (int t : pool)
      if (bank_.node(t).span <= n) {
        pos_[n][t] = static_cast<int>(terms_[n].size());
        terms_[n].push_back(t);
      }

  // level tuples
  long total_tuples = 0;
  tuples_.assign(arity + 1, std::vector<std::vector<int>>(arity + 1));
  for (int len = 0; len <= arity; ++len)
    for (int n = 0; n <= arity; ++n) {
      std::vector<std::pair<int, std::vector<int>>> found;
      std::vector<int> cur(len);
      std::vector<std::vector<int>> acc(len + 1);
      std::vector<int> tmp;
      std::function<void(int)> rec = [&](int i) {
        if (i == len) {
          if (++total_tuples > kMaxLevels) throw Error(ErrorKind::CapExceeded, "pool: more than " + std::to_string(kMaxLevels) + " level tuples");
          found.emplace_back(static_cast<int>(acc[len].size()), cur);
          return;
        }
        for (int t : terms_[n]) {
          if (union_size(acc[i], bank_.node(t).nonvar, tmp) > depth) continue;
          acc[i + 1] = tmp;
          cur[i] = t;
          rec(i + 1);
        }
      };
      rec(0);
      std::stable_sort(found.begin(), found.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
      for (auto &[c, terms] : found) tuples_[len][n].push_back(add_level(n, std::move(terms)));
    }
  single_.resize(levels_.size());
  for (size_t l = 0; l < levels_.size(); ++l)
    for (int t : levels_[l].terms) {
      int s = find_level(levels_[l].arity, {t});
      if (s < 0) throw Error(ErrorKind::Internal, "pool: entry of a level is not a pool term");
      single_[l].push_back(s);
    }
  by_arity_.assign(arity + 1, {});
  for (int l = 0; l < level_count(); ++l) by_arity_[levels_[l].arity].push_back(l);
  for (auto &v : by_arity_)
    std::stable_sort(v.begin(), v.end(), [&](int a, int b) { return levels_[a].cost < levels_[b].cost; });
  // one-term outer levels u o lb, needed for class closure
  std::vector<std::vector<int>> singles(arity + 1);
  for (int n = 0; n <= arity; ++n)
    for (int l : by_arity_[n])
      if (levels_[l].terms.size() == 1 && bank_.node(levels_[l].terms[0]).var < 0) singles[n].push_back(l);
  for (int lb = 0; lb < level_count(); ++lb) {
    const auto &B = levels_[lb];
    for (int la : singles[B.terms.size()]) {
      const auto &A = levels_[la];
      if (A.cost + B.cost > depth) break;
      int t = bank_.substitute(A.terms[0], B.terms);
      if (find_level(B.arity, {t}) < 0) throw Error(ErrorKind::Internal, "pool: composition left the pool");
      comps_.push_back({A.terms[0], lb, t});
    }
  }
}

void TermPool::prepare_compositions() {
  if (all_composed_) return;
  for (int lb = 0; lb < level_count(); ++lb) {
    const auto &B = levels_[lb];
    for (int la : by_arity_[B.terms.size()]) {
      const auto &A = levels_[la];
      if (A.cost + B.cost > depth_) break;
      std::vector<int> out;
      for (int t : A.terms) out.push_back(bank_.find_substitute(t, B.terms));
      int r = find_level(B.arity, out);
      if (r < 0) throw Error(ErrorKind::Internal, "pool: composition left the pool");
      compose_.emplace((static_cast<std::uint64_t>(la) << 32) | static_cast<std::uint32_t>(lb), r);
      if (static_cast<long>(compose_.size()) > kMaxComposeTable) {
        // too large to tabulate; compose() keeps working without the table
        compose_ = {};
        return;
      }
    }
  }
  all_composed_ = true;
}

auto TermPool::add_level(int n, std::vector<int> terms) -> int {
  auto key = std::make_pair(n, terms);
  auto it = level_index_.find(key);
  if (it != level_index_.end()) return it->second;
  Level L;
  L.cost = tuple_cost(bank_, terms);
  L.terms = std::move(terms);
  L.arity = n;
  int id = level_count();
  levels_.push_back(std::move(L));
  level_index_.emplace(std::move(key), id);
  return id;
}

auto TermPool::find_level(int n, const std::vector<int> &terms) const -> int {
  auto it = level_index_.find(std::make_pair(n, terms));
  return it == level_index_.end() ? -1 : it->second;
}

auto TermPool::compose(int la, int lb) const -> int {
  if (all_composed_) {
    auto it = compose_.find((static_cast<std::uint64_t>(la) << 32) | static_cast<std::uint32_t>(lb));
    return it == compose_.end() ? -1 : it->second;
  }
  const auto &A = levels_[la], &B = levels_[lb];
  if (A.arity != static_cast<int>(B.terms.size()) || A.cost + B.cost > depth_) return -1;
  std::vector<int> out;
  for (int t : A.terms) out.push_back(bank_.find_substitute(t, B.terms));
  return find_level(B.arity, out);
}

// ---- term classes ----

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  auto find(int x) -> int {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  auto unite(int a, int b) -> bool {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

void collect_vars(const TermBank &bank, int t, std::vector<bool> &seen) {
  const auto &n = bank.node(t);
  if (n.var >= 0) {
    seen[n.var] = true;
    return;
  }
  for (int k : n.kids) collect_vars(bank, k, seen);
}

} // namespace

auto term_classes(TermPool &pool, const std::vector<Identity> &identities) -> TermClasses {
  TermClasses tc;
  auto &bank = pool.bank_mut();
  const auto &terms = pool.terms_of_arity(pool.arity());
  int D = pool.depth();
  std::vector<std::pair<int, int>> merges;
  for (const auto &id : identities) {
    int k = id.nvars;
    int l = bank.intern(id.lhs), r = bank.intern(id.rhs);
    std::vector<bool> in_l(k, false), in_r(k, false);
    collect_vars(bank, l, in_l);
    collect_vars(bank, r, in_r);
    std::vector<int> sigma(k);
    std::vector<std::vector<int>> accl(k + 1), accr(k + 1);
    std::vector<int> tmp;
    std::function<void(int)> rec = [&](int i) {
      if (i == k) {
        int a = bank.find_substitute(l, sigma), b = a < 0 ? -1 : bank.find_substitute(r, sigma);
        if (a >= 0 && b >= 0 && pool.in_pool(a) && pool.in_pool(b)) {
          merges.emplace_back(a, b);
          ++tc.seeds;
        }
        return;
      }
      for (int t : terms) {
        const auto &nv = bank.node(t).nonvar;
        if (in_l[i]) {
          if (union_size(accl[i], nv, tmp) > D) continue;
          accl[i + 1] = tmp;
        } else {
          accl[i + 1] = accl[i];
        }
        if (in_r[i]) {
          if (union_size(accr[i], nv, tmp) > D) continue;
          accr[i + 1] = tmp;
        } else {
          accr[i + 1] = accr[i];
        }
        // a variable that occurs on neither side only needs one witness
        if (!in_l[i] && !in_r[i] && t != terms.front()) continue;
        sigma[i] = t;
        rec(i + 1);
      }
    };
    if (k <= pool.arity()) rec(0);
  }
  UnionFind uf(bank.size());
  for (auto [a, b] : merges) uf.unite(a, b);
  // closure under composition: equal outer classes and equal inner classes give equal results
  const auto &comps = pool.compositions();
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::vector<int>, int> seen;
    std::vector<int> key;
    for (const auto &c : comps) {
      const auto &lv = pool.level(c.inner);
      key.assign({uf.find(c.outer), lv.arity});
      for (int t : lv.terms) key.push_back(uf.find(t));
      auto [it, fresh] = seen.emplace(key, c.result);
      if (!fresh && uf.unite(it->second, c.result)) changed = true;
    }
  }
  tc.of.assign(bank.size(), -1);
  std::map<int, int> root_id;
  for (int t : terms) {
    int r = uf.find(t);
    auto [it, fresh] = root_id.emplace(r, tc.count);
    if (fresh) ++tc.count;
    tc.of[t] = it->second;
  }
  std::map<std::vector<int>, int> level_id;
  for (int l = 0; l < pool.level_count(); ++l) {
    const auto &lv = pool.level(l);
    std::vector<int> key{lv.arity};
    for (int t : lv.terms) key.push_back(tc.of[t]);
    auto [it, fresh] = level_id.emplace(key, tc.level_count);
    if (fresh) ++tc.level_count;
    tc.level_of.push_back(it->second);
  }
  return tc;
}

auto class_key(const CellKey &c, const TermClasses &tc) -> CellKey {
  CellKey k = c;
  for (int j = 0; j < c.dim; ++j) k.lv[j] = tc.level_of[c.lv[j]];
  return k;
}

// ---- CellSpace ----

CellSpace::CellSpace(const TermPool &pool, const AbOveralgebra &N) : pool_(pool), N_(N), B_(N.base.size) {
  int Nar = pool.arity();
  for (const auto &g : N_.groups)
    if (g.rank() > 4) throw Error(ErrorKind::CapExceeded, "cells: fiber rank above 4");
  pow_.assign(Nar + 1, 1);
  for (int n = 1; n <= Nar; ++n) {
    pow_[n] = pow_[n - 1] * B_;
    if (pow_[n] > (std::int64_t{1} << 40)) throw Error(ErrorKind::CapExceeded, "cells: too many bottom tuples");
  }
  const auto &bank = pool.bank();
  const auto &A = N_.base;
  val_.assign(Nar + 1, {});
  lin_.assign(Nar + 1, {});
  for (int n = 0; n <= Nar; ++n) {
    const auto &ts = pool.terms_of_arity(n);
    if (static_cast<double>(ts.size()) * static_cast<double>(pow_[n]) * std::max(1, n) > 5e7)
      throw Error(ErrorKind::CapExceeded, "cells: linear-part table too large");
    val_[n].resize(ts.size() * pow_[n]);
    lin_[n].resize(ts.size() * pow_[n] * n);
    std::vector<int> w(n);
    for (std::int64_t code = 0; code < pow_[n]; ++code) {
      std::int64_t c = code;
      for (int k = n; k-- > 0;) {
        w[k] = static_cast<int>(c % B_);
        c /= B_;
      }
      // value and linear blocks by structural recursion
      std::function<std::pair<int, std::vector<Matrix>>(int)> rec = [&](int t) -> std::pair<int, std::vector<Matrix>> {
        const auto &node = bank.node(t);
        if (node.var >= 0) {
          int v = w[node.var];
          std::vector<Matrix> blocks;
          for (int k = 0; k < n; ++k)
            blocks.push_back(k == node.var ? identity_matrix(N_.groups[v].rank()) : zero_matrix(N_.groups[v].rank(), N_.groups[w[k]].rank()));
          return {v, blocks};
        }
        std::vector<int> vals;
        std::vector<std::vector<Matrix>> kid;
        for (int k : node.kids) {
          auto r = rec(k);
          vals.push_back(r.first);
          kid.push_back(std::move(r.second));
        }
        int v = A.apply(node.op, vals.data());
        const auto &T = N_.groups[v];
        const Matrix &op = N_.opmap(node.op, vals.data());
        std::vector<Matrix> blocks;
        for (int k = 0; k < n; ++k) {
          int cols = N_.groups[w[k]].rank();
          Matrix out = zero_matrix(T.rank(), cols);
          int off = 0;
          for (size_t j = 0; j < kid.size(); ++j) {
            int rj = N_.groups[vals[j]].rank();
            for (int r = 0; r < T.rank(); ++r)
              for (int s = 0; s < cols; ++s) {
                i64 acc = 0;
                for (int q = 0; q < rj; ++q) acc = addmod(acc, mulmod(op[r][off + q], kid[j][k][q][s], T.moduli[r]), T.moduli[r]);
                out[r][s] = addmod(out[r][s], acc, T.moduli[r]);
              }
            off += rj;
          }
          blocks.push_back(std::move(out));
        }
        return {v, blocks};
      };
      for (size_t p = 0; p < ts.size(); ++p) {
        auto [v, blocks] = rec(ts[p]);
        std::size_t idx = p * pow_[n] + code;
        val_[n][idx] = v;
        for (int k = 0; k < n; ++k) {
          Block b;
          b.rows = static_cast<int>(blocks[k].size());
          b.cols = N_.groups[w[k]].rank();
          for (int r = 0; r < b.rows; ++r)
            for (int s = 0; s < b.cols; ++s) b.at(r, s) = blocks[k][r][s];
          lin_[n][idx * n + k] = b;
        }
      }
    }
  }
}

auto CellSpace::bottom_length(const CellKey &c) const -> int {
  return c.dim == 0 ? 1 : pool_.level(c.lv[c.dim - 1]).arity;
}

auto CellSpace::evaluate_level(int level, std::int64_t bottoms) const -> std::int64_t {
  const auto &L = pool_.level(level);
  int n = L.arity;
  std::int64_t out = 0;
  for (int t : L.terms) out = out * B_ + val_[n][static_cast<std::size_t>(pool_.position(n, t)) * pow_[n] + bottoms];
  return out;
}

auto CellSpace::value(const CellKey &c) const -> int {
  std::int64_t code = c.bottoms;
  for (int j = c.dim; j-- > 0;) code = evaluate_level(c.lv[j], code);
  return static_cast<int>(code);
}

void CellSpace::for_each_structure(int i, const std::function<void(const std::array<int, kMaxCellDim> &)> &visit) const {
  if (i > kMaxCellDim) throw Error(ErrorKind::CapExceeded, "cells: dimension above the supported maximum");
  std::array<int, kMaxCellDim> s{};
  int D = pool_.depth(), Nar = pool_.arity();
  std::function<void(int, int, int)> rec = [&](int j, int len, int used) {
    if (j == i) {
      visit(s);
      return;
    }
    for (int n = 0; n <= Nar; ++n)
      for (int l : pool_.levels(len, n)) {
        int c = pool_.level(l).cost;
        if (used + c > D) break;
        s[j] = l;
        rec(j + 1, n, used + c);
      }
  };
  rec(0, 1, 0);
}

auto CellSpace::cell_count(int i) const -> long {
  if (i == 0) return B_;
  long total = 0;
  for_each_structure(i, [&](const std::array<int, kMaxCellDim> &s) { total += pow_[pool_.level(s[i - 1]).arity]; });
  return total;
}

namespace {

auto identity_block(int r) -> Block {
  Block b;
  b.rows = b.cols = r;
  for (int i = 0; i < r; ++i) b.at(i, i) = 1;
  return b;
}

auto digit(std::int64_t code, int k, int len, std::int64_t base) -> std::int64_t {
  for (int i = len - 1; i > k; --i) code /= base;
  return code % base;
}

} // namespace

void CellSpace::face(const CellKey &c, int j, Chain &out) const {
  out.clear();
  int i = c.dim;
  if (i == 0 || j < 0 || j > i) throw Error(ErrorKind::Invariant, "face index out of range");
  std::array<std::int64_t, kMaxCellDim + 1> u{};
  u[i] = c.bottoms;
  for (int l = i; l-- > 0;) u[l] = evaluate_level(c.lv[l], u[l + 1]);
  int R = N_.groups[static_cast<int>(u[0])].rank();
  if (j == 0) {
    const auto &L0 = pool_.level(c.lv[0]);
    int n0 = L0.arity;
    std::size_t idx = static_cast<std::size_t>(pool_.position(n0, L0.terms[0])) * pow_[n0] + u[1];
    for (int k = 0; k < n0; ++k) {
      ChainItem it;
      if (i == 1) {
        it.cell.dim = 0;
        it.cell.bottoms = digit(u[1], k, n0, B_);
      } else {
        it.cell.dim = i - 1;
        it.cell.lv[0] = pool_.single(c.lv[1], k);
        for (int l = 2; l < i; ++l) it.cell.lv[l - 1] = c.lv[l];
        it.cell.bottoms = c.bottoms;
      }
      it.coef = lin_[n0][idx * n0 + k];
      out.push_back(it);
    }
    return;
  }
  ChainItem it;
  it.cell.dim = i - 1;
  it.coef = identity_block(R);
  if (j < i) {
    for (int l = 0; l < j - 1; ++l) it.cell.lv[l] = c.lv[l];
    int m = pool_.compose(c.lv[j - 1], c.lv[j]);
    if (m < 0) throw Error(ErrorKind::Internal, "cells: merged level outside the pool");
    it.cell.lv[j - 1] = m;
    for (int l = j + 1; l < i; ++l) it.cell.lv[l - 1] = c.lv[l];
    it.cell.bottoms = c.bottoms;
  } else {
    for (int l = 0; l < i - 1; ++l) it.cell.lv[l] = c.lv[l];
    it.cell.bottoms = u[i - 1];
  }
  out.push_back(it);
}

void normalize_chain(Chain &c, const FinAbGroup &owner) {
  // chains are short: insertion sort, then merge and drop zeros in place
  for (size_t i = 1; i < c.size(); ++i)
    for (size_t j = i; j > 0 && c[j].cell < c[j - 1].cell; --j) std::swap(c[j], c[j - 1]);
  size_t w = 0;
  for (size_t i = 0; i < c.size();) {
    ChainItem &it = c[w];
    if (w != i) it = c[i];
    size_t k = i + 1;
    for (; k < c.size() && c[k].cell == it.cell; ++k)
      for (int r = 0; r < it.coef.rows; ++r)
        for (int s = 0; s < it.coef.cols; ++s) it.coef.at(r, s) += c[k].coef.at(r, s);
    bool zero = true;
    for (int r = 0; r < it.coef.rows; ++r)
      for (int s = 0; s < it.coef.cols; ++s) {
        i64 &x = it.coef.at(r, s);
        x = residue(x, owner.moduli[r]);
        if (x) zero = false;
      }
    if (!zero) ++w;
    i = k;
  }
  c.resize(w);
}

namespace {

void compose_into(const ChainItem &a, const Chain &second, const FinAbGroup &owner, Chain &out) {
  for (const auto &b : second) {
    ChainItem it;
    it.cell = b.cell;
    it.coef.rows = a.coef.rows;
    it.coef.cols = b.coef.cols;
    for (int r = 0; r < a.coef.rows; ++r) {
      i64 m = owner.moduli[r];
      for (int s = 0; s < b.coef.cols; ++s) {
        i64 acc = 0;
        for (int q = 0; q < a.coef.cols; ++q) acc += a.coef.at(r, q) * b.coef.at(q, s);
        it.coef.at(r, s) = residue(acc, m);
      }
    }
    out.push_back(it);
  }
}

} // namespace

void CellSpace::double_face(const CellKey &c, int j, int k, Chain &out) const {
  thread_local Chain first, second;
  face(c, k, first);
  out.clear();
  const auto &owner = fiber(c);
  for (const auto &a : first) {
    face(a.cell, j, second);
    compose_into(a, second, owner, out);
  }
  normalize_chain(out, owner);
}

void CellSpace::double_faces(const CellKey &c, std::vector<Chain> &out) const {
  int i = c.dim;
  out.resize(static_cast<size_t>(i) * (i + 1));
  thread_local Chain first, second;
  const auto &owner = fiber(c);
  for (auto &ch : out) ch.clear();
  for (int k = 0; k <= i; ++k) {
    face(c, k, first);
    for (const auto &a : first)
      for (int j = 0; j < i; ++j) {
        face(a.cell, j, second);
        compose_into(a, second, owner, out[static_cast<size_t>(j) * (i + 1) + k]);
      }
  }
  for (auto &ch : out) normalize_chain(ch, owner);
}

} // namespace abelext
