#include "abelext/cohomology.hpp"

#include "abelext/error.hpp"
#include "abelext/ext_group.hpp"
#include "abelext/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <map>

namespace abelext {

namespace {

auto coefficients_on_base(const AbOveralgebra &M, const PointedOveralgebra *Q) -> AbOveralgebra {
  if (!Q) return M;
  if (!(Q->base == M.base)) throw Error(ErrorKind::Mismatch, "the pointed overalgebra and the coefficients lie over different algebras");
  auto T = total_algebra(*Q);
  return restrict(T.algebra, T.pi, M);
}

void sort_row(SparseRow &row, i64 m) {
  std::sort(row.begin(), row.end());
  size_t w = 0;
  for (size_t i = 0; i < row.size();) {
    i64 acc = 0;
    size_t k = i;
    for (; k < row.size() && row[k].first == row[i].first; ++k) acc += row[k].second;
    acc = mod(acc, m);
    if (acc) row[w++] = {row[i].first, acc};
    i = k;
  }
  row.resize(w);
}

// Streams the cells of dimension i in batches; rows for each batch are built in parallel
// and handed over in enumeration order.
template <class Make, class Use>
void stream_cells(const CellSpace &cs, int i, int jobs, Make &&make, Use &&use) {
  constexpr size_t kBatch = 1 << 15;
  std::vector<CellKey> batch;
  using Out = std::invoke_result_t<Make, const CellKey &>;
  std::vector<Out> results;
  auto flush = [&] {
    results.assign(batch.size(), Out{});
    parallel_chunks(static_cast<long>(batch.size()), jobs, [&](long b, long e) {
      for (long x = b; x < e; ++x) results[x] = make(batch[x]);
    });
    for (size_t x = 0; x < batch.size(); ++x) use(batch[x], results[x]);
    batch.clear();
  };
  cs.for_each_cell(i, [&](const CellKey &c) {
    batch.push_back(c);
    if (batch.size() == kBatch) flush();
  });
  if (!batch.empty()) flush();
}

} // namespace

CloneComplex::CloneComplex(const VarietyPresentation &V, const AbOveralgebra &M, const PointedOveralgebra *Q,
                           const TruncationParams &params)
    : V_(V), params_(params) {
  if (params.depth < 1) throw Error(ErrorKind::Invariant, "truncation depth must be at least 1");
  if (params.max_dim < 0 || params.max_dim + 1 > kMaxCellDim) throw Error(ErrorKind::CapExceeded, "max dimension out of range");
  auto N = coefficients_on_base(M, Q);
  if (!(N.base.sig == V.signature)) throw Error(ErrorKind::SignatureMismatch, "coefficients and variety have different signatures");
  auto rep = check_identities(N.base, V);
  if (!rep.holds) throw Error(ErrorKind::Invariant, "the base algebra does not satisfy the variety's identities");
  pool_ = std::make_unique<TermPool>(V.signature, params.depth, params.arity);
  if (params.max_dim + 1 >= 2) pool_->prepare_compositions();
  classes_ = term_classes(*pool_, V.identities);
  cells_ = std::make_unique<CellSpace>(*pool_, N);
}

auto CochainLayout::class_of(const CellKey &c, const TermClasses &tc) const -> int {
  auto it = index.find(class_key(c, tc));
  return it == index.end() ? -1 : it->second;
}

auto build_layout(const CloneComplex &cx, int i) -> CochainLayout {
  const auto &cs = cx.cells();
  CochainLayout L;
  L.dim = i;
  long n = cs.cell_count(i);
  if (n > cx.params().cell_cap) throw Error(ErrorKind::CapExceeded, "X^" + std::to_string(i) + " has " + std::to_string(n) + " cells");
  L.cells = n;
  const auto &N = cs.coefficients();
  cs.for_each_cell(i, [&](const CellKey &c) {
    int v = cs.value(c);
    auto [it, fresh] = L.index.emplace(class_key(c, cx.classes()), L.class_count());
    if (fresh) {
      L.reps.push_back(c);
      L.values.push_back(v);
      L.offset.push_back(L.unknowns());
      for (auto m : N.groups[v].moduli) L.moduli.push_back(m);
    } else if (L.values[it->second] != v) {
      throw Error(ErrorKind::Inconclusive, "cells of one class land on different elements");
    }
  });
  return L;
}

void coboundary_rows(const CloneComplex &cx, const CochainLayout &lower, const CellKey &c, std::vector<SparseRow> &rows) {
  const auto &cs = cx.cells();
  const auto &F = cs.fiber(c);
  rows.assign(F.rank(), {});
  thread_local Chain chain;
  for (int j = 0; j <= c.dim; ++j) {
    cs.face(c, j, chain);
    i64 sign = (j % 2) ? -1 : 1;
    for (const auto &it : chain) {
      int cls = lower.class_of(it.cell, cx.classes());
      if (cls < 0) throw Error(ErrorKind::Internal, "face outside the enumerated cells");
      int off = lower.offset[cls];
      for (int r = 0; r < it.coef.rows; ++r)
        for (int s = 0; s < it.coef.cols; ++s)
          if (it.coef.at(r, s)) rows[r].emplace_back(off + s, sign * it.coef.at(r, s));
    }
  }
  for (int r = 0; r < F.rank(); ++r) sort_row(rows[r], F.moduli[r]);
}

auto check_complex(const CloneComplex &cx, int i) -> ComplexCheck {
  if (i < 2) throw Error(ErrorKind::Invariant, "double faces need dimension at least 2");
  auto t0 = std::chrono::steady_clock::now();
  const auto &cs = cx.cells();
  ComplexCheck out;
  out.dim = i;
  out.cells = cs.cell_count(i);
  if (out.cells > cx.params().cell_cap) throw Error(ErrorKind::CapExceeded, "X^" + std::to_string(i) + " has " + std::to_string(out.cells) + " cells");
  struct Verdict {
    bool simplicial = true, boundary = true;
    std::string where;
  };
  long index = 0;
  stream_cells(
      cs, i, cx.params().jobs,
      [&](const CellKey &c) {
        thread_local std::vector<Chain> dd;
        thread_local Chain total;
        Verdict v;
        cs.double_faces(c, dd);
        for (int k = 1; k <= i && v.simplicial; ++k)
          for (int j = 0; j < k; ++j) {
            const auto &a = dd[static_cast<size_t>(j) * (i + 1) + k];
            const auto &b = dd[static_cast<size_t>(k - 1) * (i + 1) + j];
            bool same = a.size() == b.size();
            for (size_t x = 0; same && x < a.size(); ++x) same = a[x].cell == b[x].cell && a[x].coef == b[x].coef;
            if (!same) {
              v.simplicial = false;
              v.where = "d" + std::to_string(j) + " d" + std::to_string(k) + " != d" + std::to_string(k - 1) + " d" + std::to_string(j);
              break;
            }
          }
        total.clear();
        for (int k = 0; k <= i; ++k)
          for (int j = 0; j < i; ++j)
            for (auto it : dd[static_cast<size_t>(j) * (i + 1) + k]) {
              if ((j + k) % 2)
                for (auto &x : it.coef.a) x = -x;
              total.push_back(it);
            }
        normalize_chain(total, cs.fiber(c));
        if (!total.empty()) {
          v.boundary = false;
          if (v.where.empty()) v.where = "dd != 0";
        }
        return v;
      },
      [&](const CellKey &c, const Verdict &v) {
        if (!v.simplicial) ++out.simplicial_failures;
        if (!v.boundary) ++out.boundary_failures;
        if (out.first_failure.empty() && !v.where.empty()) {
          out.first_failure = "cell " + std::to_string(index) + " (bottoms " + std::to_string(c.bottoms) + "): " + v.where;
        }
        ++index;
      });
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

auto cocycle_group(const CloneComplex &cx, const CochainLayout &lower, long *rows, long *distinct) -> Subgroup {
  const auto &cs = cx.cells();
  long n = cs.cell_count(lower.dim + 1);
  if (n > cx.params().cell_cap) throw Error(ErrorKind::CapExceeded, "X^" + std::to_string(lower.dim + 1) + " has " + std::to_string(n) + " cells");
  EliminationKernel ks(lower.moduli);
  struct Rows {
    std::vector<SparseRow> rows;
    Vec moduli;
  };
  stream_cells(
      cs, lower.dim + 1, cx.params().jobs,
      [&](const CellKey &c) {
        Rows r;
        coboundary_rows(cx, lower, c, r.rows);
        r.moduli = cs.fiber(c).moduli;
        return r;
      },
      [&](const CellKey &, Rows &r) {
        for (size_t k = 0; k < r.rows.size(); ++k)
          if (!r.rows[k].empty()) ks.add(std::move(r.rows[k]), r.moduli[k]);
      });
  if (rows) *rows = ks.rows_seen();
  if (distinct) *distinct = ks.rows_distinct();
  return ks.kernel(cx.params().unknown_cap);
}

auto coboundary_group(const CloneComplex &cx, const CochainLayout &below, const CochainLayout &above) -> Subgroup {
  if (above.dim != below.dim + 1) throw Error(ErrorKind::Invariant, "coboundary between non-adjacent dimensions");
  // rows of d at class representatives; every other cell must reproduce its representative's rows
  std::vector<std::vector<SparseRow>> rep_rows(above.class_count());
  for (int k = 0; k < above.class_count(); ++k) coboundary_rows(cx, below, above.reps[k], rep_rows[k]);
  std::vector<SparseRow> tmp;
  cx.cells().for_each_cell(above.dim, [&](const CellKey &c) {
    int k = above.class_of(c, cx.classes());
    if (k < 0) throw Error(ErrorKind::Internal, "cell missing from its layout");
    coboundary_rows(cx, below, c, tmp);
    if (tmp != rep_rows[k]) throw Error(ErrorKind::Inconclusive, "a coboundary is not constant on a cell class");
  });
  std::vector<std::vector<std::pair<int, i64>>> cols(below.unknowns());
  for (int k = 0; k < above.class_count(); ++k)
    for (size_t r = 0; r < rep_rows[k].size(); ++r)
      for (auto [col, v] : rep_rows[k][r]) cols[col].emplace_back(above.offset[k] + static_cast<int>(r), v);
  Subgroup S(above.moduli);
  for (const auto &col : cols) {
    Vec v(above.unknowns(), 0);
    for (auto [row, x] : col) v[row] = mod(v[row] + x, above.moduli[row]);
    S.insert(std::move(v));
  }
  return S;
}

auto h1_exact(const AbOveralgebra &M, const VarietyPresentation &V, const PointedOveralgebra *Q) -> Vec {
  if (Q) return ext_of_overalgebra(*Q, M, V).ext.invariant_factors();
  return ext_group(M, V).invariant_factors();
}

auto cohomology(const VarietyPresentation &V, const AbOveralgebra &M, const PointedOveralgebra *Q, const TruncationParams &params)
    -> CohomologyReport {
  CloneComplex cx(V, M, Q, params);
  const auto &cs = cx.cells();
  CohomologyReport rep;
  rep.params = params;
  rep.base_size = cs.base_size();
  rep.pool_terms = static_cast<int>(cx.pool().terms_of_arity(params.arity).size());
  rep.term_classes = cx.classes().count;
  rep.level_classes = cx.classes().level_count;
  rep.identity_seeds = cx.classes().seeds;
  for (int i = 0; i <= params.max_dim + 1; ++i) rep.cell_counts.push_back(cs.cell_count(i));
  for (int i = 2; i <= params.max_dim + 1; ++i) {
    if (rep.cell_counts[i] > params.cell_cap) {
      rep.warnings.push_back("complex check in dimension " + std::to_string(i) + " skipped: cap");
      continue;
    }
    rep.checks.push_back(check_complex(cx, i));
    if (!rep.checks.back().ok()) throw Error(ErrorKind::Internal, "complex identities fail: " + rep.checks.back().first_failure);
  }
  std::vector<std::optional<CochainLayout>> layouts(params.max_dim + 1);
  for (int i = 0; i <= params.max_dim; ++i) {
    CohomologyDim g;
    g.dim = i;
    g.cells = rep.cell_counts[i];
    if (g.cells > params.cell_cap || rep.cell_counts[i + 1] > params.cell_cap) {
      g.status = "skipped: cap";
      rep.groups.push_back(std::move(g));
      continue;
    }
    layouts[i] = build_layout(cx, i);
    const auto &L = *layouts[i];
    g.classes = L.class_count();
    g.unknowns = L.unknowns();
    if (i > 0 && !layouts[i - 1]) {
      g.status = "skipped: cap";
      rep.groups.push_back(std::move(g));
      continue;
    }
    try {
      g.cocycles = cocycle_group(cx, L, &g.rows, &g.distinct_rows);
    } catch (const Error &e) {
      if (e.kind() != ErrorKind::CapExceeded) throw;
      g.status = "skipped: cap";
      rep.groups.push_back(std::move(g));
      continue;
    }
    g.coboundaries = i == 0 ? Subgroup(L.moduli) : coboundary_group(cx, *layouts[i - 1], L);
    if (!g.coboundaries.subset_of(g.cocycles)) throw Error(ErrorKind::Internal, "coboundaries are not cocycles");
    g.group = QuotientGroup(g.cocycles, g.coboundaries);
    g.computed = true;
    g.status = "ok";
    rep.groups.push_back(std::move(g));
  }
  try {
    rep.h1_exact = h1_exact(M, V, Q);
    if (rep.groups.size() > 1 && rep.groups[1].computed) rep.h1_agrees = rep.groups[1].invariant_factors() == rep.h1_exact;
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::CapExceeded) throw;
    rep.warnings.push_back(std::string("exact H^1 skipped: ") + e.what());
  }
  rep.warnings.push_back("truncated: cells come from the term pool of depth " + std::to_string(params.depth) + " and arity " +
                         std::to_string(params.arity));
  if (params.max_dim >= 2) rep.warnings.push_back("H^i for i >= 2 is a pool-dependent approximation");
  return rep;
}

auto face_map(const CloneComplex &cx, int i, int j, long cap) -> CellMatrix {
  const auto &cs = cx.cells();
  if (i < 0 || j < 0 || j > std::max(i, 0)) throw Error(ErrorKind::Shape, "face index out of range");
  if (cs.cell_count(i) > cap || (i > 0 && cs.cell_count(i - 1) > cap)) throw Error(ErrorKind::CapExceeded, "face map too large");
  CellMatrix out;
  cs.for_each_cell(i, [&](const CellKey &c) {
    for (auto m : cs.fiber(c).moduli) out.row_moduli.push_back(m);
  });
  out.rows.assign(out.row_moduli.size(), {});
  if (i == 0) return out; // d_0 on 0-cells is zero: no columns
  std::unordered_map<CellKey, int, CellKeyHash> col;
  cs.for_each_cell(i - 1, [&](const CellKey &c) {
    col.emplace(c, static_cast<int>(out.col_moduli.size()));
    for (auto m : cs.fiber(c).moduli) out.col_moduli.push_back(m);
  });
  int row = 0;
  Chain chain;
  cs.for_each_cell(i, [&](const CellKey &c) {
    const auto &F = cs.fiber(c);
    cs.face(c, j, chain);
    for (const auto &it : chain) {
      int off = col.at(it.cell);
      for (int r = 0; r < it.coef.rows; ++r)
        for (int s = 0; s < it.coef.cols; ++s)
          if (it.coef.at(r, s)) out.rows[row + r].emplace_back(off + s, it.coef.at(r, s));
    }
    for (int r = 0; r < F.rank(); ++r) sort_row(out.rows[row + r], F.moduli[r]);
    row += F.rank();
  });
  return out;
}

// ---- cell bijection ----

namespace {

struct QCell {
  std::array<int, kMaxCellDim> lv{};
  int dim = 0;
  std::vector<int> a, q;
};

class QSide {
public:
  QSide(const TermPool &pool, const PointedOveralgebra &Q, const AbOveralgebra &M) : pool_(pool), Q_(Q), M_(M) {}

  // (base, local) value of a term at (a, q)
  auto eval(int t, const std::vector<int> &a, const std::vector<int> &q) const -> std::pair<int, int> {
    const auto &n = pool_.bank().node(t);
    if (n.var >= 0) return {a[n.var], q[n.var]};
    std::vector<int> as, qs;
    for (int k : n.kids) {
      auto [x, y] = eval(k, a, q);
      as.push_back(x);
      qs.push_back(y);
    }
    return {Q_.base.apply(n.op, as.data()), Q_.apply(n.op, as.data(), qs.data())};
  }
  void eval_level(int l, std::vector<int> &a, std::vector<int> &q) const {
    std::vector<int> na, nq;
    for (int t : pool_.level(l).terms) {
      auto [x, y] = eval(t, a, q);
      na.push_back(x);
      nq.push_back(y);
    }
    a = std::move(na);
    q = std::move(nq);
  }
  // linear part of the term over M at base arguments a: one matrix per variable
  auto lin(int t, const std::vector<int> &a) const -> std::pair<int, std::vector<Matrix>> {
    const auto &n = pool_.bank().node(t);
    int arity = static_cast<int>(a.size());
    if (n.var >= 0) {
      std::vector<Matrix> out;
      int v = a[n.var];
      for (int k = 0; k < arity; ++k)
        out.push_back(k == n.var ? identity_matrix(M_.groups[v].rank()) : zero_matrix(M_.groups[v].rank(), M_.groups[a[k]].rank()));
      return {v, out};
    }
    std::vector<int> vals;
    std::vector<std::vector<Matrix>> kids;
    for (int k : n.kids) {
      auto r = lin(k, a);
      vals.push_back(r.first);
      kids.push_back(std::move(r.second));
    }
    int v = M_.base.apply(n.op, vals.data());
    const auto &T = M_.groups[v];
    const auto &op = M_.opmap(n.op, vals.data());
    std::vector<Matrix> out;
    for (int k = 0; k < arity; ++k) {
      Matrix acc = zero_matrix(T.rank(), M_.groups[a[k]].rank());
      int off = 0;
      for (size_t j = 0; j < kids.size(); ++j) {
        int rj = M_.groups[vals[j]].rank();
        Matrix part = zero_matrix(T.rank(), rj);
        for (int r = 0; r < T.rank(); ++r)
          for (int s = 0; s < rj; ++s) part[r][s] = op[r][off + s];
        auto prod = matrix_product(part, kids[j][k], T, M_.groups[a[k]].rank());
        for (int r = 0; r < T.rank(); ++r)
          for (size_t s = 0; s < prod[r].size(); ++s) acc[r][s] = mod(acc[r][s] + prod[r][s], T.moduli[r]);
        off += rj;
      }
      out.push_back(std::move(acc));
    }
    return {v, out};
  }

private:
  const TermPool &pool_;
  const PointedOveralgebra &Q_;
  const AbOveralgebra &M_;
};

} // namespace

auto cell_bijection_check(const VarietyPresentation &V, const PointedOveralgebra &Q, const AbOveralgebra &M, int i,
                          const TruncationParams &params) -> BijectionReport {
  if (i < 0 || i > 2) throw Error(ErrorKind::Invariant, "cell bijection check supports dimensions 0..2");
  CloneComplex cx(V, M, &Q, params);
  const auto &cs = cx.cells();
  const auto &pool = cx.pool();
  auto T = total_algebra(Q);
  const auto &A = Q.base;
  int Bsz = cs.base_size();
  QSide qs(pool, Q, M);
  BijectionReport rep;
  rep.dim = i;
  rep.b_cells = cs.cell_count(i);
  std::map<i64, long> q_orders, b_orders;
  cs.for_each_cell(i, [&](const CellKey &c) {
    for (auto m : cs.fiber(c).moduli) ++b_orders[m];
  });

  auto to_b = [&](const std::vector<int> &a, const std::vector<int> &q) {
    std::int64_t code = 0;
    for (size_t k = 0; k < a.size(); ++k) code = code * Bsz + T.index(a[k], q[k]);
    return code;
  };
  auto blockify = [](const Matrix &m, int rows, int cols) {
    Block b;
    b.rows = rows;
    b.cols = cols;
    for (int r = 0; r < rows; ++r)
      for (int s = 0; s < cols; ++s) b.at(r, s) = m[r][s];
    return b;
  };

  auto visit = [&](const std::array<int, kMaxCellDim> &lv) {
    int n = i == 0 ? 1 : pool.level(lv[i - 1]).arity;
    std::vector<int> a(n, 0), q(n, 0);
    // odometer over base tuples, then fiber elements
    std::function<void(int)> rec = [&](int k) {
      if (k == n) {
        ++rep.q_cells;
        // value through the levels, keeping the intermediate tuples
        std::vector<std::vector<int>> ua(i + 1), uq(i + 1);
        ua[i] = a;
        uq[i] = q;
        for (int l = i; l-- > 0;) {
          ua[l] = ua[l + 1];
          uq[l] = uq[l + 1];
          qs.eval_level(lv[l], ua[l], uq[l]);
        }
        int base = ua[0][0], local = uq[0][0];
        const auto &F = M.groups[base];
        for (auto m : F.moduli) ++q_orders[m];
        CellKey b;
        b.dim = i;
        for (int l = 0; l < i; ++l) b.lv[l] = lv[l];
        b.bottoms = to_b(a, q);
        if (cs.value(b) != T.index(base, local)) ++rep.value_mismatches;
        if (cs.fiber(b).moduli != F.moduli) ++rep.fiber_mismatches;
        if (i == 0) return;
        Chain expect, got;
        for (int j = 0; j <= i; ++j) {
          expect.clear();
          if (j == 0) {
            int t = pool.level(lv[0]).terms[0];
            auto [v, blocks] = qs.lin(t, ua[1]);
            for (size_t kk = 0; kk < blocks.size(); ++kk) {
              ChainItem it;
              if (i == 1) {
                it.cell.dim = 0;
                it.cell.bottoms = T.index(ua[1][kk], uq[1][kk]);
              } else {
                it.cell.dim = i - 1;
                it.cell.lv[0] = pool.single(lv[1], static_cast<int>(kk));
                for (int l = 2; l < i; ++l) it.cell.lv[l - 1] = lv[l];
                it.cell.bottoms = to_b(a, q);
              }
              it.coef = blockify(blocks[kk], F.rank(), M.groups[ua[1][kk]].rank());
              expect.push_back(it);
            }
          } else {
            ChainItem it;
            it.cell.dim = i - 1;
            it.coef = blockify(identity_matrix(F.rank()), F.rank(), F.rank());
            if (j < i) {
              for (int l = 0; l < j - 1; ++l) it.cell.lv[l] = lv[l];
              it.cell.lv[j - 1] = pool.compose(lv[j - 1], lv[j]);
              for (int l = j + 1; l < i; ++l) it.cell.lv[l - 1] = lv[l];
              it.cell.bottoms = to_b(a, q);
            } else {
              for (int l = 0; l < i - 1; ++l) it.cell.lv[l] = lv[l];
              it.cell.bottoms = to_b(ua[i - 1], uq[i - 1]);
            }
            expect.push_back(it);
          }
          normalize_chain(expect, F);
          cs.face(b, j, got);
          normalize_chain(got, cs.fiber(b));
          bool same = expect.size() == got.size();
          for (size_t x = 0; same && x < got.size(); ++x) same = expect[x].cell == got[x].cell && expect[x].coef == got[x].coef;
          if (!same) ++rep.face_mismatches;
        }
        return;
      }
      for (int x = 0; x < A.size; ++x) {
        a[k] = x;
        for (int y = 0; y < Q.fiber[x]; ++y) {
          q[k] = y;
          rec(k + 1);
        }
      }
    };
    rec(0);
  };
  if (i == 0) {
    visit({});
  } else {
    cs.for_each_structure(i, visit);
  }
  rep.orders_equal = q_orders == b_orders;
  return rep;
}

} // namespace abelext
