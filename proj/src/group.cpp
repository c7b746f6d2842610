#include "abelext/group.hpp"

#include "abelext/error.hpp"

namespace abelext {

auto FinAbGroup::order() const -> BigInt {
  BigInt n = 1;
  for (i64 m : moduli) n *= m;
  return n;
}

auto FinAbGroup::size(i64 limit) const -> i64 {
  BigInt n = order();
  if (n > limit) throw Error(ErrorKind::CapExceeded, "group of order " + n.str() + " is too large to enumerate");
  return static_cast<i64>(n);
}

auto FinAbGroup::reduce(Vec v) const -> Vec {
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = mod(v[i], moduli[i]);
  return v;
}

auto FinAbGroup::add(const Vec &a, const Vec &b) const -> Vec {
  Vec out(moduli.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mod(a[i] + b[i], moduli[i]);
  return out;
}

auto FinAbGroup::sub(const Vec &a, const Vec &b) const -> Vec {
  Vec out(moduli.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mod(a[i] - b[i], moduli[i]);
  return out;
}

auto FinAbGroup::neg(const Vec &a) const -> Vec {
  Vec out(moduli.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mod(-a[i], moduli[i]);
  return out;
}

auto FinAbGroup::contains(const Vec &a) const -> bool {
  if (a.size() != moduli.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] < 0 || a[i] >= moduli[i]) return false;
  return true;
}

auto FinAbGroup::encode(const Vec &a) const -> i64 {
  i64 x = 0;
  for (std::size_t i = 0; i < moduli.size(); ++i) x = x * moduli[i] + mod(a[i], moduli[i]);
  return x;
}

auto FinAbGroup::decode(i64 index) const -> Vec {
  Vec out(moduli.size());
  for (int i = rank() - 1; i >= 0; --i) {
    out[i] = index % moduli[i];
    index /= moduli[i];
  }
  return out;
}

auto FinAbGroup::canonical() const -> Vec { return canonical_factors(moduli); }

auto direct_sum(const std::vector<FinAbGroup> &parts) -> FinAbGroup {
  FinAbGroup g;
  for (const auto &p : parts) g.moduli.insert(g.moduli.end(), p.moduli.begin(), p.moduli.end());
  return g;
}

auto zero_matrix(int rows, int cols) -> Matrix { return Matrix(rows, Vec(cols, 0)); }

auto identity_matrix(int n) -> Matrix {
  Matrix M = zero_matrix(n, n);
  for (int i = 0; i < n; ++i) M[i][i] = 1;
  return M;
}

auto matrix_cols(const Matrix &M, int fallback) -> int {
  return M.empty() ? fallback : static_cast<int>(M[0].size());
}

auto apply_matrix(const Matrix &M, const Vec &x, const FinAbGroup &target) -> Vec {
  Vec out(target.moduli.size(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    i64 m = target.moduli[i], acc = 0;
    const Vec &row = M[i];
    for (std::size_t j = 0; j < row.size(); ++j)
      if (row[j] != 0 && x[j] != 0) acc = mod(acc + mulmod(row[j], x[j], m), m);
    out[i] = acc;
  }
  return out;
}

auto matrix_product(const Matrix &A, const Matrix &B, const FinAbGroup &target, int cols) -> Matrix {
  int inner = static_cast<int>(B.size());
  if (!B.empty()) cols = static_cast<int>(B[0].size());
  if (cols < 0) cols = 0;
  Matrix C = zero_matrix(static_cast<int>(A.size()), cols);
  for (std::size_t i = 0; i < A.size(); ++i) {
    i64 m = target.moduli[i];
    for (int k = 0; k < inner; ++k) {
      if (A[i][k] == 0) continue;
      for (int j = 0; j < cols; ++j) C[i][j] = mod(C[i][j] + mulmod(A[i][k], B[k][j], m), m);
    }
  }
  return C;
}

auto reduce_matrix(Matrix M, const FinAbGroup &target) -> Matrix {
  for (std::size_t i = 0; i < M.size(); ++i)
    for (auto &x : M[i]) x = mod(x, target.moduli[i]);
  return M;
}

auto is_hom_matrix(const Matrix &M, const FinAbGroup &source, const FinAbGroup &target) -> bool {
  if (static_cast<int>(M.size()) != target.rank()) return false;
  for (std::size_t i = 0; i < M.size(); ++i) {
    if (static_cast<int>(M[i].size()) != source.rank()) return false;
    for (int j = 0; j < source.rank(); ++j)
      if (mulmod(M[i][j], source.moduli[j], target.moduli[i]) != 0) return false;
  }
  return true;
}

} // namespace abelext
