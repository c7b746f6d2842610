#pragma once

#include "abelext/linalg.hpp"

#include <vector>

namespace abelext {

// Z/m_0 + ... + Z/m_{r-1}; elements are residue vectors.
struct FinAbGroup {
  Vec moduli;

  [[nodiscard]] auto rank() const -> int { return static_cast<int>(moduli.size()); }
  [[nodiscard]] auto order() const -> BigInt;
  // Order as a machine integer; throws CapExceeded past `limit`.
  [[nodiscard]] auto size(i64 limit = i64{1} << 40) const -> i64;
  [[nodiscard]] auto zero() const -> Vec { return Vec(moduli.size(), 0); }
  [[nodiscard]] auto reduce(Vec v) const -> Vec;
  [[nodiscard]] auto add(const Vec &a, const Vec &b) const -> Vec;
  [[nodiscard]] auto sub(const Vec &a, const Vec &b) const -> Vec;
  [[nodiscard]] auto neg(const Vec &a) const -> Vec;
  [[nodiscard]] auto contains(const Vec &a) const -> bool;
  // mixed radix, first coordinate most significant
  [[nodiscard]] auto encode(const Vec &a) const -> i64;
  [[nodiscard]] auto decode(i64 index) const -> Vec;
  [[nodiscard]] auto canonical() const -> Vec;
  [[nodiscard]] auto exponent() const -> i64 { return lcm_of(moduli); }

  friend auto operator==(const FinAbGroup &, const FinAbGroup &) -> bool = default;
};

auto direct_sum(const std::vector<FinAbGroup> &parts) -> FinAbGroup;

// Homomorphism matrices: rows are target coordinates, column j is the image of source generator j.
using Matrix = std::vector<Vec>;

auto zero_matrix(int rows, int cols) -> Matrix;
auto identity_matrix(int n) -> Matrix;
auto matrix_cols(const Matrix &M, int fallback) -> int;
auto apply_matrix(const Matrix &M, const Vec &x, const FinAbGroup &target) -> Vec;
// A after B; `cols` is the source width, needed when B has no rows
auto matrix_product(const Matrix &A, const Matrix &B, const FinAbGroup &target, int cols = -1) -> Matrix;
auto reduce_matrix(Matrix M, const FinAbGroup &target) -> Matrix;
// Shape plus well-definedness: m_j * column j = 0 in the target.
auto is_hom_matrix(const Matrix &M, const FinAbGroup &source, const FinAbGroup &target) -> bool;

} // namespace abelext
