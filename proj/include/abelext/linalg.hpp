#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace abelext {

using i64 = std::int64_t;
using Vec = std::vector<i64>;
using BigInt = boost::multiprecision::cpp_int;

auto mod(i64 a, i64 m) -> i64;
auto mulmod(i64 a, i64 b, i64 m) -> i64;
auto addmod(i64 a, i64 b, i64 m) -> i64;

struct Egcd {
  i64 g, s, t; // s*a + t*b = g >= 0
};
auto egcd(i64 a, i64 b) -> Egcd;
auto gcd64(i64 a, i64 b) -> i64;
auto lcm64(i64 a, i64 b) -> i64;
auto lcm_of(const Vec &moduli) -> i64;

// Subgroup of Z/m_0 + ... + Z/m_{r-1} in echelon form: the pivot at coordinate i
// has zeros before i and a divisor of m_i at i.
class Subgroup {
public:
  Subgroup() = default;
  explicit Subgroup(Vec moduli);

  // Returns true when the subgroup grew.
  auto insert(Vec v) -> bool;
  [[nodiscard]] auto contains(Vec v) const -> bool;
  [[nodiscard]] auto order() const -> BigInt;
  [[nodiscard]] auto moduli() const -> const Vec & { return moduli_; }
  [[nodiscard]] auto pivot_count() const -> int { return static_cast<int>(rows_.size()); }
  [[nodiscard]] auto pivot_coordinate(int k) const -> int { return cols_[k]; }
  [[nodiscard]] auto pivot(int k) const -> const Vec & { return rows_[k]; }
  // Coefficients c with v = sum c_k pivot(k), or nullopt when v is outside.
  [[nodiscard]] auto express(Vec v) const -> std::optional<Vec>;
  [[nodiscard]] auto subset_of(const Subgroup &other) const -> bool;
  [[nodiscard]] auto reduce(Vec v) const -> Vec;

private:
  Vec moduli_;
  std::vector<int> where_; // coordinate -> pivot slot or -1
  std::vector<int> cols_;  // slot -> coordinate
  std::vector<Vec> rows_;
};

using SparseRow = std::vector<std::pair<int, i64>>;

// Kernel of a stream of linear forms Z/m_0 + ... -> Z/m, one form at a time.
class KernelSolver {
public:
  explicit KernelSolver(Vec moduli);
  void add(SparseRow row, i64 modulus);
  [[nodiscard]] auto kernel() const -> Subgroup;
  [[nodiscard]] auto basis_size() const -> int { return static_cast<int>(basis_.size()); }
  [[nodiscard]] auto rows_seen() const -> long { return rows_seen_; }
  [[nodiscard]] auto rows_distinct() const -> long { return static_cast<long>(seen_.size()); }

private:
  Vec moduli_;
  std::vector<Vec> basis_;
  std::set<std::pair<i64, SparseRow>> seen_;
  long rows_seen_ = 0;
};

// Kernel of streamed linear forms. An unknown that appears with an invertible coefficient in a
// form of its own modulus is solved for and substituted away; the remaining forms go to a
// KernelSolver over the surviving unknowns, and the kernel is lifted back.
class EliminationKernel {
public:
  explicit EliminationKernel(Vec moduli);
  void add(SparseRow row, i64 modulus);
  // Throws CapExceeded when more than free_cap unknowns survive elimination.
  [[nodiscard]] auto kernel(int free_cap) -> Subgroup;
  [[nodiscard]] auto rows_seen() const -> long { return rows_seen_; }
  [[nodiscard]] auto rows_distinct() const -> long { return static_cast<long>(seen_.size()); }
  [[nodiscard]] auto eliminated() const -> int { return eliminated_; }

private:
  Vec moduli_;
  std::vector<std::optional<SparseRow>> expr_; // x_p = sum e_s x_s (mod m_p) for eliminated p
  std::vector<std::pair<SparseRow, i64>> deferred_;
  std::set<std::pair<i64, SparseRow>> seen_;
  long rows_seen_ = 0;
  int eliminated_ = 0;

  auto resolve(SparseRow row, i64 modulus) -> SparseRow;
};

struct SmithResult {
  Vec diag;              // one entry per column, in 1..E (E marks a free Z/E summand)
  std::vector<Vec> V;    // x -> x V gives diagonal coordinates
  std::vector<Vec> Vinv; // row i of Vinv is the i-th diagonal generator
};
// Diagonalizes the row space of `rows` (each of length `cols`) modulo E, with diag entries in divisor chain.
auto smith_mod(std::vector<Vec> rows, int cols, i64 E) -> SmithResult;

// Invariant factors of a direct sum of cyclic groups.
auto canonical_factors(const Vec &moduli) -> Vec;

// K / L for subgroups L <= K of the same ambient group.
class QuotientGroup {
public:
  QuotientGroup() = default;
  QuotientGroup(const Subgroup &K, const Subgroup &L);

  [[nodiscard]] auto factors() const -> const Vec & { return factors_; }
  [[nodiscard]] auto generators() const -> const std::vector<Vec> & { return gens_; }
  // Coordinates of x (which must lie in K) modulo the factors.
  [[nodiscard]] auto classify(const Vec &x) const -> Vec;
  [[nodiscard]] auto order() const -> BigInt;

private:
  Subgroup K_;
  Vec factors_;
  std::vector<Vec> gens_;
  std::vector<Vec> V_; // restricted to the kept columns
  std::vector<int> keep_;
};

// Solves sum_j A_ij x_j = b_i (mod row moduli) for x in the ambient group; rows as sparse forms.
auto solve_affine(const Vec &moduli, const std::vector<SparseRow> &rows, const Vec &row_moduli, const Vec &rhs)
    -> std::optional<Vec>;

auto to_string(const BigInt &x) -> std::string;

} // namespace abelext
