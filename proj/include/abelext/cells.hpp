#pragma once

#include "abelext/overalgebra.hpp"
#include "abelext/term.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <vector>

namespace abelext {

struct TruncationParams {
  int depth = 2; // budget on distinct non-variable subterms per cell
  int arity = 3;
  int max_dim = 1;
  long cell_cap = 60'000'000;
  int unknown_cap = 4096; // unknowns left for the dense kernel solve
  int jobs = 1;
};

// Hash-consed terms; ids are assigned in creation order.
class TermBank {
public:
  struct Node {
    int var = -1, op = -1;
    std::vector<int> kids;
    int span = 0;
    std::vector<int> nonvar; // sorted ids of non-variable subterms, itself included
  };

  explicit TermBank(Signature sig);
  auto variable(int i) -> int;
  auto apply(int op, const std::vector<int> &kids) -> int;
  auto intern(const Term &t) -> int;
  auto substitute(int t, const std::vector<int> &s) -> int;
  // The substituted term when it is already in the bank, else -1; interns nothing.
  [[nodiscard]] auto find_substitute(int t, const std::vector<int> &s) const -> int;
  [[nodiscard]] auto node(int id) const -> const Node & { return nodes_[id]; }
  [[nodiscard]] auto size() const -> int { return static_cast<int>(nodes_.size()); }
  [[nodiscard]] auto to_term(int id) const -> Term;
  [[nodiscard]] auto cost(int id) const -> int { return static_cast<int>(nodes_[id].nonvar.size()); }
  [[nodiscard]] auto signature() const -> const Signature & { return sig_; }

private:
  Signature sig_;
  std::vector<Node> nodes_;
  std::map<std::pair<int, std::vector<int>>, int> index_;
};

// Joint cost of a tuple of terms.
auto tuple_cost(const TermBank &bank, const std::vector<int> &terms) -> int;

// Level tuples the pool may generate before it gives up with CapExceeded.
constexpr long kMaxLevels = 1'000'000;
// Largest composition table prepare_compositions() keeps.
constexpr long kMaxComposeTable = 10'000'000;

// The finite pool: terms of at most `arity` variables and cost <= depth, level tuples
// of length <= arity (and length 1), and the compositions that cells can reach.
class TermPool {
public:
  struct Level {
    std::vector<int> terms;
    int arity = 0, cost = 0;
  };

  TermPool(const Signature &sig, int depth, int arity);

  [[nodiscard]] auto bank() const -> const TermBank & { return bank_; }
  auto bank_mut() -> TermBank & { return bank_; }
  [[nodiscard]] auto depth() const -> int { return depth_; }
  [[nodiscard]] auto arity() const -> int { return arity_; }
  // terms with span <= n, sorted by (cost, id)
  [[nodiscard]] auto terms_of_arity(int n) const -> const std::vector<int> & { return terms_[n]; }
  [[nodiscard]] auto position(int n, int term) const -> int { return pos_[n][term]; }
  [[nodiscard]] auto in_pool(int term) const -> bool { return term < static_cast<int>(pos_[arity_].size()) && pos_[arity_][term] >= 0; }
  // level ids of length `len` over arity n, sorted by (cost, terms)
  [[nodiscard]] auto levels(int len, int n) const -> const std::vector<int> & { return tuples_[len][n]; }
  [[nodiscard]] auto level(int id) const -> const Level & { return levels_[id]; }
  [[nodiscard]] auto level_count() const -> int { return static_cast<int>(levels_.size()); }
  // -1 when the tuple is not a pool level
  [[nodiscard]] auto find_level(int n, const std::vector<int> &terms) const -> int;
  // level la after level lb (arity of la = length of lb); -1 when out of budget
  [[nodiscard]] auto compose(int la, int lb) const -> int;
  // Tabulates every in-budget composition so compose() becomes a lookup.
  void prepare_compositions();
  // the one-entry level (terms[k]) of the same arity
  [[nodiscard]] auto single(int l, int k) const -> int { return single_[l][k]; }
  // (u, lb) pairs with cost(u) + cost(lb) <= depth: the compositions used for class closure
  struct Composition {
    int outer, inner, result;
  };
  [[nodiscard]] auto compositions() const -> const std::vector<Composition> & { return comps_; }

private:
  TermBank bank_;
  int depth_, arity_;
  std::vector<std::vector<int>> terms_;
  std::vector<std::vector<int>> pos_;
  std::vector<Level> levels_;
  std::map<std::pair<int, std::vector<int>>, int> level_index_;
  std::vector<std::vector<std::vector<int>>> tuples_;
  std::vector<std::vector<int>> single_;
  std::vector<std::vector<int>> by_arity_; // level ids per arity in cost order
  std::unordered_map<std::uint64_t, int> compose_;
  bool all_composed_ = false;
  std::vector<Composition> comps_;

  auto add_level(int n, std::vector<int> terms) -> int;
};

// Term classes for a variety: union-find seeded by instances of the defining identities
// inside the pool and closed under in-budget composition. Sound, not complete.
struct TermClasses {
  std::vector<int> of;         // term id -> class id (-1 outside the pool)
  int count = 0;
  long seeds = 0;              // identity instances used
  std::vector<int> level_of;   // level id -> level class id
  int level_count = 0;
};
auto term_classes(TermPool &pool, const std::vector<Identity> &identities) -> TermClasses;

// Coefficient block: rows are target coordinates.
struct Block {
  int rows = 0, cols = 0;
  std::array<i64, 16> a{};
  [[nodiscard]] auto at(int r, int c) const -> i64 { return a[r * cols + c]; }
  auto at(int r, int c) -> i64 & { return a[r * cols + c]; }
  friend auto operator==(const Block &, const Block &) -> bool = default;
};

constexpr int kMaxCellDim = 5;

// A cell of dimension dim: levels L_0..L_{dim-1} and bottom elements encoded in mixed radix.
struct CellKey {
  std::array<int, kMaxCellDim> lv{};
  int dim = 0;
  std::int64_t bottoms = 0;
  friend auto operator==(const CellKey &, const CellKey &) -> bool = default;
  friend auto operator<=>(const CellKey &, const CellKey &) = default;
};

struct CellKeyHash {
  auto operator()(const CellKey &k) const noexcept -> std::size_t {
    std::uint64_t h = static_cast<std::uint64_t>(k.bottoms) * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(k.dim);
    for (int i = 0; i < k.dim; ++i) h = (h ^ static_cast<std::uint64_t>(k.lv[i])) * 0x100000001B3ULL;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

// One summand coef * [cell] of a face; coef maps the cell's fiber into the face owner's fiber.
struct ChainItem {
  CellKey cell;
  Block coef;
};
using Chain = std::vector<ChainItem>;

// Cells of X^i_V(B) for an algebra B with coefficients N over B, on a term pool.
class CellSpace {
public:
  CellSpace(const TermPool &pool, const AbOveralgebra &N);

  [[nodiscard]] auto pool() const -> const TermPool & { return pool_; }
  [[nodiscard]] auto coefficients() const -> const AbOveralgebra & { return N_; }
  [[nodiscard]] auto base_size() const -> int { return N_.base.size; }
  [[nodiscard]] auto bottom_count(int len) const -> std::int64_t { return pow_[len]; }
  // number of bottom elements of a cell
  [[nodiscard]] auto bottom_length(const CellKey &c) const -> int;
  // element of B the cell lands on
  [[nodiscard]] auto value(const CellKey &c) const -> int;
  [[nodiscard]] auto fiber(const CellKey &c) const -> const FinAbGroup & { return N_.groups[value(c)]; }

  // Calls visit(levels) for every level part of dimension i in enumeration order.
  void for_each_structure(int i, const std::function<void(const std::array<int, kMaxCellDim> &)> &visit) const;
  // Applies visit(const CellKey&) to every cell of dimension i in enumeration order; bottoms vary fastest.
  template <class F>
  void for_each_cell(int i, F &&visit) const;
  [[nodiscard]] auto cell_count(int i) const -> long;

  // Face j of c as a chain of (i-1)-cells.
  void face(const CellKey &c, int j, Chain &out) const;
  // d_j d_k c: face k, then face j; combined and sorted
  void double_face(const CellKey &c, int j, int k, Chain &out) const;
  // all d_j d_k c at out[j * (dim + 1) + k], 0 <= j < dim, 0 <= k <= dim
  void double_faces(const CellKey &c, std::vector<Chain> &out) const;

  auto evaluate_level(int level, std::int64_t bottoms) const -> std::int64_t;

private:
  const TermPool &pool_;
  AbOveralgebra N_;
  int B_;
  std::vector<std::int64_t> pow_;
  // per arity n, per pool term position, per bottoms code: value and linear blocks
  std::vector<std::vector<int>> val_;
  std::vector<std::vector<Block>> lin_; // [n][(pos * |B|^n + code) * n + k]
};

// Sorts by cell, sums coefficients of equal cells modulo the owner fiber, drops zeros.
void normalize_chain(Chain &c, const FinAbGroup &owner);

template <class F>
void CellSpace::for_each_cell(int i, F &&visit) const {
  if (i == 0) {
    CellKey k;
    for (int b = 0; b < B_; ++b) {
      k.bottoms = b;
      visit(k);
    }
    return;
  }
  CellKey k;
  k.dim = i;
  for_each_structure(i, [&](const std::array<int, kMaxCellDim> &s) {
    for (int j = 0; j < i; ++j) k.lv[j] = s[j];
    int len = pool_.level(s[i - 1]).arity;
    for (std::int64_t b = 0; b < pow_[len]; ++b) {
      k.bottoms = b;
      visit(k);
    }
  });
}

// The same cell with levels replaced by level classes.
auto class_key(const CellKey &c, const TermClasses &tc) -> CellKey;

} // namespace abelext
