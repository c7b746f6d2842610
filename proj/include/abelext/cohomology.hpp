#pragma once

#include "abelext/cells.hpp"
#include "abelext/linalg.hpp"

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace abelext {

// The truncated complex C^*_V(Q, M), realized on B = A (Q absent) or B = A x| Q with
// coefficients restricted along the projection.
class CloneComplex {
public:
  CloneComplex(const VarietyPresentation &V, const AbOveralgebra &M, const PointedOveralgebra *Q, const TruncationParams &params);
  CloneComplex(const CloneComplex &) = delete;
  auto operator=(const CloneComplex &) -> CloneComplex & = delete;

  [[nodiscard]] auto variety() const -> const VarietyPresentation & { return V_; }
  [[nodiscard]] auto params() const -> const TruncationParams & { return params_; }
  [[nodiscard]] auto pool() const -> const TermPool & { return *pool_; }
  [[nodiscard]] auto classes() const -> const TermClasses & { return classes_; }
  [[nodiscard]] auto cells() const -> const CellSpace & { return *cells_; }
  [[nodiscard]] auto coefficients() const -> const AbOveralgebra & { return cells_->coefficients(); }

private:
  VarietyPresentation V_;
  TruncationParams params_;
  std::unique_ptr<TermPool> pool_;
  TermClasses classes_;
  std::unique_ptr<CellSpace> cells_;
};

// Cochains of dimension i constant on cell classes: one block of unknowns per class.
struct CochainLayout {
  int dim = 0;
  long cells = 0;
  std::vector<CellKey> reps;  // first cell of each class in enumeration order
  std::vector<int> values;    // element of B under each class
  std::vector<int> offset;    // first unknown of each class
  Vec moduli;                 // one entry per unknown
  std::unordered_map<CellKey, int, CellKeyHash> index; // class key -> class

  [[nodiscard]] auto unknowns() const -> int { return static_cast<int>(moduli.size()); }
  [[nodiscard]] auto class_count() const -> int { return static_cast<int>(reps.size()); }
  // -1 when the cell is not in the layout
  [[nodiscard]] auto class_of(const CellKey &c, const TermClasses &tc) const -> int;
};

// Throws Inconclusive when two cells of one class land on different elements and
// CapExceeded when X^i exceeds the cell cap.
auto build_layout(const CloneComplex &cx, int i) -> CochainLayout;

// Rows of (d f)(c) for a cell c of dimension lower.dim + 1: one sparse form per coordinate of c's fiber.
void coboundary_rows(const CloneComplex &cx, const CochainLayout &lower, const CellKey &c, std::vector<SparseRow> &rows);

struct ComplexCheck {
  int dim = 0;
  long cells = 0;
  long simplicial_failures = 0;
  long boundary_failures = 0;
  std::string first_failure; // empty when both checks pass
  double seconds = 0;
  [[nodiscard]] auto ok() const -> bool { return simplicial_failures == 0 && boundary_failures == 0; }
};

// Checks d_j d_k = d_{k-1} d_j (j < k) and sum (-1)^{j+k} d_j d_k = 0 on every cell of dimension i >= 2.
auto check_complex(const CloneComplex &cx, int i) -> ComplexCheck;

struct CohomologyDim {
  int dim = 0;
  long cells = 0;
  int classes = 0;
  int unknowns = 0;
  long rows = 0, distinct_rows = 0;
  bool computed = false;
  std::string status; // "ok" or the reason it was skipped
  Subgroup cocycles, coboundaries;
  QuotientGroup group;
  [[nodiscard]] auto invariant_factors() const -> const Vec & { return group.factors(); }
};

// Kernel of d on class cochains of dimension lower.dim, from every cell one dimension up;
// throws CapExceeded when more than unknown_cap unknowns survive elimination.
auto cocycle_group(const CloneComplex &cx, const CochainLayout &lower, long *rows = nullptr, long *distinct = nullptr) -> Subgroup;
// Image of d from class cochains of dimension below.dim to those of dimension above.dim;
// throws Inconclusive when a coboundary is not constant on a class.
auto coboundary_group(const CloneComplex &cx, const CochainLayout &below, const CochainLayout &above) -> Subgroup;

struct CohomologyReport {
  TruncationParams params;
  int base_size = 0;
  int pool_terms = 0, term_classes = 0, level_classes = 0;
  long identity_seeds = 0;
  std::vector<long> cell_counts;     // dimensions 0..max_dim+1
  std::vector<ComplexCheck> checks;  // dimensions 2..max_dim+1
  std::vector<CohomologyDim> groups; // dimensions 0..max_dim
  Vec h1_exact;
  std::optional<bool> h1_agrees;     // truncated H^1 against h1_exact when both exist
  std::vector<std::string> warnings;
};

auto cohomology(const VarietyPresentation &V, const AbOveralgebra &M, const PointedOveralgebra *Q, const TruncationParams &params)
    -> CohomologyReport;

// Exact H^1 through the extension group.
auto h1_exact(const AbOveralgebra &M, const VarietyPresentation &V, const PointedOveralgebra *Q = nullptr) -> Vec;

// Matrix of the face map d_j: C^{i-1} -> C^i on the cell basis (no classes). Rows: X^i cells times
// fiber coordinates; columns: X^{i-1} cells times fiber coordinates, in enumeration order.
struct CellMatrix {
  Vec row_moduli, col_moduli;
  std::vector<SparseRow> rows;
};
auto face_map(const CloneComplex &cx, int i, int j, long cap = 200000) -> CellMatrix;

struct BijectionReport {
  int dim = 0;
  long q_cells = 0, b_cells = 0;
  long value_mismatches = 0, fiber_mismatches = 0, face_mismatches = 0;
  bool orders_equal = false;
  [[nodiscard]] auto ok() const -> bool {
    return q_cells == b_cells && orders_equal && value_mismatches == 0 && fiber_mismatches == 0 && face_mismatches == 0;
  }
};

// Cells over Q evaluated in Q and M directly, mapped to cells over A x| Q; compares values,
// fibers and every face chain. Requires i <= 2.
auto cell_bijection_check(const VarietyPresentation &V, const PointedOveralgebra &Q, const AbOveralgebra &M, int i,
                          const TruncationParams &params) -> BijectionReport;

} // namespace abelext
