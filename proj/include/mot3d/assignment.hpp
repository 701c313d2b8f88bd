// Optimal rectangular linear assignment (Kuhn-Munkres with shortest
// augmenting paths), shared by track association and evaluation matching.

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace mot3d {

/// Dense row-major cost matrix. Entries must be finite; callers express
/// infeasible pairs with a large finite sentinel.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  CostMatrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Assignment {
  /// (row, col) pairs sorted by row; each row and column appears at most once.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Returns min(rows, cols) pairs of minimum total cost.
///
/// Among equal-cost optima the pair list that is lexicographically smallest
/// (lowest row first, then lowest column) is returned. Costs within
/// 1e-9 * max(1, max|c|) of each other count as equal. Throws
/// std::invalid_argument if any entry is not finite.
Assignment solve_min_cost(const CostMatrix& cost);

/// Sum of the assigned entries, accumulated in pair order.
double total_cost(const CostMatrix& cost, const Assignment& assignment);

}  // namespace mot3d
