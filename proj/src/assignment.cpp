#include "mot3d/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mot3d {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols,
                       std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("CostMatrix: data size does not match shape");
  }
}

CostMatrix CostMatrix::transposed() const {
  CostMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

double total_cost(const CostMatrix& cost, const Assignment& assignment) {
  double sum = 0.0;
  for (const auto& [r, c] : assignment.pairs) sum += cost(r, c);
  return sum;
}

namespace {

struct DualSolution {
  std::vector<std::size_t> row_to_col;
  std::vector<double> u;  // row potentials
  std::vector<double> v;  // column potentials, <= 0, zero on unmatched columns
};

// Shortest augmenting path Hungarian method for rows <= cols. Rows are
// inserted in index order and columns are scanned in index order, so the
// result depends only on the input values.
DualSolution solve_wide(const CostMatrix& a) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<double> minv(m + 1);
  std::vector<char> used(m + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  DualSolution out;
  out.row_to_col.assign(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) out.row_to_col[p[j] - 1] = j - 1;
  }
  out.u.assign(u.begin() + 1, u.end());
  out.v.assign(v.begin() + 1, v.end());
  return out;
}

// Optimal assignments are exactly the matchings in the tight-edge graph
// that cover every required vertex (all vertices of the smaller side, plus
// larger-side vertices with a strictly negative potential). Rows are fixed
// greedily to their lowest feasible column; feasibility of the remainder
// is two covering checks, which suffice by the Mendelsohn-Dulmage theorem.
class TieBreaker {
 public:
  TieBreaker(std::vector<std::vector<std::size_t>> row_adj,
             std::vector<std::vector<std::size_t>> col_adj,
             std::vector<char> row_required, std::vector<char> col_required)
      : row_adj_(std::move(row_adj)),
        col_adj_(std::move(col_adj)),
        row_required_(std::move(row_required)),
        col_required_(std::move(col_required)),
        col_taken_(col_adj_.size(), 0) {}

  Assignment run() {
    Assignment out;
    const std::size_t n = row_adj_.size();
    for (std::size_t i = 0; i < n; ++i) {
      bool fixed = false;
      for (std::size_t j : row_adj_[i]) {
        if (col_taken_[j]) continue;
        col_taken_[j] = 1;
        if (feasible(i + 1)) {
          out.pairs.emplace_back(i, j);
          fixed = true;
          break;
        }
        col_taken_[j] = 0;
      }
      if (!fixed && row_required_[i]) {
        throw std::logic_error("solve_min_cost: no feasible tight completion");
      }
    }
    return out;
  }

 private:
  bool feasible(std::size_t first_row) {
    const std::size_t n = row_adj_.size();
    const std::size_t m = col_adj_.size();

    // Cover every required remaining row.
    match_.assign(m, kNone);
    for (std::size_t r = first_row; r < n; ++r) {
      if (!row_required_[r]) continue;
      seen_.assign(m, 0);
      if (!augment_row(r, first_row)) return false;
    }
    // Cover every required free column.
    match_.assign(n, kNone);
    for (std::size_t c = 0; c < m; ++c) {
      if (!col_required_[c] || col_taken_[c]) continue;
      seen_.assign(n, 0);
      if (!augment_col(c, first_row)) return false;
    }
    return true;
  }

  bool augment_row(std::size_t r, std::size_t first_row) {
    for (std::size_t c : row_adj_[r]) {
      if (col_taken_[c] || seen_[c]) continue;
      seen_[c] = 1;
      if (match_[c] == kNone || augment_row(match_[c], first_row)) {
        match_[c] = r;
        return true;
      }
    }
    return false;
  }

  bool augment_col(std::size_t c, std::size_t first_row) {
    for (std::size_t r : col_adj_[c]) {
      if (r < first_row || seen_[r]) continue;
      seen_[r] = 1;
      if (match_[r] == kNone || augment_col(match_[r], first_row)) {
        match_[r] = c;
        return true;
      }
    }
    return false;
  }

  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::vector<std::vector<std::size_t>> row_adj_;
  std::vector<std::vector<std::size_t>> col_adj_;
  std::vector<char> row_required_;
  std::vector<char> col_required_;
  std::vector<char> col_taken_;
  std::vector<std::size_t> match_;
  std::vector<char> seen_;
};

}  // namespace

Assignment solve_min_cost(const CostMatrix& cost) {
  const std::size_t n = cost.rows();
  const std::size_t m = cost.cols();
  if (n == 0 || m == 0) return {};

  double scale = 1.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      const double x = cost(r, c);
      if (!std::isfinite(x)) {
        throw std::invalid_argument("solve_min_cost: non-finite cost entry");
      }
      scale = std::max(scale, std::abs(x));
    }
  }
  const double tol = 1e-9 * scale;

  // Potentials and one optimal matching in the original orientation.
  const bool transpose = n > m;
  std::vector<double> u, v;
  std::vector<std::pair<std::size_t, std::size_t>> matched;
  if (!transpose) {
    DualSolution s = solve_wide(cost);
    u = std::move(s.u);
    v = std::move(s.v);
    for (std::size_t r = 0; r < n; ++r) matched.emplace_back(r, s.row_to_col[r]);
  } else {
    DualSolution s = solve_wide(cost.transposed());
    u = std::move(s.v);
    v = std::move(s.u);
    for (std::size_t c = 0; c < m; ++c) matched.emplace_back(s.row_to_col[c], c);
    std::sort(matched.begin(), matched.end());
  }

  std::vector<std::vector<std::size_t>> row_adj(n), col_adj(m);
  std::size_t tight_edges = 0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      if (cost(r, c) - u[r] - v[c] <= tol) {
        row_adj[r].push_back(c);
        col_adj[c].push_back(r);
        ++tight_edges;
      }
    }
  }
  if (tight_edges == matched.size()) return Assignment{std::move(matched)};

  std::vector<char> row_required(n, 1), col_required(m, 1);
  if (!transpose) {
    for (std::size_t c = 0; c < m; ++c) col_required[c] = v[c] < -tol;
  } else {
    for (std::size_t r = 0; r < n; ++r) row_required[r] = u[r] < -tol;
  }
  return TieBreaker(std::move(row_adj), std::move(col_adj),
                    std::move(row_required), std::move(col_required))
      .run();
}

}  // namespace mot3d
