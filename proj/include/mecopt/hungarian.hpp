#ifndef MECOPT_HUNGARIAN_HPP
#define MECOPT_HUNGARIAN_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace mecopt {

template <typename Scalar>
struct Assignment {
  /// Column assigned to each row; nullopt when the row could only be matched
  /// to an infinite-cost (infeasible) or padding column.
  std::vector<std::optional<Eigen::Index>> column_of_row;
  /// Sum of the finite assigned costs, accumulated in row order.
  Scalar total = Scalar(0);

  std::size_t assigned_count() const {
    std::size_t n = 0;
    for (const auto& c : column_of_row) n += c.has_value();
    return n;
  }
};

/// Minimum-cost one-to-one assignment of rows to columns (Hungarian method with
/// row-by-row shortest augmenting paths and dual potentials, O(n^2 m)).
///
/// Entries must be >= 0 or +inf. Infinite entries are replaced by a penalty
/// larger than any finite assignment total, so the solution first maximizes
/// the number of rows placed on finite entries and then minimizes their cost.
/// More rows than columns are handled by padding with zero-cost columns;
/// rows landing on padding are reported unassigned. Ties resolve toward the
/// lower column index.
template <typename Derived>
Assignment<typename Derived::Scalar> hungarian(const Eigen::MatrixBase<Derived>& cost) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  const Eigen::Index rows = cost.rows();
  const Eigen::Index original_cols = cost.cols();
  Assignment<Scalar> result;
  result.column_of_row.assign(static_cast<std::size_t>(rows), std::nullopt);
  if (rows == 0) return result;

  Scalar finite_sum(0);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < original_cols; ++j) {
      if (std::isfinite(cost(i, j))) finite_sum += cost(i, j);
    }
  }
  const Scalar penalty = finite_sum > Scalar(0) ? Scalar(3) * finite_sum : Scalar(1);

  const Eigen::Index cols = std::max(rows, original_cols);
  Matrix a = Matrix::Zero(rows, cols);
  a.leftCols(original_cols) = cost.unaryExpr([&](Scalar c) { return std::isfinite(c) ? c : penalty; });

  // 1-based arrays; column 0 is the virtual source of each augmenting search.
  const Scalar inf = std::numeric_limits<Scalar>::has_infinity ? std::numeric_limits<Scalar>::infinity()
                                                                : std::numeric_limits<Scalar>::max();
  std::vector<Scalar> u(static_cast<std::size_t>(rows) + 1, Scalar(0));
  std::vector<Scalar> v(static_cast<std::size_t>(cols) + 1, Scalar(0));
  std::vector<Eigen::Index> owner(static_cast<std::size_t>(cols) + 1, 0);
  std::vector<Eigen::Index> way(static_cast<std::size_t>(cols) + 1, 0);

  for (Eigen::Index i = 1; i <= rows; ++i) {
    owner[0] = i;
    Eigen::Index j0 = 0;
    std::vector<Scalar> min_slack(static_cast<std::size_t>(cols) + 1, inf);
    std::vector<bool> used(static_cast<std::size_t>(cols) + 1, false);
    do {
      used[j0] = true;
      const Eigen::Index i0 = owner[j0];
      Scalar delta = inf;
      Eigen::Index j1 = 0;
      for (Eigen::Index j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const Scalar reduced = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (reduced < min_slack[j]) {
          min_slack[j] = reduced;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (Eigen::Index j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const Eigen::Index j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  for (Eigen::Index j = 1; j <= cols; ++j) {
    if (owner[j] == 0) continue;
    const Eigen::Index row = owner[j] - 1, col = j - 1;
    if (col < original_cols && std::isfinite(cost(row, col))) {
      result.column_of_row[static_cast<std::size_t>(row)] = col;
    }
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (const auto& c = result.column_of_row[static_cast<std::size_t>(i)]) result.total += cost(i, *c);
  }
  return result;
}

}  // namespace mecopt

#endif  // MECOPT_HUNGARIAN_HPP
