#pragma once

#include <Eigen/Dense>

#include <array>
#include <span>
#include <string>
#include <vector>

#include "gdq/errors.hpp"
#include "gdq/grid.hpp"

namespace gdq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// First-order weighting coefficients from the Lagrange product formula.
/// Diagonal entries are the negative off-diagonal row sums.
inline Matrix weights_first_order(std::span<const double> x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  if (n < 2) throw DomainError("weights need at least two points");
  // P(x_i) = prod_{j != i} (x_i - x_j)
  std::vector<double> p(x.size(), 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) p[i] *= x[i] - x[j];
    }
  }
  Matrix c = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double diag = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      c(i, j) = p[i] / ((x[i] - x[j]) * p[j]);
      diag -= c(i, j);
    }
    c(i, i) = diag;
  }
  return c;
}

inline Matrix weights_first_order(const Grid1D& grid) { return weights_first_order(grid.points()); }

namespace detail {

inline Matrix recursion_step(std::span<const double> x, const Matrix& first, const Matrix& prev, int order) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Matrix next = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double diag = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      next(i, j) = order * (prev(i, i) * first(i, j) - prev(i, j) / (x[i] - x[j]));
      diag -= next(i, j);
    }
    next(i, i) = diag;
  }
  return next;
}

}  // namespace detail

/// Order-m coefficients (m in 2..4) by recursion from the first-order matrix.
inline Matrix weights_higher_order(std::span<const double> x, const Matrix& first, int m) {
  if (m < 2 || m > 4) throw DomainError("derivative order must be in 2..4, got " + std::to_string(m));
  const auto n = static_cast<Eigen::Index>(x.size());
  if (first.rows() != n || first.cols() != n) throw DomainError("first-order matrix does not match grid");
  Matrix prev = first;
  for (int order = 2; order <= m; ++order) prev = detail::recursion_step(x, first, prev, order);
  return prev;
}

inline Matrix weights_higher_order(const Grid1D& grid, const Matrix& first, int m) {
  return weights_higher_order(grid.points(), first, m);
}

/// Differentiation matrices of orders 1-4 for one grid, built eagerly.
class DiffMatrixSet {
 public:
  explicit DiffMatrixSet(const Grid1D& grid) : grid_(grid) {
    const auto x = grid.points();
    mats_[0] = weights_first_order(x);
    for (int m = 2; m <= 4; ++m) mats_[m - 1] = detail::recursion_step(x, mats_[0], mats_[m - 2], m);
  }

  [[nodiscard]] std::size_t n() const { return grid_.size(); }
  [[nodiscard]] const Grid1D& grid() const { return grid_; }

  [[nodiscard]] const Matrix& order(int m) const {
    if (m < 1 || m > 4) throw DomainError("derivative order must be in 1..4");
    return mats_[m - 1];
  }

 private:
  Grid1D grid_;
  std::array<Matrix, 4> mats_;
};

inline std::vector<double> apply_derivative(const Matrix& d, std::span<const double> values) {
  if (d.cols() != static_cast<Eigen::Index>(values.size())) {
    throw DomainError("apply_derivative: matrix has " + std::to_string(d.cols()) +
                      " columns but " + std::to_string(values.size()) + " values were given");
  }
  std::vector<double> out(static_cast<std::size_t>(d.rows()), 0.0);
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < d.cols(); ++j) s += d(i, j) * values[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

}  // namespace gdq
