#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gdq/errors.hpp"

namespace gdq {

enum class GridKind { chebyshev, delta_modified, custom };

inline std::string_view to_string(GridKind k) {
  switch (k) {
    case GridKind::chebyshev: return "chebyshev";
    case GridKind::delta_modified: return "delta_modified";
    case GridKind::custom: return "custom";
  }
  return "unknown";
}

/// Ordered collocation points along one axis, running from 0 to length.
///
/// Construction validates the axis: at least five points, strictly
/// increasing, endpoints pinned to 0 and length, and a minimum gap of
/// 1e-10 * length so every Lagrange denominator stays finite.
class Grid1D {
 public:
  static constexpr std::size_t min_points = 5;

  Grid1D(std::vector<double> points, GridKind kind) : points_(std::move(points)), kind_(kind) {
    if (points_.size() < min_points) {
      throw DomainError("grid needs at least 5 points, got " + std::to_string(points_.size()));
    }
    length_ = points_.back();
    if (!(length_ > 0.0) || !std::isfinite(length_)) {
      throw DomainError("grid length must be positive and finite");
    }
    if (std::abs(points_.front()) > 1e-12 * length_) {
      throw DomainError("grid must start at 0");
    }
    points_.front() = 0.0;
    const double min_gap = 1e-10 * length_;
    for (std::size_t k = 1; k < points_.size(); ++k) {
      if (!(points_[k] - points_[k - 1] > min_gap)) {
        throw DomainError("grid points must be strictly increasing and distinct (index " +
                          std::to_string(k) + ")");
      }
    }
  }

  [[nodiscard]] std::span<const double> points() const { return points_; }
  [[nodiscard]] double operator[](std::size_t k) const { return points_[k]; }
  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] double length() const { return length_; }
  [[nodiscard]] GridKind kind() const { return kind_; }

 private:
  std::vector<double> points_;
  double length_ = 0.0;
  GridKind kind_;
};

/// Raw Chebyshev-Gauss-Lobatto abscissae on [0, length]. No size floor, so the
/// formula itself can be exercised on tiny counts.
inline std::vector<double> chebyshev_points(std::size_t n, double length) {
  if (n < 2) throw DomainError("chebyshev_points needs n >= 2");
  std::vector<double> x(n);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = 0.5 * length * (1.0 - std::cos(static_cast<double>(k) * std::numbers::pi / denom));
  }
  // exact endpoints and mirror symmetry
  x.front() = 0.0;
  x.back() = length;
  for (std::size_t k = 0; k < n / 2; ++k) {
    x[n - 1 - k] = length - x[k];
  }
  if (n % 2 == 1) x[n / 2] = 0.5 * length;
  return x;
}

inline Grid1D chebyshev_grid(std::size_t n, double length) {
  if (n < Grid1D::min_points) throw DomainError("chebyshev_grid needs n >= 5");
  if (!(length > 0.0)) throw DomainError("chebyshev_grid needs length > 0");
  return Grid1D(chebyshev_points(n, length), GridKind::chebyshev);
}

/// Chebyshev grid of n-2 points with an extra point inserted at relative
/// offset delta inside each end.
inline Grid1D delta_modified_grid(std::size_t n, double length, double delta) {
  if (n < 7) throw DomainError("delta_modified_grid needs n >= 7");
  if (!(length > 0.0)) throw DomainError("delta_modified_grid needs length > 0");
  const auto base = chebyshev_points(n - 2, length);
  if (!(delta > 0.0) || !(delta * length < base[1])) {
    throw DomainError("delta must lie in (0, " + std::to_string(base[1] / length) +
                      ") for n = " + std::to_string(n));
  }
  std::vector<double> x;
  x.reserve(n);
  x.push_back(0.0);
  x.push_back(delta * length);
  x.insert(x.end(), base.begin() + 1, base.end() - 1);
  x.push_back((1.0 - delta) * length);
  x.push_back(length);
  return Grid1D(std::move(x), GridKind::delta_modified);
}

/// Plain GDQ runs on Chebyshev grids, the modified variant on delta grids.
enum class Method { gdq, mgdq };

inline std::string_view to_string(Method m) { return m == Method::gdq ? "gdq" : "mgdq"; }

inline Grid1D make_grid(Method method, std::size_t n, double length, double delta) {
  return method == Method::gdq ? chebyshev_grid(n, length) : delta_modified_grid(n, length, delta);
}

}  // namespace gdq
