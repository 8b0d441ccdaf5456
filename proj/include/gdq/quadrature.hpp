#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "gdq/errors.hpp"

namespace gdq {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton on the Legendre recurrence).
inline GaussRule gauss_legendre(std::size_t n) {
  if (n == 0) throw DomainError("gauss_legendre needs n >= 1");
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  const auto nd = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (std::size_t k = 2; k <= n; ++k) {
        const auto kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * z * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
      }
      dp = nd * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

/// Integrals over [lo, hi] of the Lagrange cardinal polynomials through
/// `points`. Exact up to rounding, since the rule has n+2 points for
/// degree n-1 integrands.
inline std::vector<double> cardinal_integrals(std::span<const double> points, double lo, double hi) {
  const std::size_t n = points.size();
  if (n == 0) throw DomainError("cardinal_integrals needs at least one point");
  const auto rule = gauss_legendre(n + 2);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  std::vector<double> out(n, 0.0);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double t = mid + half * rule.nodes[q];
    const double w = half * rule.weights[q];
    for (std::size_t j = 0; j < n; ++j) {
      double l = 1.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) l *= (t - points[k]) / (points[j] - points[k]);
      }
      out[j] += w * l;
    }
  }
  return out;
}

}  // namespace gdq
