#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "gdq/errors.hpp"

namespace gdq::oracles {

/// Bisection down to adjacent doubles. Requires a sign change on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  if (f(hi) == 0.0) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// First `count` sign changes of f on (start, inf), scanned with step `h`.
inline std::vector<double> scan_roots(const std::function<double(double)>& f, std::size_t count, double start,
                                      double h) {
  std::vector<double> roots;
  double a = start;
  double fa = f(a);
  while (roots.size() < count) {
    const double b = a + h;
    const double fb = f(b);
    if (fa == 0.0 || (fa < 0.0) != (fb < 0.0)) roots.push_back(bisect(f, a, b));
    a = b;
    fa = fb;
    if (a > 1e6) throw DomainError("root scan did not find enough roots");
  }
  return roots;
}

/// cos(x) cosh(x) + 1 divided through by cosh(x).
inline double cantilever_characteristic(double x) { return std::cos(x) + 1.0 / std::cosh(x); }

/// Roots beta*L of cos(beta L) cosh(beta L) + 1 = 0; root j lies in ((j-1) pi, j pi).
inline std::vector<double> cantilever_bending_roots(std::size_t count) {
  std::vector<double> roots;
  roots.reserve(count);
  for (std::size_t j = 1; j <= count; ++j) {
    const double lo = static_cast<double>(j - 1) * std::numbers::pi;
    const double hi = static_cast<double>(j) * std::numbers::pi;
    roots.push_back(bisect(cantilever_characteristic, lo, hi));
  }
  return roots;
}

/// (2j - 1) pi / 2.
inline std::vector<double> cantilever_torsion_roots(std::size_t count) {
  std::vector<double> roots(count);
  for (std::size_t j = 0; j < count; ++j) roots[j] = (2.0 * static_cast<double>(j) + 1.0) * std::numbers::pi / 2.0;
  return roots;
}

/// Pole-free tip-mass frequency function divided by cosh(x):
/// cos + sech - R x (sin - cos tanh).
inline double tip_mass_characteristic(double x, double mass_ratio) {
  return std::cos(x) + 1.0 / std::cosh(x) - mass_ratio * x * (std::sin(x) - std::cos(x) * std::tanh(x));
}

/// Roots beta*l of the cantilever with a tip point mass of ratio R_z = M/(rho A l).
inline std::vector<double> tip_mass_bending_roots(double mass_ratio, std::size_t count) {
  if (mass_ratio < 0.0) throw DomainError("mass ratio must be non-negative");
  if (mass_ratio == 0.0) return cantilever_bending_roots(count);
  return scan_roots([mass_ratio](double x) { return tip_mass_characteristic(x, mass_ratio); }, count, 1e-9,
                    std::numbers::pi / 64.0);
}

/// alpha sin(alpha) - R cos(alpha).
inline double tip_inertia_characteristic(double alpha, double inertia_ratio) {
  return alpha * std::sin(alpha) - inertia_ratio * std::cos(alpha);
}

/// Roots of alpha tan(alpha) = R_theta, one per ((j-1) pi, (j-1) pi + pi/2).
/// For R_theta = 0 the first root is the trivial alpha = 0.
inline std::vector<double> tip_inertia_torsion_roots(double inertia_ratio, std::size_t count) {
  if (inertia_ratio < 0.0) throw DomainError("inertia ratio must be non-negative");
  std::vector<double> roots;
  roots.reserve(count);
  const auto f = [inertia_ratio](double a) { return tip_inertia_characteristic(a, inertia_ratio); };
  for (std::size_t j = 1; j <= count; ++j) {
    const double lo = static_cast<double>(j - 1) * std::numbers::pi;
    const double hi = lo + std::numbers::pi / 2.0;
    if (inertia_ratio == 0.0) {
      roots.push_back(lo);
      continue;
    }
    // f(lo) = -R (-1)^(j-1) and f(hi) = hi (-1)^(j-1): always a sign change
    roots.push_back(bisect(f, lo, hi));
  }
  return roots;
}

namespace detail {

inline std::vector<double> merge_first(std::vector<double> a, const std::vector<double>& b, std::size_t count) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.resize(std::min(a.size(), count));
  return a;
}

}  // namespace detail

/// Tip-mass roots interleaved with the tangent poles (2j - 1) pi / 2, the
/// layout of the published "exact" rows.
inline std::vector<double> tabulated_tip_mass_bending(double mass_ratio, std::size_t count) {
  return detail::merge_first(tip_mass_bending_roots(mass_ratio, count), cantilever_torsion_roots(count), count);
}

/// Tip-inertia roots above the first, interleaved with the tangent poles.
inline std::vector<double> tabulated_tip_inertia_torsion(double inertia_ratio, std::size_t count) {
  auto roots = tip_inertia_torsion_roots(inertia_ratio, count + 1);
  roots.erase(roots.begin());
  return detail::merge_first(std::move(roots), cantilever_torsion_roots(count), count);
}

struct ReferenceSpectrum {
  std::string label;
  std::vector<double> values;
  /// Relative tolerance used when comparing against this row.
  double tolerance = 0.0;
};

/// Embedded literature and published rows, keyed by a short identifier.
inline const std::map<std::string, ReferenceSpectrum>& reference_tables() {
  static const std::map<std::string, ReferenceSpectrum> tables = [] {
    std::map<std::string, ReferenceSpectrum> t;
    auto add = [&t](std::string key, std::string label, std::vector<double> v, double tol) {
      std::sort(v.begin(), v.end());
      t.emplace(std::move(key), ReferenceSpectrum{std::move(label), std::move(v), tol});
    };
    // square plates, nondimensional omega a^2 sqrt(rho h / D), nu = 0.3
    add("ffff_leissa", "FFFF Leissa", {13.489, 19.789, 24.432, 35.024, 35.024, 61.526}, 0.02);
    add("ffff_leissa_narita", "FFFF Leissa-Narita", {13.468, 19.596, 24.271, 34.801, 34.801, 61.111}, 0.015);
    add("ffff_shu_du_12", "FFFF Shu-Du 12x12", {13.454, 19.597, 24.271, 34.815, 34.817}, 0.01);
    add("ffff_fem", "FFFF FEM", {13.461, 19.665, 24.289, 34.912, 34.825}, 0.02);
    add("ffff_gdq_9", "FFFF GDQ 9x9", {10.934, 19.365, 21.935, 29.432, 29.536}, 0.01);
    add("ffff_gdq_11", "FFFF GDQ 11x11", {10.639, 19.685, 22.854, 31.342, 30.762}, 0.01);
    add("ffff_gdq_15", "FFFF GDQ 15x15", {10.303, 19.596, 22.146, 30.026, 30.803}, 0.01);
    add("ffff_mgdq_9", "FFFF MGDQ 9x9", {14.065, 19.968, 24.696, 34.938, 34.645}, 0.01);
    add("ffff_mgdq_11", "FFFF MGDQ 11x11", {13.164, 19.492, 24.434, 34.884, 34.783}, 0.01);
    add("ffff_mgdq_15", "FFFF MGDQ 15x15", {13.475, 19.598, 24.268, 34.832, 34.828}, 0.01);
    add("cfff_leissa", "CFFF Leissa", {3.492, 8.525, 21.429, 27.331, 31.111, 54.443}, 0.015);
    add("cfff_shu_du_12", "CFFF Shu-Du 12x12", {3.485, 8.604, 21.586, 27.230, 31.358}, 0.01);
    add("cfff_fem", "CFFF FEM", {3.481, 8.502, 21.456, 27.401, 30.021}, 0.02);
    add("cfff_gdq_9", "CFFF GDQ 9x9", {3.486, 8.616, 19.894, 25.965, 27.925}, 0.01);
    add("cfff_gdq_11", "CFFF GDQ 11x11", {3.768, 8.914, 20.065, 26.425, 29.682}, 0.01);
    add("cfff_gdq_15", "CFFF GDQ 15x15", {3.898, 9.459, 20.206, 26.150, 26.500}, 0.01);
    add("cfff_mgdq_9", "CFFF MGDQ 9x9", {3.467, 8.725, 21.104, 26.935, 31.825}, 0.01);
    add("cfff_mgdq_11", "CFFF MGDQ 11x11", {3.482, 8.625, 21.238, 27.189, 31.539}, 0.01);
    add("cfff_mgdq_15", "CFFF MGDQ 15x15", {3.495, 8.564, 21.462, 27.312, 31.261}, 0.01);
    // clamped-free beam, beta*L and torsion alpha
    add("beam_bending_exact", "cantilever bending exact",
        {1.875, 4.694, 7.855, 10.996, 14.137, 17.279, 20.420, 23.562}, 5e-4);
    add("beam_bending_9", "cantilever bending 5x9", {1.845, 4.569, 7.736, 10.825, 13.984, 17.259, 20.390, 23.493}, 0.01);
    add("beam_bending_11", "cantilever bending 5x11", {1.863, 4.679, 7.839, 10.971, 14.120, 17.264, 20.402, 23.540}, 0.01);
    add("beam_bending_15", "cantilever bending 5x15", {1.875, 4.695, 7.843, 10.982, 14.129, 17.268, 20.407, 23.549}, 0.01);
    add("beam_torsion_exact", "cantilever torsion exact",
        {1.571, 4.712, 7.854, 10.996, 14.137, 17.279, 20.420, 23.562}, 0.002);
    add("beam_torsion_9", "cantilever torsion 5x9", {1.571, 4.715, 7.875, 11.096, 14.178, 17.2910, 20.462, 23.583}, 0.01);
    add("beam_torsion_11", "cantilever torsion 5x11", {1.571, 4.714, 7.864, 10.796, 14.158, 17.289, 20.442, 23.573}, 0.01);
    add("beam_torsion_15", "cantilever torsion 5x15", {1.571, 4.710, 7.852, 10.988, 14.128, 17.281, 20.418, 23.573}, 0.01);
    add("tip_mass_bending_tabulated", "tip mass bending R_z = 9.734",
        {0.741, 1.571, 3.939, 4.712, 7.076, 7.854, 10.215, 10.996}, 1e-3);
    add("tip_inertia_torsion_tabulated", "tip inertia torsion R_theta = 0.051",
        {1.571, 3.158, 4.712, 6.291, 7.854, 9.430, 10.996, 12.571}, 1e-3);
    // coupled beam-plate system, Hz
    add("coupled_reported_hz", "coupled system reported (Hz)", {0.593, 2.675, 32.037, 118.276, 147.494}, 0.25);
    return t;
  }();
  return tables;
}

inline const ReferenceSpectrum& reference(const std::string& key) {
  const auto& t = reference_tables();
  auto it = t.find(key);
  if (it == t.end()) throw DomainError("unknown reference table: " + key);
  return it->second;
}

/// Documented mass and inertia ratios of the lead-cube tip body.
inline constexpr double reference_mass_ratio = 9.734;
inline constexpr double reference_inertia_ratio = 0.051;

}  // namespace gdq::oracles
