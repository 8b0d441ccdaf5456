#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gdq/assembly.hpp"
#include "gdq/errors.hpp"
#include "gdq/physics.hpp"
#include "gdq/quadrature.hpp"

namespace gdq {

enum class ModeTag { beam_bending, beam_torsion, plate, coupled };

inline std::string_view to_string(ModeTag t) {
  switch (t) {
    case ModeTag::beam_bending: return "beam_bending";
    case ModeTag::beam_torsion: return "beam_torsion";
    case ModeTag::plate: return "plate";
    case ModeTag::coupled: return "coupled";
  }
  return "unknown";
}

struct EnergyFractions {
  double beam_bending = 0.0;
  double beam_torsion = 0.0;
  double plate = 0.0;
  /// Set when the mode stores no strain energy and kinetic shares were used.
  bool kinetic = false;
};

struct Classification {
  ModeTag tag = ModeTag::coupled;
  EnergyFractions fractions;
};

struct Mode {
  double lambda = 0.0;  // omega^2, (rad/s)^2
  double omega = 0.0;   // rad/s
  double hz = 0.0;
  bool rigid = false;
  Vector field;  // every DOF, interior and recovered boundary
  Classification classification;
  double residual = 0.0;  // ||K w - mu w|| / (||K|| ||w||) on the condensed matrix
  std::optional<double> nondim_bending;
  std::optional<double> nondim_torsion;
  std::optional<double> nondim_plate;

  [[nodiscard]] std::optional<double> nondim(FrequencyScale s) const {
    switch (s) {
      case FrequencyScale::beam_bending: return nondim_bending;
      case FrequencyScale::beam_torsion: return nondim_torsion;
      case FrequencyScale::plate: return nondim_plate;
    }
    return std::nullopt;
  }
};

struct DiscardedEigenvalue {
  double real = 0.0;  // scaled by the problem's reference eigenvalue
  double imag = 0.0;
  std::string reason;
};

struct SolverReport {
  std::size_t interior = 0;
  std::size_t boundary = 0;
  double cond_BB = 0.0;
  double lambda_ref = 1.0;
  double max_abs_eigenvalue = 0.0;  // scaled
  std::size_t above_cutoff = 0;
  std::vector<DiscardedEigenvalue> discarded;
  double max_residual = 0.0;
};

struct ModalSolution {
  std::vector<Mode> modes;
  SolverReport report;
};

struct SolveOptions {
  /// Eigenvalues with omega above this (rad/s) are dropped as spurious.
  double cutoff_omega = std::numeric_limits<double>::infinity();
  double imag_tol = 1e-6;      // relative to |lambda|
  double negative_tol = 1e-8;  // relative to max |lambda|
  /// Scaled eigenvalues below this magnitude are rigid-body modes.
  double rigid_tol = 1e-6;
  double max_discard_fraction = 0.2;
};

// ---------------------------------------------------------------------------
// Energies and classification

namespace detail {

inline std::vector<double> grid_weights(const Grid1D& g) { return cardinal_integrals(g.points(), 0.0, g.length()); }

struct Energies {
  double bending = 0.0;
  double torsion = 0.0;
  double plate = 0.0;
  [[nodiscard]] double total() const { return bending + torsion + plate; }
};

inline Energies strain_energies(const Vector& field, const Layout& layout) {
  Energies e;
  if (layout.beam) {
    const auto& b = *layout.beam;
    const auto q = grid_weights(b.grid());
    const Vector u2 = b.diff.order(2) * layout.beam_deflection(field);
    const Vector t1 = b.diff.order(1) * layout.beam_rotation(field);
    for (std::size_t k = 0; k < q.size(); ++k) {
      e.bending += 0.5 * b.material.E * b.section.bending_I * q[k] * u2(Index(k)) * u2(Index(k));
      e.torsion += 0.5 * b.material.G * b.section.torsion_J * q[k] * t1(Index(k)) * t1(Index(k));
    }
  }
  if (layout.plate) {
    const auto& p = *layout.plate;
    const auto qx = grid_weights(p.dx.grid());
    const auto qy = grid_weights(p.dy.grid());
    const Matrix w = layout.plate_deflection(field);
    const Matrix wxx = p.dx.order(2) * w;
    const Matrix wyy = w * p.dy.order(2).transpose();
    const Matrix wxy = p.dx.order(1) * w * p.dy.order(1).transpose();
    const double nu = p.material.nu;
    for (Index i = 0; i < w.rows(); ++i) {
      for (Index j = 0; j < w.cols(); ++j) {
        const double lap = wxx(i, j) + wyy(i, j);
        const double gauss = wxx(i, j) * wyy(i, j) - wxy(i, j) * wxy(i, j);
        e.plate += 0.5 * p.section.D * qx[std::size_t(i)] * qy[std::size_t(j)] * (lap * lap - 2.0 * (1.0 - nu) * gauss);
      }
    }
  }
  return e;
}

/// Kinetic energy per unit omega^2.
inline Energies kinetic_energies(const Vector& field, const Layout& layout) {
  Energies e;
  if (layout.beam) {
    const auto& b = *layout.beam;
    const auto q = grid_weights(b.grid());
    const Vector u = layout.beam_deflection(field);
    const Vector t = layout.beam_rotation(field);
    for (std::size_t k = 0; k < q.size(); ++k) {
      e.bending += 0.5 * b.material.rho * b.section.area * q[k] * u(Index(k)) * u(Index(k));
      e.torsion += 0.5 * b.material.rho * b.section.polar_Ip * q[k] * t(Index(k)) * t(Index(k));
    }
    if (b.tip) {
      const auto last = u.size() - 1;
      e.bending += 0.5 * b.tip->mass * u(last) * u(last);
      e.torsion += 0.5 * b.tip->rotary_inertia * t(last) * t(last);
    }
  }
  if (layout.plate) {
    const auto& p = *layout.plate;
    const auto qx = grid_weights(p.dx.grid());
    const auto qy = grid_weights(p.dy.grid());
    const Matrix w = layout.plate_deflection(field);
    for (Index i = 0; i < w.rows(); ++i) {
      for (Index j = 0; j < w.cols(); ++j) {
        e.plate += 0.5 * p.material.rho * p.section.h * qx[std::size_t(i)] * qy[std::size_t(j)] * w(i, j) * w(i, j);
      }
    }
  }
  return e;
}

}  // namespace detail

/// Tags a mode by the region holding more than 80% of its strain energy, or
/// `coupled` when none does. Rigid-body modes are tagged by kinetic energy.
inline Classification classify(const Vector& field, const Layout& layout) {
  const auto strain = detail::strain_energies(field, layout);
  const auto kinetic = detail::kinetic_energies(field, layout);
  Classification c;
  const bool stiff = kinetic.total() > 0.0 && strain.total() > 1e-6 * layout.lambda_ref * kinetic.total();
  const auto& e = stiff ? strain : kinetic;
  const double total = e.total();
  if (total > 0.0) {
    c.fractions.beam_bending = e.bending / total;
    c.fractions.beam_torsion = e.torsion / total;
    c.fractions.plate = e.plate / total;
  }
  c.fractions.kinetic = !stiff;
  if (c.fractions.beam_bending > 0.8) {
    c.tag = ModeTag::beam_bending;
  } else if (c.fractions.beam_torsion > 0.8) {
    c.tag = ModeTag::beam_torsion;
  } else if (c.fractions.plate > 0.8) {
    c.tag = ModeTag::plate;
  } else {
    c.tag = ModeTag::coupled;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Residuals

/// Largest row residual of an eigenpair on the unpartitioned system. Dynamic
/// rows are checked against mu * x on their own DOF, constraint rows against
/// zero; each row is measured relative to its own norm and the mode norm.
inline double unpartitioned_residual(const SystemMatrices& sys, const Vector& field, double mu) {
  const Matrix a = sys.full();
  const double xnorm = field.norm();
  double worst = 0.0;
  for (Index r = 0; r < a.rows(); ++r) {
    const bool dyn = is_dynamic(sys.rows[std::size_t(r)].kind);
    double res = a.row(r).dot(field);
    double scale = a.row(r).norm();
    if (dyn) {
      res -= mu * field(r);
      scale += std::abs(mu);
    }
    worst = std::max(worst, std::abs(res) / (scale * xnorm));
  }
  return worst;
}

/// Largest residual over the constraint rows only.
inline double boundary_residual(const SystemMatrices& sys, const Vector& field) {
  const Matrix a = sys.full();
  const double xnorm = field.norm();
  double worst = 0.0;
  for (auto r : sys.dofs.boundary()) {
    worst = std::max(worst, std::abs(a.row(r).dot(field)) / (a.row(r).norm() * xnorm));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Solve

namespace detail {

inline Vector normalize_mode(Vector v, const Layout& layout) {
  const auto& dofs = layout.dofs;
  double peak = 0.0;
  for (Index k = 0; k < v.size(); ++k) {
    if (dofs.entry(k).region != Region::beam_torsion) peak = std::max(peak, std::abs(v(k)));
  }
  const double all = v.cwiseAbs().maxCoeff();
  if (peak <= 1e-12 * all) peak = all;
  if (peak > 0.0) v /= peak;
  for (Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) > 1e-8) {
      if (v(k) < 0.0) v = -v;
      break;
    }
  }
  return v;
}

inline bool lexicographic_less(const Vector& a, const Vector& b) {
  for (Index k = 0; k < std::min(a.size(), b.size()); ++k) {
    if (a(k) != b(k)) return a(k) < b(k);
  }
  return a.size() < b.size();
}

}  // namespace detail

/// Dense eigen-decomposition of the condensed operator.
///
/// Eigenvalues are filtered in this order: scaled magnitude below
/// `rigid_tol` is a rigid-body mode; above the cutoff is dropped as
/// spurious; complex or clearly negative values below the cutoff are logged
/// and dropped, and more than `max_discard_fraction` of those aborts.
inline ModalSolution solve(const Problem& problem, const Condensed& condensed, const SolveOptions& opt = {}) {
  const auto& sys = problem.system;
  const auto& layout = problem.layout;
  const Matrix& K = condensed.K;
  if (!K.allFinite()) throw SolverError("condensed matrix has non-finite entries");

  ModalSolution sol;
  auto& rep = sol.report;
  rep.interior = sys.interior_count();
  rep.boundary = sys.boundary_count();
  rep.cond_BB = condensed.cond_BB;
  rep.lambda_ref = layout.lambda_ref;
  if (K.rows() == 0) return sol;

  Eigen::EigenSolver<Matrix> es(K, true);
  if (es.info() != Eigen::Success) throw SolverError("eigen decomposition did not converge");
  const auto& ev = es.eigenvalues();
  const Eigen::MatrixXcd vecs = es.eigenvectors();
  const double knorm = Eigen::BDCSVD<Matrix>(K).singularValues()(0);
  rep.max_abs_eigenvalue = ev.cwiseAbs().maxCoeff();
  const double mu_cut = opt.cutoff_omega * opt.cutoff_omega / layout.lambda_ref;

  std::size_t below_cut = 0;
  const auto& I = sys.dofs.interior();
  const auto& B = sys.dofs.boundary();
  for (Index k = 0; k < ev.size(); ++k) {
    const std::complex<double> mu = ev(k);
    const double mag = std::abs(mu);
    const bool rigid = mag <= opt.rigid_tol;
    if (!rigid && mag > mu_cut) {
      ++rep.above_cutoff;
      continue;
    }
    ++below_cut;
    if (!rigid) {
      if (std::abs(mu.imag()) > opt.imag_tol * mag) {
        rep.discarded.push_back({mu.real(), mu.imag(), "complex"});
        continue;
      }
      if (mu.real() < -opt.negative_tol * rep.max_abs_eigenvalue) {
        rep.discarded.push_back({mu.real(), mu.imag(), "negative"});
        continue;
      }
    }
    // rotate the eigenvector so its largest entry is real, then drop the imaginary part
    Eigen::VectorXcd vc = vecs.col(k);
    Index imax = 0;
    vc.cwiseAbs().maxCoeff(&imax);
    vc *= std::conj(vc(imax)) / std::abs(vc(imax));
    const Vector xi = vc.real();

    Vector field = Vector::Zero(Index(sys.dofs.size()));
    const Vector xb = condensed.R * xi;
    for (std::size_t r = 0; r < I.size(); ++r) field(I[r]) = xi(Index(r));
    for (std::size_t r = 0; r < B.size(); ++r) field(B[r]) = xb(Index(r));

    Mode m;
    const double mu_r = std::max(mu.real(), 0.0);
    m.rigid = rigid;
    m.lambda = mu_r * layout.lambda_ref;
    m.omega = std::sqrt(m.lambda);
    m.hz = m.omega / (2.0 * std::numbers::pi);
    m.field = detail::normalize_mode(field, layout);
    Vector xin(Index(I.size()));
    for (std::size_t r = 0; r < I.size(); ++r) xin(Index(r)) = m.field(I[r]);
    m.residual = (K * xin - mu.real() * xin).norm() / (knorm * xin.norm());
    rep.max_residual = std::max(rep.max_residual, m.residual);
    m.classification = classify(m.field, layout);
    if (layout.groups.has(FrequencyScale::beam_bending)) {
      m.nondim_bending = layout.groups.from_omega(m.omega, FrequencyScale::beam_bending);
      m.nondim_torsion = layout.groups.from_omega(m.omega, FrequencyScale::beam_torsion);
    }
    if (layout.groups.has(FrequencyScale::plate)) {
      m.nondim_plate = layout.groups.from_omega(m.omega, FrequencyScale::plate);
    }
    sol.modes.push_back(std::move(m));
  }

  if (static_cast<double>(rep.discarded.size()) > opt.max_discard_fraction * static_cast<double>(below_cut)) {
    throw SolverError(std::to_string(rep.discarded.size()) + " of " + std::to_string(below_cut) +
                      " eigenvalues below the cutoff were complex or negative");
  }

  std::sort(sol.modes.begin(), sol.modes.end(), [](const Mode& a, const Mode& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return detail::lexicographic_less(a.field, b.field);
  });
  return sol;
}

inline ModalSolution solve(const Problem& problem, const SolveOptions& opt = {}) {
  return solve(problem, condense(problem.system), opt);
}

}  // namespace gdq
