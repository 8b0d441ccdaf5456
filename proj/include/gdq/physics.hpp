#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "gdq/errors.hpp"
#include "gdq/weights.hpp"

namespace gdq {

struct Material {
  double E = 0.0;    // Pa
  double nu = 0.0;   // -
  double rho = 0.0;  // kg/m^3
  double G = 0.0;    // Pa

  /// Isotropic material with G derived from E and nu.
  static Material isotropic(double E, double nu, double rho) {
    Material m{E, nu, rho, E / (2.0 * (1.0 + nu))};
    m.validate();
    return m;
  }

  void validate() const {
    if (!(E > 0.0)) throw DomainError("Young's modulus must be positive");
    if (!(nu >= 0.0 && nu < 0.5)) throw DomainError("Poisson ratio must lie in [0, 0.5)");
    if (!(rho > 0.0)) throw DomainError("density must be positive");
    if (!(G > 0.0)) throw DomainError("shear modulus must be positive");
  }
};

enum class TorsionModel { saint_venant, thin_strip };

inline std::string_view to_string(TorsionModel m) {
  return m == TorsionModel::saint_venant ? "saint_venant" : "thin_strip";
}

/// Saint-Venant torsion constant of a solid rectangle, single-term series.
inline double torsion_constant(double width, double thickness, TorsionModel model) {
  const double d = std::max(width, thickness);
  const double t = std::min(width, thickness);
  if (model == TorsionModel::thin_strip) return d * t * t * t / 3.0;
  const double r = t / d;
  return d * t * t * t * (1.0 / 3.0 - 0.21 * r * (1.0 - std::pow(r, 4) / 12.0));
}

/// Rectangular beam section of width d (in the plate plane) and thickness t.
struct BeamSection {
  double length = 0.0;
  double width = 0.0;
  double thickness = 0.0;
  double area = 0.0;
  double bending_I = 0.0;  // about the in-plane axis, out-of-plane bending
  double torsion_J = 0.0;
  double polar_Ip = 0.0;

  static BeamSection rectangular(double length, double width, double thickness,
                                 TorsionModel model = TorsionModel::saint_venant) {
    if (!(length > 0.0 && width > 0.0 && thickness > 0.0)) {
      throw DomainError("beam length, width and thickness must be positive");
    }
    BeamSection s;
    s.length = length;
    s.width = width;
    s.thickness = thickness;
    s.area = width * thickness;
    s.bending_I = width * thickness * thickness * thickness / 12.0;
    s.torsion_J = torsion_constant(width, thickness, model);
    s.polar_Ip = (width * thickness * thickness * thickness + thickness * width * width * width) / 12.0;
    return s;
  }
};

inline double flexural_rigidity(double E, double h, double nu) {
  if (!(E > 0.0)) throw DomainError("flexural_rigidity: E must be positive");
  if (!(h > 0.0)) throw DomainError("flexural_rigidity: h must be positive");
  if (!(nu >= 0.0 && nu < 0.5)) throw DomainError("flexural_rigidity: nu must lie in [0, 0.5)");
  return E * h * h * h / (12.0 * (1.0 - nu * nu));
}

struct PlateSection {
  double a = 0.0;     // length along x
  double b = 0.0;     // width along y
  double h = 0.0;     // thickness
  double D = 0.0;     // flexural rigidity
  double beta = 0.0;  // a / b

  static PlateSection make(double a, double b, double h, const Material& mat) {
    if (!(a > 0.0 && b > 0.0 && h > 0.0)) throw DomainError("plate dimensions must be positive");
    return PlateSection{a, b, h, flexural_rigidity(mat.E, h, mat.nu), a / b};
  }

  /// True when h exceeds a tenth of the smaller side.
  [[nodiscard]] bool thick_plate_warning() const { return h > std::min(a, b) / 10.0; }
};

enum class FrequencyScale { beam_bending, beam_torsion, plate };

inline std::string_view to_string(FrequencyScale s) {
  switch (s) {
    case FrequencyScale::beam_bending: return "beam_bending";
    case FrequencyScale::beam_torsion: return "beam_torsion";
    case FrequencyScale::plate: return "plate";
  }
  return "unknown";
}

/// Maps between angular frequency and the tabulated dimensionless values.
///
/// Beam bending values are reported as beta*L, so that
/// (beta*L)^4 = rho*A*L^4*omega^2 / (E*I). Torsion values are
/// omega*L*sqrt(rho*Ip/(G*J)), plate values omega*a^2*sqrt(rho*h/D).
class NondimGroups {
 public:
  NondimGroups() = default;

  static NondimGroups for_beam(const Material& mat, const BeamSection& sec) {
    NondimGroups g;
    g.bending_ = std::sqrt(mat.E * sec.bending_I / (mat.rho * sec.area * std::pow(sec.length, 4)));
    g.torsion_ = std::sqrt(mat.G * sec.torsion_J / (mat.rho * sec.polar_Ip * sec.length * sec.length));
    return g;
  }

  static NondimGroups for_plate(const Material& mat, const PlateSection& plate) {
    NondimGroups g;
    g.plate_ = std::sqrt(plate.D / (mat.rho * plate.h * std::pow(plate.a, 4)));
    return g;
  }

  static NondimGroups combine(const NondimGroups& beam, const NondimGroups& plate) {
    NondimGroups g = beam;
    g.plate_ = plate.plate_;
    return g;
  }

  [[nodiscard]] bool has(FrequencyScale s) const { return base(s).has_value(); }

  /// Angular frequency (rad/s) for a dimensionless value.
  [[nodiscard]] double to_omega(double nondim, FrequencyScale s) const {
    if (nondim < 0.0) throw DomainError("dimensionless frequency must be non-negative");
    const double w0 = require(s);
    return s == FrequencyScale::beam_bending ? nondim * nondim * w0 : nondim * w0;
  }

  [[nodiscard]] double from_omega(double omega, FrequencyScale s) const {
    if (omega < 0.0) throw DomainError("angular frequency must be non-negative");
    const double w0 = require(s);
    return s == FrequencyScale::beam_bending ? std::sqrt(omega / w0) : omega / w0;
  }

 private:
  [[nodiscard]] std::optional<double> base(FrequencyScale s) const {
    switch (s) {
      case FrequencyScale::beam_bending: return bending_;
      case FrequencyScale::beam_torsion: return torsion_;
      case FrequencyScale::plate: return plate_;
    }
    return std::nullopt;
  }
  [[nodiscard]] double require(FrequencyScale s) const {
    auto b = base(s);
    if (!b) throw DomainError("no frequency scale for " + std::string(to_string(s)));
    return *b;
  }

  std::optional<double> bending_;
  std::optional<double> torsion_;
  std::optional<double> plate_;
};

inline double to_hz(double nondim, const NondimGroups& g, FrequencyScale s) {
  return g.to_omega(nondim, s) / (2.0 * std::numbers::pi);
}

inline double to_nondim(double hz, const NondimGroups& g, FrequencyScale s) {
  if (hz < 0.0) throw DomainError("frequency must be non-negative");
  return g.from_omega(2.0 * std::numbers::pi * hz, s);
}

/// Kelvin-Kirchhoff edge quantities on the plate grid.
struct PlateResultants {
  Matrix Vx, Vy, Mx, My, Mxy;
};

/// Resultants of a deflection field w (rows follow x, columns follow y).
inline PlateResultants stress_resultants(const Matrix& w, const PlateSection& plate, double nu,
                                         const DiffMatrixSet& dx, const DiffMatrixSet& dy) {
  if (w.rows() != static_cast<Eigen::Index>(dx.n()) || w.cols() != static_cast<Eigen::Index>(dy.n())) {
    throw DomainError("stress_resultants: field is " + std::to_string(w.rows()) + "x" +
                      std::to_string(w.cols()) + " but grid is " + std::to_string(dx.n()) + "x" +
                      std::to_string(dy.n()));
  }
  const Matrix wxx = dx.order(2) * w;
  const Matrix wyy = w * dy.order(2).transpose();
  const Matrix wxy = dx.order(1) * w * dy.order(1).transpose();
  const Matrix wxxx = dx.order(3) * w;
  const Matrix wyyy = w * dy.order(3).transpose();
  const Matrix wxyy = dx.order(1) * w * dy.order(2).transpose();
  const Matrix wxxy = dx.order(2) * w * dy.order(1).transpose();
  const double D = plate.D;
  return PlateResultants{
      -D * (wxxx + (2.0 - nu) * wxyy),
      -D * (wyyy + (2.0 - nu) * wxxy),
      -D * (wxx + nu * wyy),
      -D * (wyy + nu * wxx),
      -D * (1.0 - nu) * wxy,
  };
}

}  // namespace gdq
