#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "gdq/assembly.hpp"
#include "gdq/eigensolver.hpp"
#include "gdq/errors.hpp"

namespace gdq {

/// Fixed-precision text for CSV cells, stable across runs.
inline std::string format_number(double v, int digits = 10) {
  if (v == 0.0) return "0";
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*g", digits, v);
  return buf.data();
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

struct ErrorRow {
  std::string family;
  std::size_t mode = 0;  // 1-based within the family
  double computed = 0.0;
  double reference = 0.0;
  std::string source;

  /// |computed - reference| / reference in percent.
  [[nodiscard]] double error_percent() const { return std::abs(computed - reference) / std::abs(reference) * 100.0; }
};

inline void write_frequencies_csv(std::ostream& os, const ModalSolution& sol, std::size_t count) {
  os << "mode,rigid,beta_L,alpha,omega_plate,hz,classification,bending_fraction,torsion_fraction,plate_fraction\n";
  for (std::size_t k = 0; k < std::min(count, sol.modes.size()); ++k) {
    const Mode& m = sol.modes[k];
    const auto& f = m.classification.fractions;
    os << k + 1 << ',' << (m.rigid ? 1 : 0) << ',' << format_optional(m.nondim_bending) << ','
       << format_optional(m.nondim_torsion) << ',' << format_optional(m.nondim_plate) << ',' << format_number(m.hz)
       << ',' << to_string(m.classification.tag) << ',' << format_number(f.beam_bending, 6) << ','
       << format_number(f.beam_torsion, 6) << ',' << format_number(f.plate, 6) << '\n';
  }
}

inline void write_errors_csv(std::ostream& os, const std::vector<ErrorRow>& rows) {
  os << "family,mode,computed,reference,error_percent,source\n";
  for (const auto& r : rows) {
    os << r.family << ',' << r.mode << ',' << format_number(r.computed) << ',' << format_number(r.reference) << ','
       << format_number(r.error_percent(), 6) << ',' << r.source << '\n';
  }
}

// ---------------------------------------------------------------------------
// Mode-shape files

namespace detail {

inline std::string describe_axis(const Grid1D& g) {
  std::ostringstream os;
  os << to_string(g.kind()) << " n=" << g.size() << " length=" << format_number(g.length(), 17);
  return os.str();
}

inline void write_row(std::ostream& os, const Vector& v) {
  for (Index k = 0; k < v.size(); ++k) os << (k ? " " : "") << format_number(v(k), 17);
  os << '\n';
}

}  // namespace detail

/// Plain-text mode shape: one header line with the grid provenance, then a
/// `plate N M` block (row = x index, column = y index) and the beam vectors.
inline void write_mode_file(std::ostream& os, const Layout& layout, const Mode& mode, std::size_t index) {
  os << "# mode " << index << " hz=" << format_number(mode.hz, 17);
  if (layout.plate) {
    os << " | x: " << detail::describe_axis(layout.plate->dx.grid()) << " | y: "
       << detail::describe_axis(layout.plate->dy.grid());
  }
  if (layout.beam) os << " | beam: " << detail::describe_axis(layout.beam->grid());
  os << '\n';
  if (layout.plate) {
    const Matrix w = layout.plate_deflection(mode.field);
    os << "plate " << w.rows() << ' ' << w.cols() << '\n';
    for (Index i = 0; i < w.rows(); ++i) detail::write_row(os, w.row(i).transpose());
  }
  if (layout.beam) {
    const auto S = layout.dofs.beam_nodes();
    os << "beam_deflection " << S << '\n';
    detail::write_row(os, layout.beam_deflection(mode.field));
    os << "beam_rotation " << S << '\n';
    detail::write_row(os, layout.beam_rotation(mode.field));
  }
}

struct ModeFileData {
  std::string header;
  std::optional<Matrix> plate;
  std::optional<Vector> beam_deflection;
  std::optional<Vector> beam_rotation;
};

inline ModeFileData read_mode_file(std::istream& is) {
  ModeFileData d;
  if (!std::getline(is, d.header) || d.header.rfind("#", 0) != 0) throw DomainError("mode file: missing header line");
  auto read_values = [&is](Index n, const std::string& what) {
    Vector v(n);
    for (Index k = 0; k < n; ++k) {
      if (!(is >> v(k))) throw DomainError("mode file: truncated " + what + " block");
    }
    return v;
  };
  std::string tag;
  while (is >> tag) {
    if (tag == "plate") {
      Index n = 0;
      Index m = 0;
      if (!(is >> n >> m) || n <= 0 || m <= 0) throw DomainError("mode file: bad plate dimensions");
      Matrix w(n, m);
      for (Index i = 0; i < n; ++i) w.row(i) = read_values(m, "plate").transpose();
      d.plate = std::move(w);
    } else if (tag == "beam_deflection" || tag == "beam_rotation") {
      Index n = 0;
      if (!(is >> n) || n <= 0) throw DomainError("mode file: bad " + tag + " size");
      (tag == "beam_deflection" ? d.beam_deflection : d.beam_rotation) = read_values(n, tag);
    } else {
      throw DomainError("mode file: unknown block '" + tag + "'");
    }
  }
  return d;
}

/// Reassembles a global DOF vector from a parsed mode file.
inline Vector field_from_mode_file(const Layout& layout, const ModeFileData& d) {
  const auto& dofs = layout.dofs;
  Vector field = Vector::Zero(Index(dofs.size()));
  if (dofs.has_beam()) {
    const auto S = Index(dofs.beam_nodes());
    if (!d.beam_deflection || !d.beam_rotation || d.beam_deflection->size() != S || d.beam_rotation->size() != S) {
      throw DomainError("mode file: beam blocks do not match the layout");
    }
    field.segment(0, S) = *d.beam_deflection;
    field.segment(S, S) = *d.beam_rotation;
  }
  if (dofs.has_plate()) {
    if (!d.plate || d.plate->rows() != Index(dofs.plate_nx()) || d.plate->cols() != Index(dofs.plate_ny())) {
      throw DomainError("mode file: plate block does not match the layout");
    }
    for (std::size_t i = 0; i < dofs.plate_nx(); ++i) {
      for (std::size_t j = 0; j < dofs.plate_ny(); ++j) field(dofs.plate(i, j)) = (*d.plate)(Index(i), Index(j));
    }
  }
  return field;
}

// ---------------------------------------------------------------------------
// Contour images

namespace detail {

/// Lagrange cardinal values of `nodes` at t (barycentric form).
inline Vector cardinal_values(std::span<const double> nodes, double t) {
  const auto n = nodes.size();
  Vector out = Vector::Zero(Index(n));
  for (std::size_t k = 0; k < n; ++k) {
    if (t == nodes[k]) {
      out(Index(k)) = 1.0;
      return out;
    }
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double wk = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != k) wk /= (nodes[k] - nodes[j]);
    }
    out(Index(k)) = wk / (t - nodes[k]);
    sum += out(Index(k));
  }
  return out / sum;
}

struct Rgb {
  unsigned char r, g, b;
};

inline Rgb diverging(double v) {
  v = std::clamp(v, -1.0, 1.0);
  const auto c = [](double x) { return static_cast<unsigned char>(std::lround(255.0 * std::clamp(x, 0.0, 1.0))); };
  if (v >= 0.0) return {255, c(1.0 - v), c(1.0 - v)};
  return {c(1.0 + v), c(1.0 + v), 255};
}

}  // namespace detail

/// Binary PPM of the mode: the plate field with contour lines every tenth of
/// the peak, and the beam drawn to its left as five parallel rows deflected
/// by u + theta * offset.
inline void write_mode_ppm(std::ostream& os, const Layout& layout, const Mode& mode, int pixels_per_unit = 300) {
  const double L = layout.beam ? layout.beam->section.length : 0.0;
  const double a = layout.plate ? layout.plate->section.a : 0.0;
  const double b = layout.plate ? layout.plate->section.b : 0.0;
  const double beam_w = layout.beam ? layout.beam->section.width : 0.0;
  const double height = layout.plate ? b : std::max(4.0 * beam_w, 0.2 * L);
  const double yc = layout.junction ? layout.junction->y_center : 0.5 * height;
  const double scale = pixels_per_unit / std::max(L + a, height);
  const int W = std::max(1, static_cast<int>(std::lround((L + a) * scale)));
  const int H = std::max(1, static_cast<int>(std::lround(height * scale)));

  std::vector<double> value(std::size_t(W) * std::size_t(H), std::numeric_limits<double>::quiet_NaN());
  auto at = [&](int px, int py) -> double& { return value[std::size_t(py) * std::size_t(W) + std::size_t(px)]; };

  double peak = 0.0;
  if (layout.plate) {
    const auto& p = *layout.plate;
    const Matrix w = layout.plate_deflection(mode.field);
    peak = std::max(peak, w.cwiseAbs().maxCoeff());
    std::vector<Vector> ly(static_cast<std::size_t>(H));
    for (int py = 0; py < H; ++py) {
      ly[std::size_t(py)] = detail::cardinal_values(p.dy.grid().points(), b * (1.0 - (py + 0.5) / H));
    }
    for (int px = 0; px < W; ++px) {
      const double x = (px + 0.5) / scale - L;
      if (x < 0.0) continue;
      const Vector col = w.transpose() * detail::cardinal_values(p.dx.grid().points(), x);
      for (int py = 0; py < H; ++py) at(px, py) = col.dot(ly[std::size_t(py)]);
    }
  }
  if (layout.beam) {
    const auto& bm = *layout.beam;
    const Vector u = layout.beam_deflection(mode.field);
    const Vector th = layout.beam_rotation(mode.field);
    constexpr int rows = 5;
    peak = std::max(peak, (u.cwiseAbs().array() + th.cwiseAbs().array() * 0.5 * beam_w).maxCoeff());
    for (int px = 0; px < W; ++px) {
      const double s = (px + 0.5) / scale;
      if (s > L) continue;
      const Vector c = detail::cardinal_values(bm.grid().points(), s);
      const double us = c.dot(u);
      const double ts = c.dot(th);
      for (int py = 0; py < H; ++py) {
        const double y = height * (1.0 - (py + 0.5) / H) - yc;
        if (std::abs(y) > 0.5 * beam_w) continue;
        const int r = std::clamp(static_cast<int>(std::floor((y / beam_w + 0.5) * rows)), 0, rows - 1);
        const double offset = ((r + 0.5) / rows - 0.5) * beam_w;
        at(px, py) = us + ts * offset;
      }
    }
  }
  if (!(peak > 0.0)) peak = 1.0;

  auto band = [&](double v) { return static_cast<int>(std::floor(v / peak * 10.0)); };
  os << "P6\n" << W << ' ' << H << "\n255\n";
  for (int py = 0; py < H; ++py) {
    for (int px = 0; px < W; ++px) {
      const double v = at(px, py);
      detail::Rgb c{235, 235, 235};
      if (!std::isnan(v)) {
        c = detail::diverging(v / peak);
        const bool edge_r = px + 1 < W && !std::isnan(at(px + 1, py)) && band(at(px + 1, py)) != band(v);
        const bool edge_d = py + 1 < H && !std::isnan(at(px, py + 1)) && band(at(px, py + 1)) != band(v);
        if (edge_r || edge_d) c = {40, 40, 40};
      }
      os.put(static_cast<char>(c.r)).put(static_cast<char>(c.g)).put(static_cast<char>(c.b));
    }
  }
}

}  // namespace gdq
