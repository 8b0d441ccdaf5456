#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gdq/errors.hpp"
#include "gdq/grid.hpp"
#include "gdq/physics.hpp"
#include "gdq/quadrature.hpp"
#include "gdq/weights.hpp"

namespace gdq {

using Index = Eigen::Index;

enum class Region { beam_bending, beam_torsion, plate };

inline std::string_view to_string(Region r) {
  switch (r) {
    case Region::beam_bending: return "beam_bending";
    case Region::beam_torsion: return "beam_torsion";
    case Region::plate: return "plate";
  }
  return "unknown";
}

/// What a matrix row enforces. Governing and tip-inertia rows carry the
/// eigenvalue on their own DOF; all others are massless constraints.
enum class RowKind { governing, tip_inertia, boundary, continuity, balance };

inline std::string_view to_string(RowKind k) {
  switch (k) {
    case RowKind::governing: return "governing";
    case RowKind::tip_inertia: return "tip_inertia";
    case RowKind::boundary: return "boundary";
    case RowKind::continuity: return "continuity";
    case RowKind::balance: return "balance";
  }
  return "unknown";
}

inline bool is_dynamic(RowKind k) { return k == RowKind::governing || k == RowKind::tip_inertia; }

struct DofEntry {
  Region region;
  std::size_t i = 0;
  std::size_t j = 0;
};

/// Global numbering: beam deflection nodes, then beam rotation nodes, then
/// plate nodes in row-major (x index major) order.
class DofMap {
 public:
  DofMap(std::size_t beam_nodes, std::size_t plate_nx, std::size_t plate_ny)
      : beam_nodes_(beam_nodes), nx_(plate_nx), ny_(plate_ny) {
    if ((plate_nx == 0) != (plate_ny == 0)) throw DomainError("plate grid needs both axes");
    for (std::size_t i = 0; i < beam_nodes; ++i) entries_.push_back({Region::beam_bending, i, 0});
    for (std::size_t i = 0; i < beam_nodes; ++i) entries_.push_back({Region::beam_torsion, i, 0});
    for (std::size_t i = 0; i < nx_; ++i) {
      for (std::size_t j = 0; j < ny_; ++j) entries_.push_back({Region::plate, i, j});
    }
  }

  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] std::size_t beam_nodes() const { return beam_nodes_; }
  [[nodiscard]] std::size_t plate_nx() const { return nx_; }
  [[nodiscard]] std::size_t plate_ny() const { return ny_; }
  [[nodiscard]] bool has_beam() const { return beam_nodes_ > 0; }
  [[nodiscard]] bool has_plate() const { return nx_ > 0; }

  [[nodiscard]] Index bending(std::size_t i) const { return static_cast<Index>(i); }
  [[nodiscard]] Index torsion(std::size_t i) const { return static_cast<Index>(beam_nodes_ + i); }
  [[nodiscard]] Index plate(std::size_t i, std::size_t j) const {
    return static_cast<Index>(2 * beam_nodes_ + i * ny_ + j);
  }
  [[nodiscard]] Index plate_offset() const { return static_cast<Index>(2 * beam_nodes_); }

  [[nodiscard]] const DofEntry& entry(Index k) const { return entries_.at(static_cast<std::size_t>(k)); }

  [[nodiscard]] std::string describe(Index k) const {
    const auto& e = entry(k);
    std::ostringstream os;
    os << to_string(e.region) << '(' << e.i + 1;
    if (e.region == Region::plate) os << ',' << e.j + 1;
    os << ')';
    return os.str();
  }

  [[nodiscard]] const std::vector<Index>& interior() const { return interior_; }
  [[nodiscard]] const std::vector<Index>& boundary() const { return boundary_; }

  void set_partition(std::vector<Index> interior, std::vector<Index> boundary) {
    if (interior.size() + boundary.size() != size()) {
      throw AccountingError("interior and boundary sets do not cover every DOF");
    }
    std::vector<char> seen(size(), 0);
    for (auto k : interior) seen.at(static_cast<std::size_t>(k))++;
    for (auto k : boundary) seen.at(static_cast<std::size_t>(k))++;
    if (std::any_of(seen.begin(), seen.end(), [](char c) { return c != 1; })) {
      throw AccountingError("interior and boundary sets overlap");
    }
    interior_ = std::move(interior);
    boundary_ = std::move(boundary);
  }

 private:
  std::size_t beam_nodes_;
  std::size_t nx_;
  std::size_t ny_;
  std::vector<DofEntry> entries_;
  std::vector<Index> interior_;
  std::vector<Index> boundary_;
};

struct RowRecord {
  RowKind kind = RowKind::boundary;
  std::string label;
};

/// Partitioned global operator. Row k of the unpartitioned system belongs to
/// DOF k; `rows` keeps the provenance of each.
struct SystemMatrices {
  Matrix A_II, A_IB, A_BI, A_BB;
  DofMap dofs{0, 0, 0};
  std::vector<RowRecord> rows;

  [[nodiscard]] std::size_t interior_count() const { return dofs.interior().size(); }
  [[nodiscard]] std::size_t boundary_count() const { return dofs.boundary().size(); }

  /// Unpartitioned square operator in DOF order.
  [[nodiscard]] Matrix full() const {
    const auto n = static_cast<Index>(dofs.size());
    Matrix a = Matrix::Zero(n, n);
    const auto& I = dofs.interior();
    const auto& B = dofs.boundary();
    for (std::size_t r = 0; r < I.size(); ++r) {
      for (std::size_t c = 0; c < I.size(); ++c) a(I[r], I[c]) = A_II(Index(r), Index(c));
      for (std::size_t c = 0; c < B.size(); ++c) a(I[r], B[c]) = A_IB(Index(r), Index(c));
    }
    for (std::size_t r = 0; r < B.size(); ++r) {
      for (std::size_t c = 0; c < I.size(); ++c) a(B[r], I[c]) = A_BI(Index(r), Index(c));
      for (std::size_t c = 0; c < B.size(); ++c) a(B[r], B[c]) = A_BB(Index(r), Index(c));
    }
    return a;
  }
};

/// Collects exactly one equation per DOF.
class RowAssembler {
 public:
  explicit RowAssembler(DofMap map)
      : map_(std::move(map)),
        a_(Matrix::Zero(static_cast<Index>(map_.size()), static_cast<Index>(map_.size()))),
        records_(map_.size()),
        taken_(map_.size(), false) {}

  [[nodiscard]] const DofMap& dofs() const { return map_; }

  /// Reserves the row of `dof` and returns it for writing.
  Matrix::RowXpr claim(Index dof, RowKind kind, std::string label) {
    const auto k = static_cast<std::size_t>(dof);
    if (k >= taken_.size()) throw AccountingError("row index out of range: " + std::to_string(dof));
    if (taken_[k]) {
      throw AccountingError("conflicting rows on " + map_.describe(dof) + ": '" + records_[k].label +
                            "' and '" + label + "'");
    }
    taken_[k] = true;
    records_[k] = RowRecord{kind, std::move(label)};
    return a_.row(dof);
  }

  [[nodiscard]] bool is_claimed(Index dof) const { return taken_.at(static_cast<std::size_t>(dof)); }

  /// Splits rows into dynamic (interior) and constraint (boundary) blocks.
  [[nodiscard]] SystemMatrices partition() const {
    std::vector<Index> interior;
    std::vector<Index> boundary;
    std::ostringstream missing;
    std::size_t n_missing = 0;
    for (std::size_t k = 0; k < taken_.size(); ++k) {
      if (!taken_[k]) {
        if (n_missing < 12) missing << ' ' << map_.describe(static_cast<Index>(k));
        ++n_missing;
        continue;
      }
      (is_dynamic(records_[k].kind) ? interior : boundary).push_back(static_cast<Index>(k));
    }
    if (n_missing > 0) {
      throw AccountingError(std::to_string(n_missing) + " of " + std::to_string(taken_.size()) +
                            " DOFs have no equation:" + missing.str() + (n_missing > 12 ? " ..." : ""));
    }
    SystemMatrices s;
    s.dofs = map_;
    s.dofs.set_partition(interior, boundary);
    s.rows = records_;
    s.A_II = a_(interior, interior);
    s.A_IB = a_(interior, boundary);
    s.A_BI = a_(boundary, interior);
    s.A_BB = a_(boundary, boundary);
    return s;
  }

 private:
  DofMap map_;
  Matrix a_;
  std::vector<RowRecord> records_;
  std::vector<bool> taken_;
};

// ---------------------------------------------------------------------------
// Model descriptions

/// Lumped body at the beam tip.
struct TipLoad {
  double mass = 0.0;            // kg
  double rotary_inertia = 0.0;  // kg m^2 about the beam axis

  /// Tip load reproducing the mass ratio M/(rho*A*l) and the inertia ratio
  /// rho*Ip*l/I_d.
  static TipLoad from_ratios(double mass_ratio, double inertia_ratio, const Material& mat,
                             const BeamSection& sec) {
    if (mass_ratio < 0.0 || inertia_ratio < 0.0) throw DomainError("tip ratios must be non-negative");
    TipLoad t;
    t.mass = mass_ratio * mat.rho * sec.area * sec.length;
    t.rotary_inertia = inertia_ratio > 0.0 ? mat.rho * sec.polar_Ip * sec.length / inertia_ratio : 0.0;
    return t;
  }
};

inline double mass_ratio(const TipLoad& tip, const Material& mat, const BeamSection& sec) {
  return tip.mass / (mat.rho * sec.area * sec.length);
}

inline double inertia_ratio(const TipLoad& tip, const Material& mat, const BeamSection& sec) {
  return mat.rho * sec.polar_Ip * sec.length / tip.rotary_inertia;
}

enum class EdgeSupport { free, clamped };

/// Supports of the edges x = 0, x = a, y = 0, y = b.
struct PlateEdges {
  EdgeSupport x0 = EdgeSupport::free;
  EdgeSupport xa = EdgeSupport::free;
  EdgeSupport y0 = EdgeSupport::free;
  EdgeSupport yb = EdgeSupport::free;
};

struct BeamLayout {
  DiffMatrixSet diff;
  Material material;
  BeamSection section;
  std::optional<TipLoad> tip;

  [[nodiscard]] std::size_t nodes() const { return diff.n(); }
  [[nodiscard]] const Grid1D& grid() const { return diff.grid(); }
};

struct PlateLayout {
  DiffMatrixSet dx;
  DiffMatrixSet dy;
  Material material;
  PlateSection section;
  PlateEdges edges;

  [[nodiscard]] std::size_t nx() const { return dx.n(); }
  [[nodiscard]] std::size_t ny() const { return dy.n(); }
};

struct JunctionLayout {
  double y_center = 0.0;
  double width = 0.0;
  std::vector<std::size_t> footprint;  // plate y indices on the attached edge
};

/// Everything needed to interpret a solution vector.
struct Layout {
  DofMap dofs{0, 0, 0};
  std::optional<BeamLayout> beam;
  std::optional<PlateLayout> plate;
  std::optional<JunctionLayout> junction;
  NondimGroups groups;
  /// Angular-frequency-squared scale dividing every dynamic row.
  double lambda_ref = 1.0;

  [[nodiscard]] Vector beam_deflection(const Vector& field) const {
    return field.segment(0, static_cast<Index>(dofs.beam_nodes()));
  }
  [[nodiscard]] Vector beam_rotation(const Vector& field) const {
    return field.segment(static_cast<Index>(dofs.beam_nodes()), static_cast<Index>(dofs.beam_nodes()));
  }
  /// Plate deflections as an nx-by-ny matrix.
  [[nodiscard]] Matrix plate_deflection(const Vector& field) const {
    Matrix w(static_cast<Index>(dofs.plate_nx()), static_cast<Index>(dofs.plate_ny()));
    for (std::size_t i = 0; i < dofs.plate_nx(); ++i) {
      for (std::size_t j = 0; j < dofs.plate_ny(); ++j) {
        w(Index(i), Index(j)) = field(dofs.plate(i, j));
      }
    }
    return w;
  }
};

struct Problem {
  SystemMatrices system;
  Layout layout;
};

// ---------------------------------------------------------------------------
// Plate derivative stencils

struct PlateTerm {
  int order_x;
  int order_y;
  double coeff;
};

namespace plate_ops {

inline std::vector<PlateTerm> deflection() { return {{0, 0, 1.0}}; }
inline std::vector<PlateTerm> slope_x() { return {{1, 0, 1.0}}; }
inline std::vector<PlateTerm> slope_y() { return {{0, 1, 1.0}}; }
inline std::vector<PlateTerm> twist() { return {{1, 1, 1.0}}; }
inline std::vector<PlateTerm> biharmonic() { return {{4, 0, 1.0}, {2, 2, 2.0}, {0, 4, 1.0}}; }
/// Curvature combinations proportional to -M_x/D and -M_y/D.
inline std::vector<PlateTerm> moment_x(double nu) { return {{2, 0, 1.0}, {0, 2, nu}}; }
inline std::vector<PlateTerm> moment_y(double nu) { return {{0, 2, 1.0}, {2, 0, nu}}; }
/// Effective shear combinations proportional to -V_x/D and -V_y/D.
inline std::vector<PlateTerm> shear_x(double nu) { return {{3, 0, 1.0}, {1, 2, 2.0 - nu}}; }
inline std::vector<PlateTerm> shear_y(double nu) { return {{0, 3, 1.0}, {2, 1, 2.0 - nu}}; }

}  // namespace plate_ops

/// Adds scale * (sum of terms evaluated at node (i, j)) into a global row.
template <typename Row>
void add_plate_stencil(Row&& row, const DofMap& dofs, const PlateLayout& p,
                       const std::vector<PlateTerm>& terms, std::size_t i, std::size_t j, double scale) {
  const std::size_t nx = p.nx();
  const std::size_t ny = p.ny();
  for (const auto& t : terms) {
    const double c = scale * t.coeff;
    if (t.order_x == 0 && t.order_y == 0) {
      row(dofs.plate(i, j)) += c;
    } else if (t.order_y == 0) {
      const auto& d = p.dx.order(t.order_x);
      for (std::size_t k = 0; k < nx; ++k) row(dofs.plate(k, j)) += c * d(Index(i), Index(k));
    } else if (t.order_x == 0) {
      const auto& d = p.dy.order(t.order_y);
      for (std::size_t l = 0; l < ny; ++l) row(dofs.plate(i, l)) += c * d(Index(j), Index(l));
    } else {
      const auto& ddx = p.dx.order(t.order_x);
      const auto& ddy = p.dy.order(t.order_y);
      for (std::size_t k = 0; k < nx; ++k) {
        const double ck = c * ddx(Index(i), Index(k));
        if (ck == 0.0) continue;
        for (std::size_t l = 0; l < ny; ++l) row(dofs.plate(k, l)) += ck * ddy(Index(j), Index(l));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Row emitters

namespace detail {

inline std::string node_label(std::string_view what, std::size_t i) {
  return std::string(what) + " @" + std::to_string(i + 1);
}

inline std::string node_label(std::string_view what, std::size_t i, std::size_t j) {
  return std::string(what) + " @(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace detail

/// Fourth-order rows on beam nodes 3..S-2.
inline void assemble_beam_bending(RowAssembler& rows, const BeamLayout& beam, double lambda_ref) {
  const std::size_t S = beam.nodes();
  if (S < 7) throw DomainError("beam bending needs at least 7 nodes");
  const auto& dofs = rows.dofs();
  const double k = beam.material.E * beam.section.bending_I / (beam.material.rho * beam.section.area) / lambda_ref;
  const auto& d4 = beam.diff.order(4);
  for (std::size_t r = 2; r + 2 < S; ++r) {
    auto row = rows.claim(dofs.bending(r), RowKind::governing, detail::node_label("beam bending", r));
    for (std::size_t c = 0; c < S; ++c) row(dofs.bending(c)) = k * d4(Index(r), Index(c));
  }
}

/// Second-order rows on beam nodes 2..S-1, signed so eigenvalues are positive.
inline void assemble_beam_torsion(RowAssembler& rows, const BeamLayout& beam, double lambda_ref) {
  const std::size_t S = beam.nodes();
  if (S < 5) throw DomainError("beam torsion needs at least 5 nodes");
  const auto& dofs = rows.dofs();
  const double k = beam.material.G * beam.section.torsion_J / (beam.material.rho * beam.section.polar_Ip) / lambda_ref;
  const auto& d2 = beam.diff.order(2);
  for (std::size_t r = 1; r + 1 < S; ++r) {
    auto row = rows.claim(dofs.torsion(r), RowKind::governing, detail::node_label("beam torsion", r));
    for (std::size_t c = 0; c < S; ++c) row(dofs.torsion(c)) = -k * d2(Index(r), Index(c));
  }
}

/// Clamped root: zero deflection, zero slope, zero twist.
inline void assemble_beam_bcs(RowAssembler& rows, const BeamLayout& beam) {
  const std::size_t S = beam.nodes();
  const auto& dofs = rows.dofs();
  rows.claim(dofs.bending(0), RowKind::boundary, "root deflection")(dofs.bending(0)) = 1.0;
  auto slope = rows.claim(dofs.bending(1), RowKind::boundary, "root slope");
  for (std::size_t c = 0; c < S; ++c) slope(dofs.bending(c)) = beam.diff.order(1)(0, Index(c));
  rows.claim(dofs.torsion(0), RowKind::boundary, "root twist")(dofs.torsion(0)) = 1.0;
}

/// Rows at the beam tip of an uncoupled beam: zero moment, then either zero
/// shear and torque or the lumped tip body's inertia.
inline void assemble_beam_end(RowAssembler& rows, const BeamLayout& beam, double lambda_ref) {
  const std::size_t S = beam.nodes();
  const auto last = Index(S - 1);
  const auto& dofs = rows.dofs();
  const auto& z = beam.diff;
  const double EI = beam.material.E * beam.section.bending_I;
  const double GJ = beam.material.G * beam.section.torsion_J;
  const double mass = beam.tip ? beam.tip->mass : 0.0;
  const double inertia = beam.tip ? beam.tip->rotary_inertia : 0.0;

  auto moment = rows.claim(dofs.bending(S - 2), RowKind::boundary, "tip moment");
  for (std::size_t c = 0; c < S; ++c) moment(dofs.bending(c)) = z.order(2)(last, Index(c));

  if (mass > 0.0) {
    auto row = rows.claim(dofs.bending(S - 1), RowKind::tip_inertia, "tip mass");
    for (std::size_t c = 0; c < S; ++c) row(dofs.bending(c)) = -EI / mass * z.order(3)(last, Index(c)) / lambda_ref;
  } else {
    auto row = rows.claim(dofs.bending(S - 1), RowKind::boundary, "tip shear");
    for (std::size_t c = 0; c < S; ++c) row(dofs.bending(c)) = z.order(3)(last, Index(c));
  }

  if (inertia > 0.0) {
    auto row = rows.claim(dofs.torsion(S - 1), RowKind::tip_inertia, "tip rotary inertia");
    for (std::size_t c = 0; c < S; ++c) row(dofs.torsion(c)) = GJ / inertia * z.order(1)(last, Index(c)) / lambda_ref;
  } else {
    auto row = rows.claim(dofs.torsion(S - 1), RowKind::boundary, "tip torque");
    for (std::size_t c = 0; c < S; ++c) row(dofs.torsion(c)) = z.order(1)(last, Index(c));
  }
}

/// Biharmonic rows on plate nodes 3..N-2 x 3..M-2.
inline void assemble_plate(RowAssembler& rows, const PlateLayout& plate, double lambda_ref) {
  const std::size_t N = plate.nx();
  const std::size_t M = plate.ny();
  if (N < 7 || M < 7) throw DomainError("plate needs at least 7 nodes per axis");
  const double k = plate.section.D / (plate.material.rho * plate.section.h) / lambda_ref;
  const auto ops = plate_ops::biharmonic();
  for (std::size_t i = 2; i + 2 < N; ++i) {
    for (std::size_t j = 2; j + 2 < M; ++j) {
      auto row = rows.claim(rows.dofs().plate(i, j), RowKind::governing, detail::node_label("plate", i, j));
      add_plate_stencil(row, rows.dofs(), plate, ops, i, j, k);
    }
  }
}

/// Edge and corner rows of the plate.
///
/// Each edge owns two layers of DOFs: the edge node and its neighbour. A free
/// edge puts the moment row on the edge node and the effective-shear row,
/// evaluated on the edge, on the neighbour. A clamped edge puts deflection
/// and normal slope there instead and owns its full length including the
/// corner blocks; an x-edge takes precedence over a y-edge. A free-free
/// corner block gets zero twist at the corner, the edge moments at the two
/// nodes next to it, and the summed edge moments at the corner on the
/// diagonal node. Nodes listed in `attached` on the x = 0 edge are left for
/// the junction rows.
inline void assemble_plate_edges(RowAssembler& rows, const PlateLayout& plate,
                                 const std::vector<std::size_t>& attached = {}) {
  const auto& dofs = rows.dofs();
  const std::size_t N = plate.nx();
  const std::size_t M = plate.ny();
  const double nu = plate.material.nu;
  const auto& e = plate.edges;
  std::vector<bool> attached_mask(M, false);
  for (auto j : attached) attached_mask.at(j) = true;

  auto emit = [&](std::size_t dof_i, std::size_t dof_j, RowKind kind, std::string_view what,
                  const std::vector<PlateTerm>& ops, std::size_t i, std::size_t j) {
    auto row = rows.claim(dofs.plate(dof_i, dof_j), kind, detail::node_label(what, i, j));
    add_plate_stencil(row, dofs, plate, ops, i, j, 1.0);
  };

  // x-edges
  for (const bool at_start : {true, false}) {
    const auto support = at_start ? e.x0 : e.xa;
    const std::size_t ib = at_start ? 0 : N - 1;
    const std::size_t ia = at_start ? 1 : N - 2;
    if (support == EdgeSupport::clamped) {
      if (at_start && !attached.empty()) throw DomainError("beam cannot attach to a clamped edge");
      for (std::size_t j = 0; j < M; ++j) {
        emit(ib, j, RowKind::boundary, "clamped deflection", plate_ops::deflection(), ib, j);
        emit(ia, j, RowKind::boundary, "clamped slope", plate_ops::slope_x(), ib, j);
      }
    } else {
      for (std::size_t j = 2; j + 2 < M; ++j) {
        if (at_start && attached_mask[j]) continue;
        emit(ib, j, RowKind::boundary, "free moment x", plate_ops::moment_x(nu), ib, j);
        emit(ia, j, RowKind::boundary, "free shear x", plate_ops::shear_x(nu), ib, j);
      }
    }
  }
  // y-edges
  for (const bool at_start : {true, false}) {
    const auto support = at_start ? e.y0 : e.yb;
    const std::size_t jb = at_start ? 0 : M - 1;
    const std::size_t ja = at_start ? 1 : M - 2;
    if (support == EdgeSupport::clamped) {
      const std::size_t lo = e.x0 == EdgeSupport::clamped ? 2 : 0;
      const std::size_t hi = e.xa == EdgeSupport::clamped ? N - 2 : N;
      for (std::size_t i = lo; i < hi; ++i) {
        emit(i, jb, RowKind::boundary, "clamped deflection", plate_ops::deflection(), i, jb);
        emit(i, ja, RowKind::boundary, "clamped slope", plate_ops::slope_y(), i, jb);
      }
    } else {
      for (std::size_t i = 2; i + 2 < N; ++i) {
        emit(i, jb, RowKind::boundary, "free moment y", plate_ops::moment_y(nu), i, jb);
        emit(i, ja, RowKind::boundary, "free shear y", plate_ops::shear_y(nu), i, jb);
      }
    }
  }
  // free-free corner blocks
  for (const bool x_start : {true, false}) {
    for (const bool y_start : {true, false}) {
      const auto sx = x_start ? e.x0 : e.xa;
      const auto sy = y_start ? e.y0 : e.yb;
      if (sx == EdgeSupport::clamped || sy == EdgeSupport::clamped) continue;
      const std::size_t ib = x_start ? 0 : N - 1;
      const std::size_t ia = x_start ? 1 : N - 2;
      const std::size_t jb = y_start ? 0 : M - 1;
      const std::size_t ja = y_start ? 1 : M - 2;
      if (x_start && (attached_mask[jb] || attached_mask[ja])) continue;
      emit(ib, jb, RowKind::boundary, "corner twist", plate_ops::twist(), ib, jb);
      emit(ib, ja, RowKind::boundary, "free moment x", plate_ops::moment_x(nu), ib, ja);
      emit(ia, jb, RowKind::boundary, "free moment y", plate_ops::moment_y(nu), ia, jb);
      auto row = rows.claim(dofs.plate(ia, ja), RowKind::boundary, detail::node_label("corner moments", ib, jb));
      add_plate_stencil(row, dofs, plate, plate_ops::moment_x(nu), ib, jb, 1.0);
      add_plate_stencil(row, dofs, plate, plate_ops::moment_y(nu), ib, jb, 1.0);
    }
  }
}

/// Plate y indices whose coordinate lies within the beam footprint.
inline std::vector<std::size_t> footprint_nodes(const Grid1D& y, double y_center, double width) {
  const double b = y.length();
  if (!(width > 0.0)) throw DomainError("beam footprint width must be positive");
  if (y_center - 0.5 * width < -1e-12 * b || y_center + 0.5 * width > b * (1.0 + 1e-12)) {
    throw DomainError("beam footprint is wider than the plate edge");
  }
  const double tol = 1e-9 * b;
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (y[j] >= y_center - 0.5 * width - tol && y[j] <= y_center + 0.5 * width + tol) out.push_back(j);
  }
  return out;
}

/// Junction rows between the beam tip and the plate edge x = 0.
///
/// Attached edge nodes follow the rigid beam section: deflection
/// U + Theta * (y - y_c) on the edge node and slope U' on its neighbour.
/// Three balance rows close the system on the beam tip DOFs. They equate the
/// beam's shear force, bending moment and torque at the tip with the plate's
/// total inertial load and its first moments about the edge and the beam
/// axis. The plate load is integrated from the governing operator on the
/// interior nodes, where it equals the inertial load exactly.
inline void assemble_continuity(RowAssembler& rows, const BeamLayout& beam, const PlateLayout& plate,
                                const JunctionLayout& junction) {
  const auto& dofs = rows.dofs();
  const std::size_t S = beam.nodes();
  const std::size_t N = plate.nx();
  const std::size_t M = plate.ny();
  const auto& fp = junction.footprint;
  if (fp.empty()) throw DomainError("beam footprint contains no plate edge nodes");
  if (fp.size() < 3) {
    throw DomainError("beam footprint covers only " + std::to_string(fp.size()) +
                      " plate edge node(s); at least 3 are required (refine the y grid)");
  }
  std::vector<bool> in(M, false);
  for (auto j : fp) in.at(j) = true;
  if (in[0] != in[1] || in[M - 1] != in[M - 2]) {
    throw DomainError("beam footprint must cover both or neither of the two nodes at a plate corner");
  }
  const auto last = Index(S - 1);
  const auto& yg = plate.dy.grid();
  const auto& xg = plate.dx.grid();

  for (auto j : fp) {
    auto disp = rows.claim(dofs.plate(0, j), RowKind::continuity, detail::node_label("attached deflection", 0, j));
    disp(dofs.plate(0, j)) = 1.0;
    disp(dofs.bending(S - 1)) -= 1.0;
    disp(dofs.torsion(S - 1)) -= yg[j] - junction.y_center;

    auto slope = rows.claim(dofs.plate(1, j), RowKind::continuity, detail::node_label("attached slope", 0, j));
    add_plate_stencil(slope, dofs, plate, plate_ops::slope_x(), 0, j, 1.0);
    for (std::size_t c = 0; c < S; ++c) slope(dofs.bending(c)) -= beam.diff.order(1)(last, Index(c));
  }

  const double EI = beam.material.E * beam.section.bending_I;
  const double GJ = beam.material.G * beam.section.torsion_J;
  const double D = plate.section.D;

  auto shear = rows.claim(dofs.bending(S - 1), RowKind::balance, "junction shear");
  auto moment = rows.claim(dofs.bending(S - 2), RowKind::balance, "junction moment");
  auto torque = rows.claim(dofs.torsion(S - 1), RowKind::balance, "junction torque");
  for (std::size_t c = 0; c < S; ++c) {
    shear(dofs.bending(c)) = -EI * beam.diff.order(3)(last, Index(c));
    moment(dofs.bending(c)) = EI * beam.diff.order(2)(last, Index(c));
    torque(dofs.torsion(c)) = GJ * beam.diff.order(1)(last, Index(c));
  }

  std::vector<double> xi(xg.points().begin() + 2, xg.points().end() - 2);
  std::vector<double> yi(yg.points().begin() + 2, yg.points().end() - 2);
  const auto qx = cardinal_integrals(xi, 0.0, xg.length());
  const auto qy = cardinal_integrals(yi, 0.0, yg.length());
  const auto ops = plate_ops::biharmonic();
  for (std::size_t i = 2; i + 2 < N; ++i) {
    for (std::size_t j = 2; j + 2 < M; ++j) {
      const double w = D * qx[i - 2] * qy[j - 2];
      add_plate_stencil(shear, dofs, plate, ops, i, j, -w);
      add_plate_stencil(moment, dofs, plate, ops, i, j, -w * xg[i]);
      add_plate_stencil(torque, dofs, plate, ops, i, j, -w * (yg[j] - junction.y_center));
    }
  }
}

// ---------------------------------------------------------------------------
// Condensation

struct Condensed {
  Matrix K;  // interior operator after eliminating boundary DOFs
  Matrix R;  // boundary values = R * interior values
  double cond_BB = 0.0;
};

/// Eliminates the boundary DOFs. Boundary rows are equilibrated by their
/// largest entry first; the result does not depend on that scaling.
inline Condensed condense(const SystemMatrices& sys) {
  const Index q = sys.A_BB.rows();
  Condensed out;
  if (q == 0) {
    out.K = sys.A_II;
    out.R = Matrix::Zero(0, sys.A_II.cols());
    out.cond_BB = 1.0;
    return out;
  }
  Matrix abb = sys.A_BB;
  Matrix abi = sys.A_BI;
  for (Index r = 0; r < q; ++r) {
    const double s = std::max(abb.row(r).cwiseAbs().maxCoeff(),
                              abi.cols() > 0 ? abi.row(r).cwiseAbs().maxCoeff() : 0.0);
    if (s == 0.0) {
      throw SingularSystemError("boundary row " + sys.dofs.describe(sys.dofs.boundary()[std::size_t(r)]) +
                                " is identically zero");
    }
    abb.row(r) /= s;
    abi.row(r) /= s;
  }
  Eigen::BDCSVD<Matrix> svd(abb);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(q - 1);
  out.cond_BB = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(smin > 1e-14 * smax)) {
    Eigen::JacobiSVD<Matrix> full(abb.transpose(), Eigen::ComputeFullV | Eigen::ComputeFullU);
    const Vector v = full.matrixU().col(q - 1);
    std::vector<Index> order(static_cast<std::size_t>(q));
    for (Index r = 0; r < q; ++r) order[std::size_t(r)] = r;
    std::sort(order.begin(), order.end(), [&](Index a, Index b) { return std::abs(v(a)) > std::abs(v(b)); });
    std::ostringstream os;
    os << "boundary block is singular (condition " << out.cond_BB << "); nearly dependent rows:";
    for (std::size_t k = 0; k < std::min<std::size_t>(6, order.size()); ++k) {
      const auto dof = sys.dofs.boundary()[std::size_t(order[k])];
      os << "\n  " << sys.dofs.describe(dof) << " [" << sys.rows[std::size_t(dof)].label << "] weight "
         << v(order[k]);
    }
    throw SingularSystemError(os.str());
  }
  Eigen::PartialPivLU<Matrix> lu(abb);
  out.R = -lu.solve(abi);
  out.K = sys.A_II + sys.A_IB * out.R;
  return out;
}

// ---------------------------------------------------------------------------
// Problem builders

inline double beam_lambda_ref(const Material& m, const BeamSection& s) {
  return m.E * s.bending_I / (m.rho * s.area * std::pow(s.length, 4));
}

inline double plate_lambda_ref(const Material& m, const PlateSection& p) {
  return p.D / (m.rho * p.h * std::pow(p.a, 4));
}

/// Clamped-free beam carrying bending and torsion, optionally with a tip body.
inline Problem build_beam_problem(BeamLayout beam) {
  Problem p;
  p.layout.dofs = DofMap(beam.nodes(), 0, 0);
  p.layout.lambda_ref = beam_lambda_ref(beam.material, beam.section);
  p.layout.groups = NondimGroups::for_beam(beam.material, beam.section);
  RowAssembler rows(p.layout.dofs);
  assemble_beam_bending(rows, beam, p.layout.lambda_ref);
  assemble_beam_torsion(rows, beam, p.layout.lambda_ref);
  assemble_beam_bcs(rows, beam);
  assemble_beam_end(rows, beam, p.layout.lambda_ref);
  p.system = rows.partition();
  p.layout.beam = std::move(beam);
  return p;
}

inline Problem build_plate_problem(PlateLayout plate) {
  Problem p;
  p.layout.dofs = DofMap(0, plate.nx(), plate.ny());
  p.layout.lambda_ref = plate_lambda_ref(plate.material, plate.section);
  p.layout.groups = NondimGroups::for_plate(plate.material, plate.section);
  RowAssembler rows(p.layout.dofs);
  assemble_plate(rows, plate, p.layout.lambda_ref);
  assemble_plate_edges(rows, plate);
  p.system = rows.partition();
  p.layout.plate = std::move(plate);
  return p;
}

/// Beam clamped at its root and attached at its tip to the x = 0 edge of the
/// plate over a footprint of the beam's width centred at y_center.
inline Problem build_coupled_problem(BeamLayout beam, PlateLayout plate, double y_center) {
  if (beam.tip) throw DomainError("coupled model takes the plate in place of a tip body");
  if (plate.edges.x0 != EdgeSupport::free) throw DomainError("the attached plate edge must be free");
  JunctionLayout junction;
  junction.y_center = y_center;
  junction.width = beam.section.width;
  junction.footprint = footprint_nodes(plate.dy.grid(), y_center, junction.width);

  Problem p;
  p.layout.dofs = DofMap(beam.nodes(), plate.nx(), plate.ny());
  p.layout.lambda_ref = plate_lambda_ref(plate.material, plate.section);
  p.layout.groups = NondimGroups::combine(NondimGroups::for_beam(beam.material, beam.section),
                                          NondimGroups::for_plate(plate.material, plate.section));
  RowAssembler rows(p.layout.dofs);
  assemble_beam_bending(rows, beam, p.layout.lambda_ref);
  assemble_beam_torsion(rows, beam, p.layout.lambda_ref);
  assemble_beam_bcs(rows, beam);
  assemble_plate(rows, plate, p.layout.lambda_ref);
  assemble_plate_edges(rows, plate, junction.footprint);
  assemble_continuity(rows, beam, plate, junction);
  p.system = rows.partition();
  p.layout.beam = std::move(beam);
  p.layout.plate = std::move(plate);
  p.layout.junction = std::move(junction);
  return p;
}

}  // namespace gdq
