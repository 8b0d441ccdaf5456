// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gdq/run.hpp"

using namespace gdq;

namespace tol {
constexpr double oracle_abs = 5e-4;
constexpr double torsion_closed_form = 1e-10;
constexpr double case1_bending = 0.005;
constexpr double case1_torsion = 0.002;
constexpr double tip = 0.01;
constexpr double plate = 0.015;
constexpr double rigid_ratio = 1e-4;
constexpr double gdq_pathology = 0.05;
constexpr double exactness = 1e-8;
constexpr double recursion = 1e-8;
constexpr double bc_residual = 1e-6;
constexpr double eig_residual = 1e-7;
constexpr double limit = 0.02;
constexpr double delta_sensitivity = 0.005;
constexpr double coupled_diag = 0.25;
constexpr double coupled_hz = 200.0;
}  // namespace tol

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [" << what << "]";
    }
  }
};

int failures = 0;

void report(int id, const std::string& title, Check& c) {
  std::printf("%s criterion %d: %s%s\n", c.ok ? "PASS" : "FAIL", id, title.c_str(), c.detail.str().c_str());
  std::fflush(stdout);
  if (!c.ok) ++failures;
}

std::string pct(double got, double want) { return format_number(100.0 * (got - want) / want, 3) + "%"; }

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Compares the first n values; records the worst relative error.
void compare(Check& c, const std::string& label, const std::vector<double>& got, const std::vector<double>& want,
             std::size_t n, double limit) {
  if (got.size() < n) {
    c.require(false, label + ": only " + std::to_string(got.size()) + " of " + std::to_string(n) + " modes");
    return;
  }
  double worst = 0.0;
  std::size_t at = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = rel(got[k], want[k]);
    if (e > limit) c.require(false, label + " mode " + std::to_string(k + 1) + " " + format_number(got[k], 6) +
                                        " vs " + format_number(want[k], 6) + " (" + pct(got[k], want[k]) + ")");
    if (e > worst) {
      worst = e;
      at = k + 1;
    }
  }
  c.detail << " " << label << " worst " << format_number(100.0 * worst, 3) << "% at mode " << at << ";";
}

std::vector<double> plate_tagged(const ModalSolution& sol, double floor = 0.0) {
  std::vector<double> out;
  for (const auto& m : sol.modes) {
    if (!m.rigid && m.classification.tag == ModeTag::plate && *m.nondim_plate > floor) out.push_back(*m.nondim_plate);
  }
  return out;
}

double falling(double k, int m) {
  double r = 1.0;
  for (int q = 0; q < m; ++q) r *= k - q;
  return r;
}

// -------------------------------------------------------------------------

void criterion_1() {
  Check c;
  const auto b = oracles::cantilever_bending_roots(8);
  const std::vector<double> table{1.875, 4.694, 7.855, 10.996, 14.137, 17.279, 20.420, 23.562};
  double worst = 0.0;
  for (std::size_t k = 0; k < 8; ++k) {
    worst = std::max(worst, std::abs(b[k] - table[k]));
    c.require(std::abs(b[k] - table[k]) <= tol::oracle_abs, "bending root " + std::to_string(k + 1));
  }
  const auto t = oracles::cantilever_torsion_roots(8);
  double worst_t = 0.0;
  for (std::size_t k = 0; k < 8; ++k) {
    const double want = (2.0 * double(k + 1) - 1.0) * std::numbers::pi / 2.0;
    worst_t = std::max(worst_t, std::abs(t[k] - want));
    c.require(std::abs(t[k] - want) <= tol::torsion_closed_form, "torsion root " + std::to_string(k + 1));
  }
  c.detail << " max |bending - table| " << format_number(worst, 3) << ", max |torsion - (2j-1)pi/2| "
           << format_number(worst_t, 3);
  report(1, "cantilever oracle roots", c);
}

void criterion_2_3() {
  auto cfg = preset_defaults(Preset::case1_beam);
  const auto r = run_case(cfg, cfg.grid);
  {
    Check c;
    compare(c, "bending", family_values(r.solution, "bending"), oracles::cantilever_bending_roots(8), 8,
            tol::case1_bending);
    report(2, "case 1 bending, GDQ S=15, within 0.5%", c);
  }
  {
    Check c;
    compare(c, "torsion", family_values(r.solution, "torsion"), oracles::cantilever_torsion_roots(8), 8,
            tol::case1_torsion);
    report(3, "case 1 torsion, S=15, within 0.2%", c);
  }
  // same grid size with delta points, for context only
  cfg.method = Method::mgdq;
  const auto m = run_case(cfg, cfg.grid);
  Check d;
  compare(d, "mgdq bending", family_values(m.solution, "bending"), oracles::cantilever_bending_roots(8), 8, 1.0);
  compare(d, "mgdq torsion", family_values(m.solution, "torsion"), oracles::cantilever_torsion_roots(8), 8, 1.0);
  std::printf("  diagnostic:%s\n", d.detail.str().c_str());
}

void criterion_4() {
  Check c;
  auto cfg = preset_defaults(Preset::case1_tipmass);
  cfg.asserted_tip_ratios.reset();
  const auto sec = beam_section(cfg);
  const auto tip = TipLoad::from_ratios(oracles::reference_mass_ratio, oracles::reference_inertia_ratio,
                                        cfg.beam.material, sec);
  cfg.beam.tip_mass = tip.mass;
  cfg.beam.tip_inertia = tip.rotary_inertia;
  const auto r = run_case(cfg, cfg.grid);
  compare(c, "bending", family_values(r.solution, "bending"),
          oracles::tip_mass_bending_roots(oracles::reference_mass_ratio, 8), 8, tol::tip);
  compare(c, "torsion", family_values(r.solution, "torsion"),
          oracles::tip_inertia_torsion_roots(oracles::reference_inertia_ratio, 8), 8, tol::tip);
  report(4, "tip mass R_z=9.734, R_theta=0.051, S=" + std::to_string(cfg.grid.S) + ", within 1%", c);
}

void criterion_5() {
  Check c;
  auto cfg = preset_defaults(Preset::case2_ffff);
  const auto r = run_case(cfg, cfg.grid);
  const auto& ref = oracles::reference("ffff_leissa_narita").values;
  const auto elastic = family_values(r.solution, "plate");
  compare(c, "mgdq", elastic, ref, 5, tol::plate);
  std::size_t rigid = 0;
  double largest = 0.0;
  for (const auto& m : r.solution.modes) {
    if (m.rigid) {
      ++rigid;
      largest = std::max(largest, *m.nondim_plate);
    }
  }
  c.require(rigid == 3, std::to_string(rigid) + " rigid modes");
  if (!elastic.empty()) {
    c.require(largest < tol::rigid_ratio * elastic.front(), "rigid mode above 1e-4 of first elastic");
  }
  c.detail << " rigid modes " << rigid << " (largest " << format_number(largest, 3) << ");";

  cfg.method = Method::gdq;
  const auto g = run_case(cfg, cfg.grid);
  const auto gv = family_values(g.solution, "plate");
  if (gv.empty()) {
    c.require(false, "gdq run returned no elastic modes");
  } else {
    const double e = rel(gv.front(), ref.front());
    c.require(e > tol::gdq_pathology, "gdq first-mode error " + pct(gv.front(), ref.front()) + " not above 5%");
    c.detail << " gdq first mode " << format_number(gv.front(), 6) << " (" << pct(gv.front(), ref.front()) << ")";
  }
  report(5, "case 2 FFFF, MGDQ 15x15 within 1.5%, three rigid modes, GDQ pathology", c);
}

void criterion_6() {
  Check c;
  auto cfg = preset_defaults(Preset::case3_cfff);
  const auto r = run_case(cfg, cfg.grid);
  compare(c, "mgdq", family_values(r.solution, "plate"), oracles::reference("cfff_leissa").values, 5, tol::plate);
  report(6, "case 3 CFFF, MGDQ 15x15 within 1.5%", c);
}

void criterion_7() {
  Check c;
  // differentiation matrices
  double worst_exact = 0.0;
  double worst_rec = 0.0;
  for (std::size_t n = 7; n <= 16; ++n) {
    for (const auto& g : {chebyshev_grid(n, 1.0), delta_modified_grid(n, 1.0, 1e-3)}) {
      const DiffMatrixSet d(g);
      Matrix power = d.order(1);
      for (int m = 1; m <= 4; ++m) {
        if (m > 1) {
          power = power * d.order(1);
          worst_rec = std::max(worst_rec, (power - d.order(m)).cwiseAbs().maxCoeff() / d.order(m).cwiseAbs().maxCoeff());
        }
        for (std::size_t k = 0; k < n; ++k) {
          double peak = 0.0;
          double err = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            const double exact = k >= std::size_t(m) ? falling(double(k), m) * std::pow(g[i], double(k) - m) : 0.0;
            double got = 0.0;
            for (std::size_t j = 0; j < n; ++j) got += d.order(m)(Index(i), Index(j)) * std::pow(g[j], double(k));
            peak = std::max(peak, std::abs(exact));
            err = std::max(err, std::abs(got - exact));
          }
          worst_exact = std::max(worst_exact, err / (peak > 0.0 ? peak : d.order(m).cwiseAbs().maxCoeff()));
        }
      }
    }
  }
  c.require(worst_exact < tol::exactness, "polynomial exactness " + format_number(worst_exact, 3));
  c.require(worst_rec < tol::recursion, "recursion vs power " + format_number(worst_rec, 3));
  c.detail << " exactness " << format_number(worst_exact, 3) << ", recursion " << format_number(worst_rec, 3) << ";";

  // residuals of every converged mode of every preset
  double worst_bc = 0.0;
  double worst_eq = 0.0;
  for (auto p : {Preset::case1_beam, Preset::case1_tipmass, Preset::case2_ffff, Preset::case3_cfff,
                 Preset::case4_coupled}) {
    const auto cfg = preset_defaults(p);
    const auto r = run_case(cfg, cfg.grid);
    for (const auto& m : r.solution.modes) {
      worst_bc = std::max(worst_bc, boundary_residual(r.problem.system, m.field));
      worst_eq = std::max(worst_eq,
                          unpartitioned_residual(r.problem.system, m.field, m.lambda / r.problem.layout.lambda_ref));
    }
  }
  c.require(worst_bc < tol::bc_residual, "boundary residual " + format_number(worst_bc, 3));
  c.require(worst_eq < tol::eig_residual, "unpartitioned residual " + format_number(worst_eq, 3));
  c.detail << " bc residual " << format_number(worst_bc, 3) << ", eigen residual " << format_number(worst_eq, 3) << ";";

  // rigid beam over the full edge: clamped edge
  {
    auto cfg = preset_defaults(Preset::case4_coupled);
    cfg.grid = {15, 15, 15};
    cfg.beam.material = Material::isotropic(cfg.beam.material.E * 1e6, cfg.beam.material.nu, cfg.beam.material.rho);
    cfg.beam.width = cfg.plate.b;
    const auto r = run_case(cfg, cfg.grid);
    compare(c, "rigid-beam limit vs CFFF", plate_tagged(r.solution), oracles::reference("cfff_leissa").values, 5,
            tol::limit);
  }
  // vanishing beam on the shipped coupled grid: free plate
  {
    auto cfg = preset_defaults(Preset::case4_coupled);
    const auto& b = cfg.beam.material;
    cfg.beam.material = Material::isotropic(b.E * 1e-6, b.nu, b.rho * 1e-6);
    const auto r = run_case(cfg, cfg.grid);
    compare(c, "vanishing-beam limit vs FFFF", plate_tagged(r.solution, 1.0),
            oracles::reference("ffff_leissa_narita").values, 5, tol::limit);
  }
  // delta sensitivity of the first FFFF mode
  {
    auto cfg = preset_defaults(Preset::case2_ffff);
    cfg.delta = 1e-4;
    const auto lo = family_values(run_case(cfg, cfg.grid).solution, "plate");
    cfg.delta = 1e-2;
    const auto hi = family_values(run_case(cfg, cfg.grid).solution, "plate");
    const double s = rel(hi.at(0), lo.at(0));
    c.require(s < tol::delta_sensitivity, "delta sensitivity " + format_number(100.0 * s, 3) + "%");
    c.detail << " delta 1e-4 -> 1e-2 changes mode 1 by " << format_number(100.0 * s, 3) << "%";
  }
  report(7, "property suite", c);
}

void criterion_8() {
  Check c;
  auto cfg = preset_defaults(Preset::case4_coupled);
  const auto r = run_case(cfg, cfg.grid);
  const auto& modes = r.solution.modes;
  bool nonneg = true;
  for (const auto& m : modes) nonneg = nonneg && m.lambda >= 0.0 && !m.rigid;
  c.require(nonneg, "negative or rigid eigenvalue retained");
  c.detail << " " << modes.size() << " modes below " << format_number(cfg.solver.cutoff_hz.value_or(0.0), 6)
           << " Hz, " << r.solution.report.discarded.size() << " discarded;";
  c.require(modes.size() >= 2, "fewer than two modes");
  if (modes.size() >= 2) {
    c.require(modes[0].classification.tag == ModeTag::beam_bending,
              std::string("mode 1 is ") + std::string(to_string(modes[0].classification.tag)));
    c.require(modes[1].classification.tag == ModeTag::beam_torsion,
              std::string("mode 2 is ") + std::string(to_string(modes[1].classification.tag)));
    c.detail << " mode 1 " << format_number(modes[0].hz, 5) << " Hz " << to_string(modes[0].classification.tag)
             << ", mode 2 " << format_number(modes[1].hz, 5) << " Hz " << to_string(modes[1].classification.tag) << ";";
  }
  const auto coupled = std::find_if(modes.begin(), modes.end(), [](const Mode& m) {
    return m.hz < tol::coupled_hz && m.classification.tag == ModeTag::coupled;
  });
  c.require(coupled != modes.end(), "no coupled mode below 200 Hz");
  if (coupled != modes.end()) c.detail << " coupled mode at " << format_number(coupled->hz, 5) << " Hz;";

  // mesh convergence with S = N varied and the edge grid fixed
  std::vector<std::vector<double>> f;
  for (std::size_t n : {9u, 11u, 13u, 15u}) {
    auto g = cfg.grid;
    g.S = g.N = n;
    auto v = family_values(run_case(cfg, g).solution, "hz");
    v.resize(5, 0.0);
    f.push_back(v);
  }
  for (std::size_t j = 0; j < 5; ++j) {
    const double fine = std::abs(f[3][j] - f[2][j]);
    const double coarse = std::abs(f[1][j] - f[0][j]);
    c.require(fine < coarse, "mesh indicator fails on mode " + std::to_string(j + 1));
  }
  report(8, "case 4 coupled system substitute gates", c);

  const auto& rep = oracles::reference("coupled_reported_hz").values;
  std::printf("  diagnostic (not gated): case 4 vs reported Hz within 25%%:");
  std::size_t within = 0;
  for (std::size_t k = 0; k < rep.size() && k < modes.size(); ++k) {
    const bool ok = rel(modes[k].hz, rep[k]) <= tol::coupled_diag;
    within += ok ? 1 : 0;
    std::printf(" %s/%s(%s)", format_number(modes[k].hz, 5).c_str(), format_number(rep[k], 6).c_str(),
                pct(modes[k].hz, rep[k]).c_str());
  }
  std::printf(" -> %zu of %zu within\n", within, rep.size());
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> steps{criterion_1, criterion_2_3, criterion_4, criterion_5,
                                                 criterion_6, criterion_7,   criterion_8};
  for (const auto& step : steps) {
    try {
      step();
    } catch (const std::exception& e) {
      std::printf("FAIL error: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d criterion line(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
