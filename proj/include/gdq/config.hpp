#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gdq/assembly.hpp"
#include "gdq/errors.hpp"
#include "gdq/grid.hpp"
#include "gdq/physics.hpp"

namespace gdq {

enum class Preset { case1_beam, case1_tipmass, case2_ffff, case3_cfff, case4_coupled, custom };

inline std::string_view to_string(Preset p) {
  switch (p) {
    case Preset::case1_beam: return "case1_beam";
    case Preset::case1_tipmass: return "case1_tipmass";
    case Preset::case2_ffff: return "case2_ffff";
    case Preset::case3_cfff: return "case3_cfff";
    case Preset::case4_coupled: return "case4_coupled";
    case Preset::custom: return "custom";
  }
  return "unknown";
}

inline Preset parse_preset(std::string_view s) {
  for (auto p : {Preset::case1_beam, Preset::case1_tipmass, Preset::case2_ffff, Preset::case3_cfff,
                 Preset::case4_coupled, Preset::custom}) {
    if (s == to_string(p)) return p;
  }
  throw ConfigError("unknown preset '" + std::string(s) + "'");
}

inline Method parse_method(std::string_view s) {
  if (s == "gdq") return Method::gdq;
  if (s == "mgdq") return Method::mgdq;
  throw ConfigError("method must be gdq or mgdq, got '" + std::string(s) + "'");
}

enum class ModelKind { beam, plate, coupled };

inline std::string_view to_string(ModelKind m) {
  switch (m) {
    case ModelKind::beam: return "beam";
    case ModelKind::plate: return "plate";
    case ModelKind::coupled: return "coupled";
  }
  return "unknown";
}

inline ModelKind parse_model(std::string_view s) {
  if (s == "beam") return ModelKind::beam;
  if (s == "plate") return ModelKind::plate;
  if (s == "coupled") return ModelKind::coupled;
  throw ConfigError("model must be beam, plate or coupled, got '" + std::string(s) + "'");
}

/// Beam nodes S and plate nodes N x M; unused axes stay 0.
struct GridSize {
  std::size_t S = 0;
  std::size_t N = 0;
  std::size_t M = 0;

  friend bool operator==(const GridSize&, const GridSize&) = default;
};

inline std::string to_string(const GridSize& g) {
  std::string s;
  auto add = [&s](std::size_t v) {
    if (v == 0) return;
    if (!s.empty()) s += 'x';
    s += std::to_string(v);
  };
  add(g.S);
  add(g.N);
  add(g.M);
  return s;
}

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= s.size(); ++k) {
    if (k == s.size() || s[k] == sep) {
      out.push_back(trim(s.substr(start, k - start)));
      start = k + 1;
    }
  }
  return out;
}

inline std::size_t parse_count(std::string_view s, std::string_view what) {
  std::size_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || s.empty()) {
    throw ConfigError(std::string(what) + ": expected a positive integer, got '" + std::string(s) + "'");
  }
  return v;
}

inline double parse_real(std::string_view s, std::string_view what) {
  const std::string str(s);
  char* end = nullptr;
  const double v = std::strtod(str.c_str(), &end);
  if (str.empty() || end != str.c_str() + str.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(what) + ": expected a number, got '" + str + "'");
  }
  return v;
}

inline bool parse_bool(std::string_view s, std::string_view what) {
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw ConfigError(std::string(what) + ": expected true or false, got '" + std::string(s) + "'");
}

}  // namespace detail

/// Grid text as `SxNxM`, `NxM` or a single count. A single count on a plate
/// model means N = M; on the coupled model S = N = M.
inline GridSize parse_grid(std::string_view text, ModelKind model) {
  const auto parts = detail::split(text, 'x');
  std::vector<std::size_t> v;
  for (const auto& p : parts) v.push_back(detail::parse_count(p, "grid"));
  GridSize g;
  switch (model) {
    case ModelKind::beam:
      if (v.size() != 1) throw ConfigError("beam models take a single grid size S, got '" + std::string(text) + "'");
      g.S = v[0];
      break;
    case ModelKind::plate:
      if (v.size() == 1) {
        g.N = g.M = v[0];
      } else if (v.size() == 2) {
        g.N = v[0];
        g.M = v[1];
      } else {
        throw ConfigError("plate models take NxM, got '" + std::string(text) + "'");
      }
      break;
    case ModelKind::coupled:
      if (v.size() == 1) {
        g.S = g.N = g.M = v[0];
      } else if (v.size() == 3) {
        g.S = v[0];
        g.N = v[1];
        g.M = v[2];
      } else {
        throw ConfigError("the coupled model takes SxNxM, got '" + std::string(text) + "'");
      }
      break;
  }
  return g;
}

inline std::vector<GridSize> parse_grid_list(std::string_view text, ModelKind model) {
  std::vector<GridSize> out;
  for (const auto& item : detail::split(text, ',')) out.push_back(parse_grid(item, model));
  return out;
}

inline PlateEdges parse_edges(std::string_view s) {
  if (s.size() != 4) throw ConfigError("edges: expected four letters from {C, F}, got '" + std::string(s) + "'");
  auto edge = [&s](char c) {
    if (c == 'C' || c == 'c') return EdgeSupport::clamped;
    if (c == 'F' || c == 'f') return EdgeSupport::free;
    throw ConfigError("edges: expected C or F, got '" + std::string(s) + "'");
  };
  return PlateEdges{edge(s[0]), edge(s[1]), edge(s[2]), edge(s[3])};
}

inline std::string to_string(const PlateEdges& e) {
  auto c = [](EdgeSupport s) { return s == EdgeSupport::clamped ? 'C' : 'F'; };
  return {c(e.x0), c(e.xa), c(e.y0), c(e.yb)};
}

struct BeamConfig {
  double length = 1.0;
  double width = 0.1;
  double thickness = 0.005;
  TorsionModel torsion = TorsionModel::saint_venant;
  Material material;
  double tip_mass = 0.0;     // kg
  double tip_inertia = 0.0;  // kg m^2
};

struct PlateConfig {
  double a = 1.0;
  double b = 1.0;
  double h = 0.005;
  Material material;
  PlateEdges edges;
  double attach_y = 0.5;  // beam centreline, fraction of b
};

struct SolverConfig {
  std::optional<double> cutoff_hz;
  /// Unset means 0.2, except plates on the unmodified grid, whose spurious
  /// complex pairs are the expected outcome and are only logged.
  std::optional<double> max_discard_fraction;
  double rigid_tol = 1e-6;
};

struct RunConfig {
  Preset preset = Preset::custom;
  ModelKind model = ModelKind::plate;
  Method method = Method::mgdq;
  double delta = 1e-3;
  GridSize grid;
  std::vector<GridSize> sweep;
  std::size_t modes = 0;
  std::string out_dir = "out";
  bool plots = false;
  BeamConfig beam;
  PlateConfig plate;
  SolverConfig solver;
  /// Mass and inertia ratios the tip body must reproduce within 1%.
  std::optional<std::pair<double, double>> asserted_tip_ratios;
};

inline Material default_material() { return Material::isotropic(200e9, 0.3, 2330.0); }

/// Fully populated configuration for a preset, before any override.
inline RunConfig preset_defaults(Preset p) {
  RunConfig c;
  c.preset = p;
  c.beam.material = default_material();
  c.plate.material = default_material();
  switch (p) {
    case Preset::case1_beam:
      c.model = ModelKind::beam;
      c.method = Method::gdq;
      c.grid = {15, 0, 0};
      c.modes = 16;
      break;
    case Preset::case1_tipmass: {
      c.model = ModelKind::beam;
      c.method = Method::gdq;
      c.grid = {21, 0, 0};
      c.modes = 16;
      // lead cube of side 0.1 m
      const double side = 0.1;
      const double lead = 11340.0;
      c.beam.tip_mass = lead * side * side * side;
      c.beam.tip_inertia = c.beam.tip_mass * (side * side + side * side) / 12.0;
      c.asserted_tip_ratios = std::pair{9.734, 0.051};
      break;
    }
    case Preset::case2_ffff:
      c.model = ModelKind::plate;
      c.grid = {0, 15, 15};
      c.modes = 8;
      break;
    case Preset::case3_cfff:
      c.model = ModelKind::plate;
      c.grid = {0, 15, 15};
      c.modes = 5;
      c.plate.edges.x0 = EdgeSupport::clamped;
      break;
    case Preset::case4_coupled:
      c.model = ModelKind::coupled;
      c.grid = {15, 15, 41};
      c.modes = 5;
      c.solver.cutoff_hz = 1475.0;
      break;
    case Preset::custom:
      c.model = ModelKind::plate;
      c.grid = {0, 15, 15};
      c.modes = 6;
      break;
  }
  return c;
}

/// Number of dynamic DOFs the model will carry; upper bound on mode count.
inline std::size_t interior_dof_count(const RunConfig& c, const GridSize& g) {
  auto sub = [](std::size_t n, std::size_t k) { return n > k ? n - k : 0; };
  std::size_t p = 0;
  if (c.model != ModelKind::plate) {
    p += sub(g.S, 4) + sub(g.S, 2);
    if (c.model == ModelKind::beam) {
      if (c.beam.tip_mass > 0.0) ++p;
      if (c.beam.tip_inertia > 0.0) ++p;
    }
  }
  if (c.model != ModelKind::beam) p += sub(g.N, 4) * sub(g.M, 4);
  return p;
}

/// Constraint checks, each violation named by field.
inline void validate(RunConfig& c) {
  auto check_grid = [&c](const GridSize& g) {
    const bool beam = c.model != ModelKind::plate;
    const bool plate = c.model != ModelKind::beam;
    if (beam && g.S < 7) throw ConfigError("grid.S must be >= 7, got " + std::to_string(g.S));
    if (plate && (g.N < 7 || g.M < 7)) {
      throw ConfigError("grid.N and grid.M must be >= 7, got " + std::to_string(g.N) + "x" + std::to_string(g.M));
    }
    const std::size_t P = interior_dof_count(c, g);
    if (c.modes > P) {
      throw ConfigError("modes = " + std::to_string(c.modes) + " exceeds the " + std::to_string(P) +
                        " dynamic DOFs of grid " + to_string(g));
    }
  };
  if (!(c.delta > 1e-5 && c.delta < 1e-1)) {
    throw ConfigError("delta must lie in (1e-5, 1e-1), got " + std::to_string(c.delta));
  }
  if (c.modes == 0) throw ConfigError("modes must be at least 1");
  check_grid(c.grid);
  for (const auto& g : c.sweep) check_grid(g);
  try {
    c.beam.material.validate();
    c.plate.material.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("material: ") + e.what());
  }
  if (!(c.beam.length > 0.0 && c.beam.width > 0.0 && c.beam.thickness > 0.0)) {
    throw ConfigError("beam.length, beam.width and beam.thickness must be positive");
  }
  if (!(c.plate.a > 0.0 && c.plate.b > 0.0 && c.plate.h > 0.0)) {
    throw ConfigError("plate.a, plate.b and plate.h must be positive");
  }
  if (c.beam.tip_mass < 0.0 || c.beam.tip_inertia < 0.0) throw ConfigError("beam tip mass and inertia must be >= 0");
  if (c.model == ModelKind::coupled) {
    if (c.beam.tip_mass > 0.0 || c.beam.tip_inertia > 0.0) {
      throw ConfigError("beam.tip_mass and beam.tip_inertia apply to beam models only");
    }
    const double half = 0.5 * c.beam.width / c.plate.b;
    if (c.plate.attach_y - half < -1e-12 || c.plate.attach_y + half > 1.0 + 1e-12) {
      throw ConfigError("plate.attach_y puts the beam footprint outside the plate");
    }
    if (c.plate.edges.x0 != EdgeSupport::free) throw ConfigError("plate.edges: the attached x = 0 edge must be free");
  }
  if (c.solver.max_discard_fraction && !(*c.solver.max_discard_fraction >= 0.0 && *c.solver.max_discard_fraction <= 1.0)) {
    throw ConfigError("solver.max_discard_fraction must lie in [0, 1]");
  }
  if (!(c.solver.rigid_tol > 0.0)) throw ConfigError("solver.rigid_tol must be positive");
  if (c.solver.cutoff_hz && !(*c.solver.cutoff_hz > 0.0)) throw ConfigError("solver.cutoff_hz must be positive");
}

namespace detail {

struct MaterialOverride {
  std::optional<double> E, nu, rho, G;

  [[nodiscard]] bool any() const { return E || nu || rho || G; }

  void apply(Material& m) const {
    if (E) m.E = *E;
    if (nu) m.nu = *nu;
    if (rho) m.rho = *rho;
    m.G = G ? *G : m.E / (2.0 * (1.0 + m.nu));
  }
};

struct RawEntry {
  std::string value;
  int line = 0;
};

}  // namespace detail

/// Parses the line-based `key = value` grammar and applies it on top of the
/// selected preset. `#` and `;` start comments; `[material]`, `[beam]`,
/// `[plate]` and `[solver]` open sections. Unknown keys are errors.
/// `preset` fills in for a file without a preset key; a different preset in
/// the file is an error.
inline RunConfig validate_config(std::string_view text, std::optional<Preset> preset = std::nullopt) {
  using Section = std::map<std::string, detail::RawEntry>;
  std::map<std::string, Section> sections;
  std::string current;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      current = detail::trim(std::string_view(t).substr(1, t.size() - 2));
      if (current != "material" && current != "beam" && current != "plate" && current != "solver") {
        throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + current + "]");
      }
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" + t + "'");
    }
    const std::string key = detail::trim(std::string_view(t).substr(0, eq));
    const std::string value = detail::trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": missing key");
    if (value.empty()) throw ConfigError("line " + std::to_string(line_no) + ": missing value for '" + key + "'");
    auto [it, fresh] = sections[current].emplace(key, detail::RawEntry{value, line_no});
    if (!fresh) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "' (first on line " +
                        std::to_string(it->second.line) + ")");
    }
  }

  auto& top = sections[""];
  if (top.count("preset")) {
    const auto& e = top.at("preset");
    Preset from_file = Preset::custom;
    try {
      from_file = parse_preset(e.value);
    } catch (const ConfigError& err) {
      throw ConfigError("line " + std::to_string(e.line) + ": " + err.what());
    }
    if (preset && *preset != from_file) {
      throw ConfigError("line " + std::to_string(e.line) + ": preset '" + e.value + "' conflicts with '" +
                        std::string(to_string(*preset)) + "'");
    }
    preset = from_file;
  }
  RunConfig c = preset_defaults(preset.value_or(Preset::custom));

  auto fail = [](const std::string& section, const std::string& key) {
    return ConfigError("unknown key '" + key + "'" + (section.empty() ? std::string() : " in [" + section + "]"));
  };
  auto with_line = [](const detail::RawEntry& e, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& err) {
      throw ConfigError("line " + std::to_string(e.line) + ": " + err.what());
    }
  };
  auto real = [](const detail::RawEntry& e, const std::string& k) { return detail::parse_real(e.value, k); };

  // model first, since grid parsing depends on it
  if (auto m = sections["solver"].find("model"); m != sections["solver"].end()) {
    with_line(m->second, [&] { c.model = parse_model(m->second.value); });
  }

  std::optional<std::string> grid_text;
  std::optional<std::string> sweep_text;
  for (const auto& [k, e] : top) {
    with_line(e, [&, &k = k, &e = e] {
      if (k == "preset") {
      } else if (k == "method") {
        c.method = parse_method(e.value);
      } else if (k == "grid") {
        grid_text = e.value;
      } else if (k == "grid_sweep") {
        sweep_text = e.value;
      } else if (k == "delta") {
        c.delta = real(e, k);
      } else if (k == "modes") {
        c.modes = detail::parse_count(e.value, k);
      } else if (k == "out") {
        c.out_dir = e.value;
      } else if (k == "plots") {
        c.plots = detail::parse_bool(e.value, k);
      } else {
        throw fail("", k);
      }
    });
  }

  detail::MaterialOverride shared, beam_mat, plate_mat;
  auto material_key = [&](detail::MaterialOverride& o, const std::string& k, const detail::RawEntry& e) {
    if (k == "E") o.E = real(e, k);
    else if (k == "nu") o.nu = real(e, k);
    else if (k == "rho") o.rho = real(e, k);
    else if (k == "G") o.G = real(e, k);
    else return false;
    return true;
  };
  for (const auto& [k, e] : sections["material"]) {
    with_line(e, [&, &k = k, &e = e] {
      if (!material_key(shared, k, e)) throw fail("material", k);
    });
  }
  for (const auto& [k, e] : sections["beam"]) {
    with_line(e, [&, &k = k, &e = e] {
      if (material_key(beam_mat, k, e)) return;
      if (k == "length") c.beam.length = real(e, k);
      else if (k == "width") c.beam.width = real(e, k);
      else if (k == "thickness") c.beam.thickness = real(e, k);
      else if (k == "tip_mass") c.beam.tip_mass = real(e, k);
      else if (k == "tip_inertia") c.beam.tip_inertia = real(e, k);
      else if (k == "torsion_model") {
        if (e.value == "saint_venant") c.beam.torsion = TorsionModel::saint_venant;
        else if (e.value == "thin_strip") c.beam.torsion = TorsionModel::thin_strip;
        else throw ConfigError("torsion_model must be saint_venant or thin_strip");
      } else {
        throw fail("beam", k);
      }
    });
  }
  for (const auto& [k, e] : sections["plate"]) {
    with_line(e, [&, &k = k, &e = e] {
      if (material_key(plate_mat, k, e)) return;
      if (k == "a") c.plate.a = real(e, k);
      else if (k == "b") c.plate.b = real(e, k);
      else if (k == "h") c.plate.h = real(e, k);
      else if (k == "edges") c.plate.edges = parse_edges(e.value);
      else if (k == "attach_y") c.plate.attach_y = real(e, k);
      else throw fail("plate", k);
    });
  }
  for (const auto& [k, e] : sections["solver"]) {
    with_line(e, [&, &k = k, &e = e] {
      if (k == "model") return;
      if (k == "cutoff_hz") c.solver.cutoff_hz = real(e, k);
      else if (k == "max_discard_fraction") c.solver.max_discard_fraction = real(e, k);
      else if (k == "rigid_tol") c.solver.rigid_tol = real(e, k);
      else throw fail("solver", k);
    });
  }

  // shared values first, then per-component ones on top
  if (shared.any()) {
    shared.apply(c.beam.material);
    shared.apply(c.plate.material);
  }
  if (beam_mat.any()) beam_mat.apply(c.beam.material);
  if (plate_mat.any()) plate_mat.apply(c.plate.material);

  if (grid_text) with_line(top.at("grid"), [&] { c.grid = parse_grid(*grid_text, c.model); });
  if (sweep_text) with_line(top.at("grid_sweep"), [&] { c.sweep = parse_grid_list(*sweep_text, c.model); });
  validate(c);
  return c;
}

}  // namespace gdq
