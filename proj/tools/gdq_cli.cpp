#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gdq/config.hpp"
#include "gdq/run.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw gdq::ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GDQ/MGDQ free-vibration solver for cantilever beams, Kirchhoff plates and beam-supported plates"};
  app.require_subcommand(0, 1);

  std::string preset;
  std::string method;
  std::string grid;
  std::string sweep;
  std::string config_path;
  std::string out;
  double delta = 0.0;
  std::size_t modes = 0;
  bool plots = false;

  // `run` is accepted as an optional leading word
  auto* run_cmd = app.add_subcommand("run", "solve a case and write its artifacts");
  for (CLI::App* a : {static_cast<CLI::App*>(&app), run_cmd}) {
    a->add_option("--preset", preset, "case1_beam, case1_tipmass, case2_ffff, case3_cfff, case4_coupled, custom");
    a->add_option("--method", method, "gdq or mgdq")->check(CLI::IsMember({"gdq", "mgdq"}));
    a->add_option("--grid", grid, "SxNxM, NxM or S");
    a->add_option("--grid-sweep", sweep, "comma-separated grids, e.g. 9,11,15");
    a->add_option("--delta", delta, "relative offset of the extra boundary-adjacent points");
    a->add_option("--modes", modes, "number of modes to report");
    a->add_option("--config", config_path, "key = value configuration file");
    a->add_option("--out", out, "output directory");
    a->add_flag("--plots", plots, "write a PPM contour image per mode");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const std::string text = config_path.empty() ? std::string() : read_file(config_path);
    std::optional<gdq::Preset> chosen;
    if (!preset.empty()) chosen = gdq::parse_preset(preset);
    gdq::RunConfig cfg = gdq::validate_config(text, chosen);
    if (!method.empty()) cfg.method = gdq::parse_method(method);
    if (!grid.empty()) cfg.grid = gdq::parse_grid(grid, cfg.model);
    if (!sweep.empty()) cfg.sweep = gdq::parse_grid_list(sweep, cfg.model);
    if (delta != 0.0) cfg.delta = delta;
    if (modes != 0) cfg.modes = modes;
    if (!out.empty()) cfg.out_dir = out;
    if (plots) cfg.plots = true;
    gdq::validate(cfg);
    gdq::run(cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return gdq::exit_code(e);
  }
  return 0;
}
