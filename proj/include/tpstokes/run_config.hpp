#ifndef TPSTOKES_RUN_CONFIG_HPP
#define TPSTOKES_RUN_CONFIG_HPP

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tpstokes/grid.hpp"

namespace tpstokes {

// Run configuration: "key: value" lines, '#' comments, a mandatory
// "version: 1" key, and hard errors on unknown keys. The full schema is
// documented in the project README.
struct RunConfig {
  int version = 0;
  std::string action;  // optional in the file; the CLI subcommand decides

  // problem block
  double tau = 2.0 * pi;
  int n = 2;
  double q = 2.0;
  int time_modes = 16;       // K
  int tang_resolution = 64;  // N
  double box_length = 2.0 * pi;
  double x_max = 20.0;
  int normal_cells = 128;
  double normal_ratio = 1.08;
  int lift_modes = 256;

  // data block
  std::string generator;  // built-in data source; empty when files are given
  std::string f_file, g_file, h_file;

  // verification / sweep block
  std::uint64_t seed = 1;
  int trials = 50;
  int draw_time = 8;
  int draw_tang = 8;
  std::string suites;  // comma list for `verify`; empty = all
  double besov_s = 1.5;

  // tolerance overrides
  double tol_momentum = 1e-9;
  double tol_divergence = 1e-9;
  double tol_trace = 1e-10;

  std::string out_dir = "out";

  GridPtr make_run_grid(double resolution_scale = 1.0) const {
    const int K = std::max(1, static_cast<int>(time_modes * resolution_scale));
    const int N = std::max(2, static_cast<int>(tang_resolution * resolution_scale));
    return make_grid(tau, n, K, N, box_length, graded_normal_grid(x_max, normal_cells, normal_ratio));
  }

  void validate() const {
    if (version != 1) throw config_error("config: missing or unsupported 'version' (expected 1)");
    if (n != 2 && n != 3) throw config_error("config: n must be 2 or 3");
    if (!(tau > 0.0) || !(box_length > 0.0) || !(x_max > 0.0))
      throw config_error("config: tau, L, x_max must be positive");
    if (!(q > 1.0)) throw config_error("config: q must lie in (1, inf)");
    if (time_modes < 1 || tang_resolution < 2) throw config_error("config: K >= 1, N >= 2 required");
    if (normal_cells < 2 || lift_modes < 8) throw config_error("config: grid resolution too small");
    if (!(tol_momentum > 0.0) || !(tol_divergence > 0.0) || !(tol_trace > 0.0))
      throw config_error("config: tolerances must be positive");
    if (!action.empty()) {
      static const std::set<std::string> actions = {"solve", "verify", "sweep", "besov",
                                                    "symbols-audit"};
      if (!actions.count(action)) throw config_error("config: unknown action '" + action + "'");
    }
    if (!generator.empty() && (!f_file.empty() || !g_file.empty() || !h_file.empty()))
      throw config_error("config: give either a generator or data files, not both");
  }
};

inline RunConfig parse_run_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
    line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) + ": expected 'key: value'");
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    key.erase(std::find_if(key.rbegin(), key.rend(), notspace).base(), key.end());
    value.erase(value.begin(), std::find_if(value.begin(), value.end(), notspace));

    auto as_int = [&](int& slot) { slot = std::stoi(value); };
    auto as_u64 = [&](std::uint64_t& slot) { slot = std::stoull(value); };
    auto as_double = [&](double& slot) { slot = std::stod(value); };

    if (key == "version") as_int(cfg.version);
    else if (key == "action") cfg.action = value;
    else if (key == "tau") as_double(cfg.tau);
    else if (key == "n") as_int(cfg.n);
    else if (key == "q") as_double(cfg.q);
    else if (key == "K") as_int(cfg.time_modes);
    else if (key == "N") as_int(cfg.tang_resolution);
    else if (key == "L") as_double(cfg.box_length);
    else if (key == "x_max") as_double(cfg.x_max);
    else if (key == "normal_cells") as_int(cfg.normal_cells);
    else if (key == "normal_ratio") as_double(cfg.normal_ratio);
    else if (key == "lift_modes") as_int(cfg.lift_modes);
    else if (key == "generator") cfg.generator = value;
    else if (key == "f_file") cfg.f_file = value;
    else if (key == "g_file") cfg.g_file = value;
    else if (key == "h_file") cfg.h_file = value;
    else if (key == "seed") as_u64(cfg.seed);
    else if (key == "trials") as_int(cfg.trials);
    else if (key == "draw_time") as_int(cfg.draw_time);
    else if (key == "draw_tang") as_int(cfg.draw_tang);
    else if (key == "suites") cfg.suites = value;
    else if (key == "besov_s") as_double(cfg.besov_s);
    else if (key == "tol_momentum") as_double(cfg.tol_momentum);
    else if (key == "tol_divergence") as_double(cfg.tol_divergence);
    else if (key == "tol_trace") as_double(cfg.tol_trace);
    else if (key == "out_dir") cfg.out_dir = value;
    else throw config_error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open " + path);
  return parse_run_config(in);
}

}  // namespace tpstokes

#endif  // TPSTOKES_RUN_CONFIG_HPP
