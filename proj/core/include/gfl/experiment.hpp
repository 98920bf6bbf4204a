#pragma once

#include "gfl/bounds.hpp"
#include "gfl/free_energy.hpp"

#include <map>
#include <string>
#include <vector>

namespace gfl {

/// Parsed key = value experiment description. Plain flat schema, explicit
/// version key, no scripting. See docs in README for the key list.
struct ExperimentConfig {
  int schema_version = 1;
  int d = 2;
  int L = 8;
  double epsilon = 1.0;
  std::vector<double> m2_grid{1.0};
  // potential: "gaussian <alpha>" or "dipole <a>"
  std::string potential_kind = "gaussian";
  double potential_param = 1.0;
  // h: "zero" | "random <norm>" | "dipole <site> <nu>" | "file <path>"
  std::string h_kind = "zero";
  double h_norm = 1.0;
  std::size_t h_site = 0;
  double h_nu = 0.1;
  std::string h_path;
  SamplerOptions sampler;
  double dt = 0.0;
  std::vector<std::string> jobs;
  // covariance job knobs
  double rho = 0.2;
  double nu = 0.05;
  std::vector<int> separations{1, 2, 3};
  // kappa job knobs
  double kappa_p = 2.0;
  int kappa_probes = 8;
  // bounds job knob
  double eta = 0.0;  // > 0 adds the complex-h checks with Im h = eta-scaled phase
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses the plain key = value format ('#' comments, blank lines ignored).
/// Unknown keys and malformed values throw ConfigError with the line number.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);

/// Runs every (job x m2) cell, isolating failures per cell, and writes
/// report.json plus summary.csv under out_dir. Numeric content depends only
/// on (config, seed, threads=1); timestamps live in a separate metadata
/// block so reports diff cleanly.
/// Exit code 0 iff no check FAILed and no job errored (with strict also no
/// SKIPPED).
int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, bool strict);

/// Tidy (series, x, y, y_err) CSV extracted from a report.json for external
/// plotting: bound margins, covariance decay, free-energy values.
std::string emit_plot_data(const std::string& report_path);

}  // namespace gfl
