#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cavsig/channel.hpp"
#include "cavsig/coefficient.hpp"

// Run configuration for the CLI: a flat JSON file with complex numbers as
// [re, im] pairs. CLI flags override file fields; the effective merged
// configuration is echoed into every output artifact.

namespace cavsig {

struct OracleConfig {
  int modes = 3;
  int photon_cap = 2;
  int steps = 1500;
  int nodes_2d = 96;
  int nodes_4d = 32;
  double tolerance_scale = 1.0;
};

struct RunConfig {
  CavityConfig cavity{10.0, 100};
  DetectorParams detector_a{4.0, 4, 0.01};
  DetectorParams detector_b{6.0, 4, 0.01};
  double switching_time = 2.0;

  Coefficient coefficient = Coefficient::kA4;
  bool fourth_order = false;
  std::string kind = "cutoff";  // cutoff | time

  std::vector<int> cutoff_grid;
  std::vector<double> time_grid;
  std::array<double, 2> fit_window{0.0, 0.0};  // 0,0 -> default [2n, 50n]
  std::optional<double> normalize_reference;

  DensityMatrix2 input_state_a = DensityMatrix2::plus();
  std::optional<double> measurement_time;

  OracleConfig oracle;

  std::string output;  // empty -> stdout
  bool svg = false;
  int threads = 1;
};

/// Parses a config file; parse and validation failures throw
/// std::invalid_argument with the offending line or field.
RunConfig load_run_config(const std::string& path);

/// Effective configuration as canonical single-line JSON (sorted keys).
std::string echo_config(const RunConfig& config);

/// Runs every module precondition the config feeds; throws on the first
/// violation.
void validate(const RunConfig& config);

ParameterSnapshot snapshot(const RunConfig& config);

}  // namespace cavsig
