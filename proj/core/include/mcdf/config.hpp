#pragma once

// Run configuration: one YAML document per run. Parse and validation
// errors are ConfigError with the offending key path in the message.
//
//   problem:
//     electrons: 2
//     orbitals: 4
//     box_length: 6.0
//     mode_bound: 2
//     c: 40                # or a list for sweeps: [20, 40, 80, 160]
//     smearing: 0.0
//     nuclei:
//       - {position: [3, 3, 3], charge: 2}
//   solver:
//     gamma: auto          # or a number
//     gamma_fraction: 0.5
//     tol_inner: 1.0e-10
//     tol_outer: 1.0e-8
//     ...
//   mchf: {tolerance: 1.0e-9, extra_starts: 0}
//   seed: 7
//   outputs: {dir: out, result: result.json, table: sweep.csv, summary: summary.json}

#include <cstdint>
#include <string>
#include <vector>

#include "mcdf/limit.hpp"

namespace mcdf {

struct OutputConfig {
  std::string dir = ".";
  std::string result = "result.json";
  std::string table = "sweep.csv";
  std::string summary = "summary.json";
  /// Optional result document whose state seeds the solve.
  std::string warm_start;
};

struct RunConfig {
  LimitProblem problem;
  std::vector<double> c_values;
  SolverConfig solver;
  bool gamma_auto = true;
  double gamma_fraction = 0.5;
  MchfConfig mchf;
  std::uint64_t seed = 0;
  OutputConfig outputs;

  SweepOptions sweep_options() const;
};

RunConfig parse_config(const std::string& yaml_text);
RunConfig load_config(const std::string& path);

/// Range checks (N <= K, gamma <= N/K, positive sizes, nuclei in the box).
/// An explicit gamma above N/K raises InfeasibleGammaError.
void validate_config(const RunConfig& config);

}  // namespace mcdf
