#pragma once

// Nonrelativistic-limit harness: warm-started c-sweeps of the min-max
// solver compared against the MCHF level I^K, small-component structure and
// growth of the multiplier window.

#include <string>
#include <vector>

#include "mcdf/minmax.hpp"

namespace mcdf {

struct LimitProblem {
  /// Box and modes; the speed of light is taken from the sweep.
  double box_length = 6.0;
  int mode_bound = 2;
  NuclearConfiguration nuclei;
  int electrons = 2;
  int orbitals = 4;
};

struct SweepRecord {
  double c = 0.0;
  double energy_shifted = 0.0;            // E - N c^2
  double gap_to_IK = 0.0;                 // E - N c^2 - I^K
  double small_component_norm = 0.0;     // |X|_L2
  double kinetic_balance_residual = 0.0;  // |X - L Phi / (2c)|_L2
  double lambda_band = 0.0;               // spectral radius of Lambda - c^2 Gamma
  double min_occ = 0.0;
  double residual_df1 = 0.0;
  double residual_df2 = 0.0;
  bool certified = false;
  std::string error;
};

struct LoglogFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least squares fit of log y = slope log x + intercept (positive data only).
LoglogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct SweepResult {
  MchfResult mchf;
  double reference_energy = 0.0;  // I^K
  double gamma_floor = 0.0;
  std::vector<SweepRecord> records;
  std::vector<SolverReport> reports;  // empty entries where the solve failed
  std::vector<bool> solved;
};

struct SweepOptions {
  SolverConfig solver;
  MchfConfig mchf;
  /// Derive gamma as `gamma_fraction` times the MCHF occupation floor.
  bool auto_gamma = true;
  double gamma_fraction = 0.5;
};

SweepRecord make_record(const SolverReport& report, const Hamiltonian& model, double reference_energy,
                        const CertificateTolerances& tolerances);

/// One certified solve per c (increasing), each warm-started from the
/// previous solution; failures are recorded and the sweep continues.
SweepResult sweep_c(const std::vector<double>& c_values, const LimitProblem& problem,
                    const SweepOptions& options);

struct PersistenceReport {
  bool all_above = false;   // min_occ > gamma at every record
  bool tail_above = false;  // ... at the two largest c
  double smallest_margin = 0.0;
  int violations = 0;
};

PersistenceReport occupation_persistence(const std::vector<SweepRecord>& sweep, double gamma);

/// Decay diagnostics over certified records.
struct SweepSummary {
  LoglogFit gap_fit;
  LoglogFit small_component_fit;
  LoglogFit kinetic_balance_fit;
  bool gap_strictly_decreasing = false;
  /// max/min of c |X| and of c^3 |X - L Phi / 2c| across the sweep.
  double small_component_band = 0.0;
  double kinetic_balance_band = 0.0;
  /// max over the sweep of band(c) / band(c_first).
  double lambda_band_growth = 0.0;
  /// E - N c^2 - I^K monotone in c after the first two points.
  bool gap_monotone_tail = false;
  int certified = 0;
};

SweepSummary summarize_sweep(const std::vector<SweepRecord>& records);

}  // namespace mcdf
