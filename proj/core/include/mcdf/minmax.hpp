#pragma once

// The min-max characterization as an algorithm. For fixed (a, Psi+) the
// energy is maximized over the negative-spectral components Psi- of the
// orbitals (a concave problem for c large); the resulting reduced
// functional is minimized over S_gamma x Sigma+.

#include <string>
#include <vector>

#include "mcdf/energy.hpp"
#include "mcdf/mchf.hpp"

namespace mcdf {

struct SplitState {
  CIVector a;
  OrbitalSet psi_plus;   // orthonormal, in the range of P+
  OrbitalSet psi_minus;  // in the range of P-
};

struct SolverConfig {
  double gamma_floor = 0.05;
  double tol_inner = 1e-10;
  double tol_outer = 1e-8;
  int max_iter_inner = 500;
  int max_iter_outer = 4000;
  int lbfgs_memory = 12;
  /// Reject steps leaving {E(a, Psi+) < N c^2}.
  bool energy_cap_enforced = true;
  /// K_hat of the lower multiplier-window diagnostic.
  double k_hat = 10.0;
};

struct InnerResult {
  OrbitalSet psi_minus;
  /// F = E(a, g(Psi+ + Psi-)), with and without N c^2.
  double value = 0.0;
  double value_excess = 0.0;
  double value_at_zero_excess = 0.0;
  double gradient_norm = 0.0;
  /// |Psi-|_c of the maximizer.
  double norm_c = 0.0;
  int iterations = 0;
};

/// Maximizes Psi- -> E(a, g(psi_plus + Psi-)) over the negative spectral
/// subspace. Starts at 0, or at `warm` if that is not worse. Throws
/// SubcriticalError on detected positive curvature, ConvergenceError when
/// the iteration budget runs out.
InnerResult inner_maximize(const CIVector& a, const OrbitalSet& psi_plus, const SolverConfig& config,
                           const Hamiltonian& model, const Mat* warm = nullptr);

/// F_a(Psi+) = sup over Psi- (including N c^2).
double reduced_value(const CIVector& a, const OrbitalSet& psi_plus, const SolverConfig& config,
                     const Hamiltonian& model);

struct SolverReport {
  SplitState state;
  OrbitalSet psi_full;
  MultiplierReport lambda;
  double ci_energy = 0.0;
  double ci_energy_excess = 0.0;
  double residual_df1 = 0.0;
  double residual_df2 = 0.0;
  double min_occ = 0.0;
  double gamma_floor = 0.0;
  EnergyBreakdown energy;
  double gradient_plus = 0.0;
  double gradient_a = 0.0;
  double inner_gradient = 0.0;
  double inner_norm_c = 0.0;
  int iterations = 0;
  double wall_time = 0.0;
  bool converged = false;
  /// Reduced values (minus N c^2) after every accepted step.
  std::vector<double> history;
};

/// Alternating minimization of the reduced functional. Throws
/// InfeasibleGammaError, SubcriticalError or ConvergenceError.
SolverReport outer_minimize(const SplitState& initial, const SolverConfig& config, const Hamiltonian& model);

/// Seed from an MCHF minimizer: Phi as upper components, projected by P+,
/// Gram-normalized; Psi- = 0.
SplitState seed_from_mchf(const MchfResult& mchf, const Hamiltonian& model);

/// Re-targets a solved state to another speed of light (warm start):
/// Psi+ <- g(P+ Psi+), Psi- <- 0.
SplitState transfer_state(const SplitState& state, const Hamiltonian& model);

struct CertificateTolerances {
  double df1 = 1e-7;
  double df2 = 1e-7;
  double hermiticity = 1e-9;
  double gram = 1e-9;
  double split = 1e-10;
  double cache_match = 1e-10;
};

CertificateTolerances default_tolerances(const SolverConfig& config);

struct CertificateCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  /// Informational checks do not affect the verdict.
  bool required = true;
};

struct Certificate {
  std::vector<CertificateCheck> checks;
  double df1 = 0.0;
  double df2 = 0.0;
  bool passed() const;
  const CertificateCheck* find(const std::string& name) const;
};

/// Re-evaluates the Euler-Lagrange residuals through the unshifted Fock
/// operator and full CI matrix, plus constraint and window diagnostics.
Certificate certify_solution(const SolverReport& report, const Hamiltonian& model,
                             const CertificateTolerances& tolerances);

}  // namespace mcdf
