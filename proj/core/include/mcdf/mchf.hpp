#pragma once

// Nonrelativistic multiconfiguration Hartree-Fock reference: I^K on a
// given basis, its minimizer's occupation floor, and an exact-diagonalization
// (full CI) oracle over the complete 2-spinor plane-wave basis.

#include <cstdint>

#include "mcdf/energy.hpp"

namespace mcdf {

struct MchfConfig {
  double tolerance = 1e-9;
  int max_iterations = 4000;
  /// Additional randomly perturbed starts (0 = deterministic start only).
  int extra_starts = 0;
  std::uint64_t seed = 0;
  double perturbation = 0.1;
};

struct MchfResult {
  CIVector a;
  OrbitalSet phi;
  double energy = 0.0;
  double min_occ = 0.0;
  /// |H Phi - Phi sym(Lambda)^T| at the minimizer.
  double residual = 0.0;
  double residual_ci = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Spatial one-body matrix -Delta/2 + V over the modes (dense, Hermitian).
Mat spatial_one_body(const Hamiltonian& model);

/// Deterministic start: the lowest spatial eigenvectors of the one-body
/// operator as spin pairs (phi1 up, phi1 down, phi2 up, ...), a = first determinant.
MchfResult mchf_initial_guess(int orbitals, int electrons, const Hamiltonian& model);

/// Minimizes E_HF over S x {Gram Phi = 1}. `seed_from`, when given with
/// fewer orbitals, is extended by orthogonal complements so the result is
/// variationally nested: I^K <= I^{K'}.
MchfResult minimize_mchf(int orbitals, int electrons, const Hamiltonian& model,
                         const MchfConfig& config = {}, const MchfResult* seed_from = nullptr);

/// Smallest eigenvalue of the N-electron Hamiltonian over all determinants
/// of the full 2-spinor basis. Throws DimensionError beyond 2e4 determinants.
double full_ci_oracle(int electrons, const Hamiltonian& model);

/// Smallest eigenvalue of Gamma_a at the minimizer (empirical gamma_0).
double occupation_floor(const MchfResult& result);

}  // namespace mcdf
