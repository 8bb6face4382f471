#pragma once

// The multiconfiguration energy, its nonrelativistic counterpart, the Gram
// normalization g, Riemannian gradients and the Lagrange-multiplier matrix.
//
// Derivative convention: gradients are with respect to the conjugate
// coefficients (Wirtinger); the Riemannian gradients returned here are twice
// that, i.e. the gradient for the real inner product Re tr(A^* B).
//
// Multiplier convention: Lambda_ij = <psi_j, (H Psi)_i>, so that the
// orbital equation reads (H Psi)_i = sum_j Lambda_ij psi_j; in column form
// H Psi = Psi Lambda^T.

#include "mcdf/ci.hpp"
#include "mcdf/coulomb.hpp"

namespace mcdf {

struct EnergyBreakdown {
  double kinetic_rest = 0.0;  // sum Gamma_ij <psi_i, D_c psi_j>   (or -Delta/2)
  double nuclear = 0.0;       // sum Gamma_ij <psi_i, V psi_j>
  double two_body = 0.0;      // <Psi, W Psi>
  double total = 0.0;
  /// total - N c^2, evaluated without forming the O(c^2) terms.
  double excess = 0.0;
};

/// Value and Wirtinger gradient of the rest-energy-free functional
/// E_ex(a, Psi) = sum Gamma_ij <psi_i, (D_c - c^2 + V) psi_j> + <Psi, W Psi>,
/// which equals E - N c^2 on orthonormal Psi.
struct OrbitalEvaluation {
  EnergyBreakdown energy;
  /// E_ex itself (no Gram correction); smooth in Psi.
  double value = 0.0;
  Mat gamma;
  /// dE_ex / d conj(Psi), column form.
  Mat gradient;
};

/// When `ci_excess` is given, also assembles the rest-energy-free CI matrix
/// from the same pair fields (Psi must then be orthonormal).
OrbitalEvaluation evaluate_orbitals(const CIVector& a, const Mat& psi, const Hamiltonian& model,
                                    bool with_gradient = true, Mat* ci_excess = nullptr);

EnergyBreakdown energy(const CIVector& a, const OrbitalSet& psi, const Hamiltonian& model);

/// Nonrelativistic energy of 2-spinor orbitals; requires a Schrodinger model
/// and orthonormal orbitals.
double energy_mchf(const CIVector& a, const OrbitalSet& phi, const Hamiltonian& model);

/// g(Psi) = Psi (Psi^* Psi)^{-1/2}. Throws DegeneracyError when the smallest
/// Gram eigenvalue is below 1e-12.
OrbitalSet normalize_g(const OrbitalSet& psi);
Mat normalize_g(const Mat& psi);

/// Wirtinger gradient of Phi -> f(g(Phi)) given G = df/d conj(Psi) at Psi = g(Phi).
Mat normalize_g_pullback(const Mat& phi, const Mat& gradient_at_image);

/// 2 (H_Psi a - (a^* H_Psi a) a); Psi must be orthonormal.
Vec gradient_a(const CIVector& a, const OrbitalSet& psi, const Hamiltonian& model);

/// 2 (H Psi - Psi sym(Lambda)^T): the Riemannian gradient on the orthonormal
/// frame manifold. Psi must be orthonormal.
OrbitalSet gradient_psi(const CIVector& a, const OrbitalSet& psi, const Hamiltonian& model);

struct MultiplierReport {
  /// Hermitian-symmetrized Lambda.
  Mat lambda;
  /// Lambda - c^2 Gamma, Hermitian-symmetrized (kept separately for precision).
  Mat lambda_shifted;
  /// |Lambda_raw - Lambda_raw^*|_F before symmetrization.
  double asymmetry = 0.0;
  /// Eigenvalues of c^2 Gamma - Lambda (ascending).
  RealVec window_upper;
  /// Eigenvalues of Lambda - (c^2 - K_hat) Gamma (ascending).
  RealVec window_lower;
  /// Spectral radius of Lambda - c^2 Gamma.
  double band = 0.0;
};

MultiplierReport lambda_matrix(const CIVector& a, const OrbitalSet& psi, const Hamiltonian& model,
                               double k_hat = 10.0);

/// Orbital residual |H Psi - Psi sym(Lambda)^T|_L2 and multiplier asymmetry,
/// computed from the excess Fock operator.
struct OrbitalResidual {
  double df1 = 0.0;
  double asymmetry = 0.0;
};
OrbitalResidual orbital_residual(const CIVector& a, const OrbitalSet& psi, const Hamiltonian& model);

/// |H_Psi a - (a^* H_Psi a) a|.
double ci_residual(const CIVector& a, const OrbitalSet& psi, const Hamiltonian& model);

}  // namespace mcdf
