#pragma once

// Nuclear attraction, periodic Coulomb convolution, the mean-field matrix
// W_{a,Psi}, the Fock operator and the CI Hamiltonian matrix.
//
// Conventions. The periodic kernel has Fourier multiplier 4 pi / |k|^2 per
// unit volume with the k = 0 coefficient set to zero (neutralizing
// background). Pointwise products are taken on the (2m+1)^3 grid, so the
// discrete two-body operator is multiplication by the sampled kernel
// v(x_i - x_j); every path below (mean field, Slater-Condon, brute force)
// sees the same discrete Hamiltonian.

#include <array>
#include <memory>
#include <vector>

#include "mcdf/basis.hpp"
#include "mcdf/ci.hpp"
#include "mcdf/grid.hpp"

namespace mcdf {

struct Nucleus {
  std::array<double, 3> position{};
  double charge = 0.0;
};

struct NuclearConfiguration {
  std::vector<Nucleus> nuclei;
  /// Gaussian smearing width of each nucleus; 0 = point charge.
  double smearing = 0.0;

  double total_charge() const;
  void validate(const BasisDescriptor& basis) const;
};

enum class KineticModel { dirac, schrodinger };

/// Fault-injection hook: scales the 4 pi kernel constant seen by the
/// Slater-Condon (CI-matrix) path only, so path-consistency checks must fail.
struct CoulombOptions {
  double slater_condon_kernel_scale = 1.0;
};

/// The discretized one- and two-body operators of a model on one basis.
/// Immutable after construction; safe to share between threads.
class Hamiltonian {
 public:
  Hamiltonian(BasisDescriptor basis, NuclearConfiguration nuclei, KineticModel kinetic,
              CoulombOptions options = {});

  const BasisDescriptor& basis() const { return basis_; }
  const NuclearConfiguration& nuclei() const { return nuclei_; }
  const Grid& grid() const { return grid_; }
  KineticModel kinetic() const { return kinetic_; }
  const CoulombOptions& options() const { return options_; }
  int components() const { return kinetic_ == KineticModel::dirac ? 4 : 2; }
  /// c^2 for the Dirac model, 0 for the Schrodinger model.
  double rest_energy() const;
  /// Returns a copy with a different speed of light.
  Hamiltonian with_light_speed(double c) const;

  /// Nuclear potential V(x_j) on the grid.
  const RealVec& nuclear_potential() const { return potential_; }
  /// Coulomb multiplier for each mode (0 at k = 0).
  const RealVec& kernel() const { return kernel_; }

  /// Kinetic part (D_c - c^2 or -Delta/2) applied to columns.
  Mat apply_kinetic_excess(const Mat& coeffs) const;
  /// D_c or -Delta/2.
  Mat apply_kinetic(const Mat& coeffs) const;
  Mat apply_nuclear(const Mat& coeffs) const;
  /// (kinetic excess + V) applied to columns.
  Mat apply_one_body_excess(const Mat& coeffs) const;

  /// Real-space pointwise contraction psi_k^*(x) . psi_l(x) (physical units).
  Vec pair_density(const Mat& values, Eigen::Index k, Eigen::Index l) const;
  /// (rho * 1/|x|)(x_j) via the Fourier multiplier.
  Vec coulomb_convolve(const Vec& density) const;

  void require_compatible(const OrbitalSet& orbitals, const char* where) const;

 private:
  BasisDescriptor basis_;
  NuclearConfiguration nuclei_;
  KineticModel kinetic_;
  CoulombOptions options_;
  Grid grid_;
  RealVec kernel_;
  RealVec potential_;
};

Mat nuclear_potential_apply(const Mat& coeffs, const Hamiltonian& model);
SpinorField nuclear_potential_apply(const SpinorField& field, const Hamiltonian& model);

/// psi_k^* psi_l as a complex scalar field on the grid.
Vec pair_density(const OrbitalSet& orbitals, Eigen::Index k, Eigen::Index l,
                 const Hamiltonian& model);
Vec coulomb_convolve(const Vec& density, const Hamiltonian& model);

/// Pair densities and their Coulomb potentials for every orbital pair.
class PairFields {
 public:
  PairFields(const OrbitalSet& orbitals, const Hamiltonian& model);

  Eigen::Index orbitals() const { return count_; }
  /// Real-space orbital values, column = orbital * C + component.
  const Mat& values() const { return values_; }
  const Vec& density(Eigen::Index k, Eigen::Index l) const { return density_[index(k, l)]; }
  const Vec& potential(Eigen::Index k, Eigen::Index l) const { return potential_[index(k, l)]; }
  /// Two-electron integral (ij|kl) = int int rho_ij(x) v(x-y) rho_kl(y).
  Complex integral(Eigen::Index i, Eigen::Index j, Eigen::Index k, Eigen::Index l) const;

 private:
  std::size_t index(Eigen::Index k, Eigen::Index l) const {
    return static_cast<std::size_t>(k * count_ + l);
  }
  Eigen::Index count_;
  double weight_;
  Mat values_;
  std::vector<Vec> density_;
  std::vector<Vec> potential_;
};

/// W_ij(x) = N(N-1)/2 sum alpha*_{i,k,..} alpha_{j,l,..} (psi_k^* psi_l * 1/|x|)(x).
struct MeanFieldMatrix {
  Eigen::Index orbitals = 0;
  std::vector<Vec> entries;  // row-major K x K

  const Vec& operator()(Eigen::Index i, Eigen::Index j) const {
    return entries[static_cast<std::size_t>(i * orbitals + j)];
  }
};

MeanFieldMatrix w_matrix(const CIVector& a, const OrbitalSet& orbitals, const Hamiltonian& model);
MeanFieldMatrix w_matrix(const Mat& pair, const PairFields& fields);

/// Applies the operator-valued matrix W to Phi: (W Phi)_i = sum_j W_ij phi_j.
Mat apply_mean_field(const MeanFieldMatrix& w, const Mat& phi, const Hamiltonian& model);

/// Column form of the Fock operator: (H Phi)_i = sum_j Gamma_ij h phi_j + 2 sum_j W_ij phi_j,
/// with h = kinetic excess + V when `excess`, else the full one-body operator.
Mat fock_columns(const Mat& gamma, const MeanFieldMatrix& w, const Mat& phi,
                 const Hamiltonian& model, bool excess);

/// H_{a,Psi} Phi with H = D_c Gamma + V Gamma + 2 W_{a,Psi}.
OrbitalSet fock_apply(const CIVector& a, const OrbitalSet& psi, const OrbitalSet& phi,
                      const Hamiltonian& model);

/// Dense matrix of the N-body Hamiltonian over the determinants built from
/// orthonormal orbitals (Slater-Condon rules).
struct CIMatrix {
  Mat matrix;
  /// N c^2 for the Dirac model; `matrix` already contains it on the diagonal.
  double rest_energy = 0.0;
};

/// Slater-Condon assembly from precomputed integrals; `one_body` must be the
/// full one-body matrix of whatever operator the caller wants on the diagonal.
Mat slater_condon(const DeterminantSpace& space, const Mat& one_body, const PairFields& pairs,
                  double two_body_scale = 1.0);

/// Throws OrthonormalityError unless Gram = identity to `tolerance`.
void require_orthonormal(const OrbitalSet& orbitals, double tolerance, const char* where);

/// Full N-body CI matrix (includes N c^2 for Dirac).
CIMatrix ci_hamiltonian(const OrbitalSet& orbitals, int electrons, const Hamiltonian& model);
/// CI matrix with the rest energy N c^2 removed (exact for orthonormal orbitals).
Mat ci_hamiltonian_excess(const OrbitalSet& orbitals, int electrons, const Hamiltonian& model);

}  // namespace mcdf
