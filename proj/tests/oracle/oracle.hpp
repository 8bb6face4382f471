#pragma once

// Reference implementations used only by the tests. Everything here is
// written against the physical definitions with explicit (slow) discrete
// Fourier sums and dense N-body product spaces; nothing calls into the
// library's operator code except the plain data types.
//
// Orbitals are represented by their values in unitary grid coordinates,
// u(x_j, s) = sqrt(V / M) psi_s(x_j), where the modes <-> grid map is an
// M x M unitary matrix (M = (2m+1)^3 points = modes).

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;
using Rng = std::mt19937_64;

struct Box {
  double length = 6.0;
  int mode_bound = 1;
  double c = 1.0;

  int per_axis() const { return 2 * mode_bound + 1; }
  int modes() const { return per_axis() * per_axis() * per_axis(); }
  double volume() const { return length * length * length; }
  /// Mode n in lexicographic order over {-m..m}^3, first index slowest.
  std::array<int, 3> triple(int mode) const;
  std::array<double, 3> k(int mode) const;
  double k2(int mode) const;
  std::array<double, 3> point(int index) const;
};

struct PointCharge {
  std::array<double, 3> position;
  double charge;
  double smearing = 0.0;
};

/// Standard-representation Dirac block c alpha.k + c^2 beta.
Eigen::Matrix4cd dirac_block(const std::array<double, 3>& k, double c);

/// P+ / P- of one Dirac block from its eigendecomposition.
std::pair<Eigen::Matrix4cd, Eigen::Matrix4cd> spectral_projectors(const std::array<double, 3>& k, double c);

/// F(j, n) = exp(i k_n . x_j) / sqrt(M): modes -> unitary grid coordinates.
Mat fourier_matrix(const Box& box);

/// Periodic kernel sampled on grid differences, v(x_i - x_j) =
/// (1/V) sum_{k != 0} 4 pi / k^2 exp(i k (x_i - x_j)).
Eigen::MatrixXd kernel_matrix(const Box& box);

/// Nuclear potential at the grid points (same Fourier truncation).
RealVec nuclear_potential(const Box& box, const std::vector<PointCharge>& nuclei);

enum class Kinetic { dirac, schrodinger };

/// One-body matrix <psi_i | T + V | psi_j> for coefficient columns (row = mode*C + s).
Mat one_body(const Mat& coeffs, int components, Kinetic kinetic, const Box& box,
             const std::vector<PointCharge>& nuclei);

/// Two-electron tensor g(i, j, k, l) = <ij| v |kl> (physicist's order), flat index ((i*K+j)*K+k)*K+l.
std::vector<Complex> two_body(const Mat& coeffs, int components, const Box& box);

/// Slater determinants as sorted index lists, lexicographic order.
std::vector<std::vector<int>> determinants(int orbitals, int electrons);

/// <D_I | H | D_J> by explicit antisymmetrization in the K^N product space.
/// Orbitals must be orthonormal.
Mat brute_force_ci(const Mat& coeffs, int components, int electrons, Kinetic kinetic, const Box& box,
                   const std::vector<PointCharge>& nuclei);

/// Lowest eigenvalue of the nonrelativistic two-electron Hamiltonian on
/// the full spatial product space (covers singlet and triplet sectors).
double two_electron_full_ci(const Box& box, const std::vector<PointCharge>& nuclei);

/// Closed-shell restricted Hartree-Fock energy for two electrons (SCF with damping).
double two_electron_rhf(const Box& box, const std::vector<PointCharge>& nuclei, double tolerance = 1e-12);

/// Gamma_ij = N sum alpha*_{i..} alpha_{j..} straight from the definition,
/// building the antisymmetric tensor by explicit permutation sums.
Mat occupation_matrix(const Vec& a, int orbitals, int electrons);

Mat random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);
Mat random_unitary(Rng& rng, int n);
/// Random orthonormal columns, Gaussian-damped in |k|.
Mat random_orbitals(Rng& rng, const Box& box, int components, int count);
Vec random_unit_vector(Rng& rng, Eigen::Index n);

}  // namespace oracle
