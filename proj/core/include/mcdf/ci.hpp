#pragma once

// Determinant combinatorics and the CI-coefficient side of the
// multiconfiguration ansatz: the antisymmetric coefficient tensor alpha,
// occupation matrices, the occupation-floor constraint set and the unitary
// group action that leaves the energy invariant.

#include <cstdint>
#include <map>
#include <vector>

#include "mcdf/basis.hpp"
#include "mcdf/types.hpp"

namespace mcdf {

/// Strictly increasing orbital indices, 0-based.
using Determinant = std::vector<int>;

/// All C(K, N) determinants in lexicographic order.
std::vector<Determinant> enumerate_determinants(int orbitals, int electrons);

std::int64_t binomial(int n, int k);

/// Lexicographic determinant list with reverse lookup.
class DeterminantSpace {
 public:
  DeterminantSpace(int orbitals, int electrons);

  int orbitals() const { return orbitals_; }
  int electrons() const { return electrons_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(dets_.size()); }
  const Determinant& operator[](Eigen::Index i) const { return dets_[static_cast<std::size_t>(i)]; }
  const std::vector<Determinant>& determinants() const { return dets_; }
  /// Index of a sorted determinant, or -1.
  Eigen::Index find(const Determinant& det) const;

 private:
  int orbitals_;
  int electrons_;
  std::vector<Determinant> dets_;
  std::map<Determinant, Eigen::Index> lookup_;
};

/// Coefficients over the determinant space, unit norm when in S.
struct CIVector {
  int orbitals = 0;
  int electrons = 0;
  Vec coeffs;

  static CIVector basis_vector(int orbitals, int electrons, Eigen::Index index);
  CIVector normalized() const;
};

/// Dense alpha tensor over {0..K-1}^N, first index slowest.
struct AlphaTensor {
  int orbitals = 0;
  int electrons = 0;
  Vec data;

  Complex operator()(const std::vector<int>& indices) const;
  std::int64_t flat_index(const std::vector<int>& indices) const;
};

AlphaTensor expand_alpha(const CIVector& a);
/// Inverse map: a_I = sqrt(N!) alpha_{i1<...<iN}.
CIVector contract_alpha(const AlphaTensor& alpha);

/// Gamma_ij = N sum alpha*_{i,k2..kN} alpha_{j,k2..kN}.
Mat gamma_matrix(const CIVector& a);

/// Pair matrix D_{(i,k),(j,l)} = N(N-1) sum alpha*_{i,k,..} alpha_{j,l,..},
/// row index i*K + k. Zero for N = 1.
Mat pair_matrix(const CIVector& a);

/// Ascending eigenvalues of Gamma_a.
RealVec occupation_numbers(const CIVector& a);
double min_occupation(const CIVector& a);

/// U . (a, Psi) = (a', U Psi) with psi'_i = sum_j U_ij psi_j and
/// alpha' = (conj U) x ... x (conj U) alpha. Throws UnitarityError.
CIVector transform_ci(const Mat& unitary, const CIVector& a);
OrbitalSet transform_orbitals(const Mat& unitary, const OrbitalSet& orbitals);
std::pair<CIVector, OrbitalSet> group_action(const Mat& unitary, const CIVector& a,
                                             const OrbitalSet& orbitals);

/// Deterministic CI vector whose occupation matrix is as close as possible to
/// (N/K) I. Its smallest occupation bounds what any retraction can reach.
CIVector uniform_occupation_vector(int orbitals, int electrons);

/// Moves a into S_gamma = {Gamma_a >= gamma} by mixing toward the
/// uniform-occupation vector (bisection on the weight). Identity on feasible input.
CIVector retract_to_s_gamma(const CIVector& a, double gamma_floor);

/// Eigen-decomposition helpers with the phase convention used everywhere:
/// ascending eigenvalues; largest-magnitude entry of each eigenvector real positive.
struct HermitianEigen {
  RealVec values;
  Mat vectors;
};
HermitianEigen hermitian_eigen(const Mat& m);

}  // namespace mcdf
