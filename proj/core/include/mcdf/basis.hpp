#pragma once

// Periodic plane-wave spinor basis. Every free operator used by the model
// (Dirac operator, spectral projectors, Pauli gradient, Sobolev weights) is
// block diagonal over Fourier modes, so all of them are exact per mode.

#include <array>
#include <cstddef>

#include "mcdf/types.hpp"

namespace mcdf {

/// Box of side `box_length` with modes k in (2 pi / L) {-m..m}^3 and a
/// speed of light `light_speed` (Hartree atomic units).
class BasisDescriptor {
 public:
  BasisDescriptor(double box_length, int mode_bound, double light_speed);

  double box_length() const { return box_length_; }
  int mode_bound() const { return mode_bound_; }
  double light_speed() const { return light_speed_; }

  int modes_per_axis() const { return 2 * mode_bound_ + 1; }
  int mode_count() const;
  double volume() const { return box_length_ * box_length_ * box_length_; }

  /// Integer triple (n1, n2, n3) of mode `index` in lexicographic order.
  std::array<int, 3> mode_indices(int index) const;
  std::array<double, 3> wavevector(int index) const;
  double wavevector_norm2(int index) const;

  /// Scalar dimension of a field with `components` components per mode.
  Eigen::Index dimension(int components) const {
    return static_cast<Eigen::Index>(mode_count()) * components;
  }

  BasisDescriptor with_light_speed(double c) const;

  bool operator==(const BasisDescriptor&) const = default;

 private:
  double box_length_;
  int mode_bound_;
  double light_speed_;
};

/// Coefficients of one orbital; row index = mode * Components + component.
template <int Components>
struct Field {
  static constexpr int components = Components;
  Vec coeffs;

  static Field zero(const BasisDescriptor& basis) {
    return Field{Vec::Zero(basis.dimension(Components))};
  }
  Complex& at(int mode, int component) { return coeffs(mode * Components + component); }
  Complex at(int mode, int component) const { return coeffs(mode * Components + component); }
};

using SpinorField = Field<4>;
using PauliField = Field<2>;

/// K orbitals stored as the columns of a (modes * components) x K matrix.
struct OrbitalSet {
  Mat coeffs;
  int components = 4;

  Eigen::Index size() const { return coeffs.cols(); }
  /// Gram matrix G_ij = <psi_i, psi_j>_{L2}.
  Mat gram() const { return coeffs.adjoint() * coeffs; }
  /// Sum of squared L2 norms of all orbitals.
  double squared_norm() const { return coeffs.squaredNorm(); }
};

enum class SpectralSign { positive, negative };
enum class InnerProductKind { l2, energy, light_speed };

/// D_c = c alpha.k + c^2 beta applied mode by mode, minus `shift` times the
/// identity. The shifted form keeps the O(c^2) rest energy out of sums.
Mat apply_dirac_columns(const Mat& coeffs, const BasisDescriptor& basis, double shift = 0.0);
SpinorField apply_dirac(const SpinorField& field, const BasisDescriptor& basis);

Mat project_spectral_columns(const Mat& coeffs, SpectralSign sign, const BasisDescriptor& basis);
SpinorField project_spectral(const SpinorField& field, SpectralSign sign,
                             const BasisDescriptor& basis);

/// |D_c| = sqrt(c^4 + c^2 |k|^2) per mode.
double dirac_eigenvalue(const BasisDescriptor& basis, int mode);

/// Multiplier applied by each inner product: 1, sqrt(1+|k|^2) or sqrt(1+|k|^2/c^2).
double inner_product_weight(InnerProductKind kind, const BasisDescriptor& basis, int mode);

template <int C>
Complex inner_product(const Field<C>& x, const Field<C>& y, InnerProductKind kind,
                      const BasisDescriptor& basis);

/// Inner product of orbital sets (sum over orbitals), any component count.
Complex inner_product_columns(const Mat& x, const Mat& y, int components,
                              InnerProductKind kind, const BasisDescriptor& basis);

/// L = -i grad . sigma, i.e. sigma.k per mode on 2-component fields.
Mat apply_pauli_gradient_columns(const Mat& coeffs, const BasisDescriptor& basis);
PauliField apply_pauli_gradient(const PauliField& field, const BasisDescriptor& basis);

/// Upper (components 1,2) and lower (components 3,4) blocks of 4-spinors.
Mat upper_components(const Mat& spinors);
Mat lower_components(const Mat& spinors);
/// Embeds 2-spinors as upper components with zero lower components.
Mat embed_upper(const Mat& pauli);

struct KatoReport {
  double lhs = 0.0;  // |<psi, V psi>|
  double rhs = 0.0;  // (Z pi / 2) <psi, sqrt(-Delta) psi>
  bool satisfied = true;
  double margin() const { return rhs - lhs; }
};

/// Kato inequality for a multiplicative potential given on the real-space grid.
KatoReport kato_check(const SpinorField& field, const RealVec& potential_on_grid,
                      double total_charge, const BasisDescriptor& basis);

}  // namespace mcdf
