#pragma once

// Real-space sampling of the plane-wave basis. The grid has exactly
// (2m+1)^3 points, so mode <-> grid transforms are unitary and every
// multiplicative operator is an exact Hermitian operator on the discrete
// space (products alias, which is accepted).

#include <array>
#include <memory>
#include <vector>

#include "mcdf/basis.hpp"

namespace mcdf {

class Grid {
 public:
  explicit Grid(const BasisDescriptor& basis);

  int points() const { return points_; }
  int points_per_axis() const { return per_axis_; }
  double volume() const { return volume_; }
  /// Quadrature weight V / M of each grid point.
  double weight() const { return volume_ / points_; }
  std::array<double, 3> point(int index) const;

  /// Physical values psi(x_j): rows = grid points, column = orbital * C + component.
  Mat to_values(const Mat& coeffs, int components) const;
  /// Inverse of to_values.
  Mat from_values(const Mat& values, int components) const;

  /// Fourier coefficients f_hat(k) = (V/M) sum_j f(x_j) e^{-i k x_j}, modes in basis order.
  Vec spectrum(const Vec& values) const;
  /// f(x_j) = (1/V) sum_k f_hat(k) e^{i k x_j}.
  Vec synthesize(const Vec& spectrum) const;

  /// Multiplies each orbital component by a real-space function.
  Mat apply_multiplier(const Vec& function, const Mat& coeffs, int components) const;

 private:
  struct Plans;
  void transform(const Complex* in_modes, Complex* out_grid, bool backward) const;

  int per_axis_;
  int points_;
  double volume_;
  double box_length_;
  std::vector<int> mode_to_fft_;
  std::shared_ptr<const Plans> plans_;
};

}  // namespace mcdf
