#include "mcdf/basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mcdf {

namespace {

void require_rows(const Mat& coeffs, const BasisDescriptor& basis, int components,
                  const char* where) {
  if (coeffs.rows() != basis.dimension(components)) {
    throw DimensionError(std::string(where) + ": expected " +
                         std::to_string(basis.dimension(components)) + " rows, got " +
                         std::to_string(coeffs.rows()));
  }
}

// sigma.k as a 2x2 block.
Eigen::Matrix2cd pauli_dot(const std::array<double, 3>& k) {
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd s;
  s << k[2], k[0] - i * k[1], k[0] + i * k[1], -k[2];
  return s;
}

Eigen::Matrix4cd dirac_block(const std::array<double, 3>& k, double c) {
  Eigen::Matrix4cd d = Eigen::Matrix4cd::Zero();
  const Eigen::Matrix2cd s = c * pauli_dot(k);
  d.topLeftCorner<2, 2>() = c * c * Eigen::Matrix2cd::Identity();
  d.bottomRightCorner<2, 2>() = -c * c * Eigen::Matrix2cd::Identity();
  d.topRightCorner<2, 2>() = s;
  d.bottomLeftCorner<2, 2>() = s;
  return d;
}

}  // namespace

BasisDescriptor::BasisDescriptor(double box_length, int mode_bound, double light_speed)
    : box_length_(box_length), mode_bound_(mode_bound), light_speed_(light_speed) {
  if (!(box_length > 0.0)) throw DimensionError("box_length must be positive");
  if (mode_bound < 0) throw DimensionError("mode_bound must be nonnegative");
  if (!(light_speed > 0.0)) throw DimensionError("light_speed must be positive");
}

int BasisDescriptor::mode_count() const {
  const int s = modes_per_axis();
  return s * s * s;
}

std::array<int, 3> BasisDescriptor::mode_indices(int index) const {
  const int s = modes_per_axis();
  const int n3 = index % s;
  const int n2 = (index / s) % s;
  const int n1 = index / (s * s);
  return {n1 - mode_bound_, n2 - mode_bound_, n3 - mode_bound_};
}

std::array<double, 3> BasisDescriptor::wavevector(int index) const {
  const auto n = mode_indices(index);
  const double unit = 2.0 * std::numbers::pi / box_length_;
  return {unit * n[0], unit * n[1], unit * n[2]};
}

double BasisDescriptor::wavevector_norm2(int index) const {
  const auto k = wavevector(index);
  return k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
}

BasisDescriptor BasisDescriptor::with_light_speed(double c) const {
  return BasisDescriptor(box_length_, mode_bound_, c);
}

double dirac_eigenvalue(const BasisDescriptor& basis, int mode) {
  const double c = basis.light_speed();
  return std::sqrt(c * c * c * c + c * c * basis.wavevector_norm2(mode));
}

Mat apply_dirac_columns(const Mat& coeffs, const BasisDescriptor& basis, double shift) {
  require_rows(coeffs, basis, 4, "apply_dirac");
  Mat out(coeffs.rows(), coeffs.cols());
  const double c = basis.light_speed();
  for (int mode = 0; mode < basis.mode_count(); ++mode) {
    Eigen::Matrix4cd d = dirac_block(basis.wavevector(mode), c);
    d.diagonal().array() -= shift;
    out.middleRows<4>(4 * mode).noalias() = d * coeffs.middleRows<4>(4 * mode);
  }
  return out;
}

SpinorField apply_dirac(const SpinorField& field, const BasisDescriptor& basis) {
  return SpinorField{apply_dirac_columns(field.coeffs, basis)};
}

Mat project_spectral_columns(const Mat& coeffs, SpectralSign sign, const BasisDescriptor& basis) {
  require_rows(coeffs, basis, 4, "project_spectral");
  Mat out(coeffs.rows(), coeffs.cols());
  const double c = basis.light_speed();
  const double s = sign == SpectralSign::positive ? 1.0 : -1.0;
  for (int mode = 0; mode < basis.mode_count(); ++mode) {
    const Eigen::Matrix4cd d = dirac_block(basis.wavevector(mode), c);
    const Eigen::Matrix4cd p =
        0.5 * (Eigen::Matrix4cd::Identity() + (s / dirac_eigenvalue(basis, mode)) * d);
    out.middleRows<4>(4 * mode).noalias() = p * coeffs.middleRows<4>(4 * mode);
  }
  return out;
}

SpinorField project_spectral(const SpinorField& field, SpectralSign sign,
                             const BasisDescriptor& basis) {
  return SpinorField{project_spectral_columns(field.coeffs, sign, basis)};
}

double inner_product_weight(InnerProductKind kind, const BasisDescriptor& basis, int mode) {
  const double k2 = basis.wavevector_norm2(mode);
  switch (kind) {
    case InnerProductKind::l2:
      return 1.0;
    case InnerProductKind::energy:
      return std::sqrt(1.0 + k2);
    case InnerProductKind::light_speed: {
      const double c = basis.light_speed();
      return std::sqrt(1.0 + k2 / (c * c));
    }
  }
  return 1.0;
}

Complex inner_product_columns(const Mat& x, const Mat& y, int components, InnerProductKind kind,
                              const BasisDescriptor& basis) {
  require_rows(x, basis, components, "inner_product");
  require_rows(y, basis, components, "inner_product");
  if (x.cols() != y.cols()) throw DimensionError("inner_product: orbital counts differ");
  Complex sum = 0.0;
  for (int mode = 0; mode < basis.mode_count(); ++mode) {
    const double w = inner_product_weight(kind, basis, mode);
    const auto xb = x.middleRows(mode * components, components);
    const auto yb = y.middleRows(mode * components, components);
    sum += w * (xb.conjugate().cwiseProduct(yb)).sum();
  }
  return sum;
}

template <int C>
Complex inner_product(const Field<C>& x, const Field<C>& y, InnerProductKind kind,
                      const BasisDescriptor& basis) {
  return inner_product_columns(x.coeffs, y.coeffs, C, kind, basis);
}

template Complex inner_product<2>(const Field<2>&, const Field<2>&, InnerProductKind,
                                  const BasisDescriptor&);
template Complex inner_product<4>(const Field<4>&, const Field<4>&, InnerProductKind,
                                  const BasisDescriptor&);

Mat apply_pauli_gradient_columns(const Mat& coeffs, const BasisDescriptor& basis) {
  require_rows(coeffs, basis, 2, "apply_pauli_gradient");
  Mat out(coeffs.rows(), coeffs.cols());
  for (int mode = 0; mode < basis.mode_count(); ++mode) {
    out.middleRows<2>(2 * mode).noalias() =
        pauli_dot(basis.wavevector(mode)) * coeffs.middleRows<2>(2 * mode);
  }
  return out;
}

PauliField apply_pauli_gradient(const PauliField& field, const BasisDescriptor& basis) {
  return PauliField{apply_pauli_gradient_columns(field.coeffs, basis)};
}

namespace {

Mat component_block(const Mat& spinors, int first) {
  if (spinors.rows() % 4 != 0) throw DimensionError("spinor block: rows not a multiple of 4");
  const Eigen::Index modes = spinors.rows() / 4;
  Mat out(2 * modes, spinors.cols());
  for (Eigen::Index m = 0; m < modes; ++m) {
    out.middleRows<2>(2 * m) = spinors.middleRows<2>(4 * m + first);
  }
  return out;
}

}  // namespace

Mat upper_components(const Mat& spinors) { return component_block(spinors, 0); }
Mat lower_components(const Mat& spinors) { return component_block(spinors, 2); }

Mat embed_upper(const Mat& pauli) {
  if (pauli.rows() % 2 != 0) throw DimensionError("embed_upper: rows not a multiple of 2");
  const Eigen::Index modes = pauli.rows() / 2;
  Mat out = Mat::Zero(4 * modes, pauli.cols());
  for (Eigen::Index m = 0; m < modes; ++m) {
    out.middleRows<2>(4 * m) = pauli.middleRows<2>(2 * m);
  }
  return out;
}

}  // namespace mcdf
