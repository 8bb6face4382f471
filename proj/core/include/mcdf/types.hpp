#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mcdf {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands dimensioned for different bases, component counts or (K, N).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Gram matrix singular or close to it; carries the offending eigenvalue.
class DegeneracyError : public Error {
 public:
  DegeneracyError(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// Orbitals expected orthonormal (Slater-Condon rules, MCHF energy) but are not.
class OrthonormalityError : public Error {
 public:
  using Error::Error;
};

/// Occupation floor that no CI vector of the given (K, N) can satisfy.
class InfeasibleGammaError : public Error {
 public:
  using Error::Error;
};

/// Matrix expected unitary but is not.
class UnitarityError : public Error {
 public:
  using Error::Error;
};

/// Positive curvature of the inner functional along a probed direction.
class SubcriticalError : public Error {
 public:
  SubcriticalError(const std::string& what, double curvature)
      : Error(what), curvature_(curvature) {}
  double curvature() const { return curvature_; }

 private:
  double curvature_;
};

/// Iteration budget exhausted or line search stalled.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration; the message names the offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Real inner product Re tr(A^* B) used by all optimizers.
inline double real_dot(const Mat& a, const Mat& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

/// Hermitian part (A + A^*)/2.
inline Mat hermitian_part(const Mat& a) { return 0.5 * (a + a.adjoint()); }

}  // namespace mcdf
