#include "mcdf/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace mcdf {

namespace {

// The FFTW planner is not reentrant; execution with the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(int n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {}
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

}  // namespace

struct Grid::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Plans(int n) {
    std::lock_guard lock(planner_mutex());
    FftwBuffer a(n * n * n), b(n * n * n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward = fftw_plan_dft_3d(n, n, n, a.data, b.data, FFTW_FORWARD, flags);
    backward = fftw_plan_dft_3d(n, n, n, a.data, b.data, FFTW_BACKWARD, flags);
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
};

Grid::Grid(const BasisDescriptor& basis)
    : per_axis_(basis.modes_per_axis()),
      points_(basis.mode_count()),
      volume_(basis.volume()),
      box_length_(basis.box_length()),
      mode_to_fft_(static_cast<std::size_t>(basis.mode_count())),
      plans_(std::make_shared<const Plans>(basis.modes_per_axis())) {
  const int s = per_axis_;
  for (int mode = 0; mode < points_; ++mode) {
    const auto n = basis.mode_indices(mode);
    const int f1 = (n[0] + s) % s, f2 = (n[1] + s) % s, f3 = (n[2] + s) % s;
    mode_to_fft_[static_cast<std::size_t>(mode)] = (f1 * s + f2) * s + f3;
  }
}

std::array<double, 3> Grid::point(int index) const {
  const int s = per_axis_;
  const double h = box_length_ / s;
  return {h * (index / (s * s)), h * ((index / s) % s), h * (index % s)};
}

// backward: modes (basis order) -> grid values, sum_k c_k e^{+ikx}
// forward:  grid values -> modes (basis order), sum_j f_j e^{-ikx}
void Grid::transform(const Complex* in, Complex* out, bool backward) const {
  std::vector<Complex> buffer(static_cast<std::size_t>(points_), Complex(0.0));
  std::vector<Complex> result(static_cast<std::size_t>(points_));
  if (backward) {
    for (int mode = 0; mode < points_; ++mode) buffer[mode_to_fft_[mode]] = in[mode];
    fftw_execute_dft(plans_->backward, reinterpret_cast<fftw_complex*>(buffer.data()),
                     reinterpret_cast<fftw_complex*>(result.data()));
    std::copy(result.begin(), result.end(), out);
  } else {
    std::copy(in, in + points_, buffer.begin());
    fftw_execute_dft(plans_->forward, reinterpret_cast<fftw_complex*>(buffer.data()),
                     reinterpret_cast<fftw_complex*>(result.data()));
    for (int mode = 0; mode < points_; ++mode) out[mode] = result[mode_to_fft_[mode]];
  }
}

Mat Grid::to_values(const Mat& coeffs, int components) const {
  if (coeffs.rows() != static_cast<Eigen::Index>(points_) * components) {
    throw DimensionError("Grid::to_values: coefficient rows do not match the grid");
  }
  const double scale = 1.0 / std::sqrt(volume_);
  Mat values(points_, coeffs.cols() * components);
  Vec modes(points_), grid(points_);
  for (Eigen::Index i = 0; i < coeffs.cols(); ++i) {
    for (int s = 0; s < components; ++s) {
      for (int mode = 0; mode < points_; ++mode) modes(mode) = coeffs(mode * components + s, i);
      transform(modes.data(), grid.data(), true);
      values.col(i * components + s) = scale * grid;
    }
  }
  return values;
}

Mat Grid::from_values(const Mat& values, int components) const {
  if (values.rows() != points_ || values.cols() % components != 0) {
    throw DimensionError("Grid::from_values: value block does not match the grid");
  }
  const Eigen::Index count = values.cols() / components;
  const double scale = std::sqrt(volume_) / points_;
  Mat coeffs(static_cast<Eigen::Index>(points_) * components, count);
  Vec grid(points_), modes(points_);
  for (Eigen::Index i = 0; i < count; ++i) {
    for (int s = 0; s < components; ++s) {
      grid = values.col(i * components + s);
      transform(grid.data(), modes.data(), false);
      for (int mode = 0; mode < points_; ++mode) coeffs(mode * components + s, i) = scale * modes(mode);
    }
  }
  return coeffs;
}

Vec Grid::spectrum(const Vec& values) const {
  if (values.size() != points_) throw DimensionError("Grid::spectrum: size mismatch");
  Vec out(points_);
  transform(values.data(), out.data(), false);
  return weight() * out;
}

Vec Grid::synthesize(const Vec& spectrum) const {
  if (spectrum.size() != points_) throw DimensionError("Grid::synthesize: size mismatch");
  Vec out(points_);
  transform(spectrum.data(), out.data(), true);
  return out / volume_;
}

Mat Grid::apply_multiplier(const Vec& function, const Mat& coeffs, int components) const {
  if (function.size() != points_) throw DimensionError("Grid::apply_multiplier: size mismatch");
  Mat values = to_values(coeffs, components);
  for (Eigen::Index col = 0; col < values.cols(); ++col) {
    values.col(col) = values.col(col).cwiseProduct(function);
  }
  return from_values(values, components);
}

KatoReport kato_check(const SpinorField& field, const RealVec& potential_on_grid,
                      double total_charge, const BasisDescriptor& basis) {
  if (field.coeffs.size() != basis.dimension(4)) throw DimensionError("kato_check: dimension");
  if (field.coeffs.squaredNorm() == 0.0) throw DimensionError("kato_check: zero field");
  const Grid grid(basis);
  const Vec v = potential_on_grid.cast<Complex>();
  const Mat vpsi = grid.apply_multiplier(v, field.coeffs, 4);
  KatoReport report;
  report.lhs = std::abs(field.coeffs.dot(vpsi.col(0)));
  double kinetic = 0.0;
  for (int mode = 0; mode < basis.mode_count(); ++mode) {
    kinetic += std::sqrt(basis.wavevector_norm2(mode)) *
               field.coeffs.segment<4>(4 * mode).squaredNorm();
  }
  report.rhs = total_charge * std::numbers::pi / 2.0 * kinetic;
  report.satisfied = report.lhs <= report.rhs;
  return report;
}

}  // namespace mcdf
