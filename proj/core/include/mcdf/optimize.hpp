#pragma once

// Shared optimization machinery: a limited-memory quasi-Newton direction
// for matrix-valued unknowns (real inner product Re tr(A^* B)) and the
// alternating minimizer over (a, X) with a on the unit sphere (optionally
// restricted to S_gamma) and X an orthonormal frame inside a fixed linear
// subspace. Both the MCHF problem and the outer min-max problem are
// instances of it.

#include <deque>
#include <functional>
#include <optional>

#include "mcdf/ci.hpp"

namespace mcdf {

/// Two-loop recursion; `h0` applies the initial inverse-Hessian guess.
class LbfgsMemory {
 public:
  explicit LbfgsMemory(int capacity) : capacity_(capacity) {}

  /// Stores the pair if it has positive curvature; returns s.y.
  double push(const Mat& s, const Mat& y);
  void clear() {
    s_.clear();
    y_.clear();
  }
  bool empty() const { return s_.empty(); }
  /// Approximates H^{-1} g.
  Mat apply(const Mat& g, const std::function<Mat(const Mat&)>& h0) const;

 private:
  int capacity_;
  std::deque<Mat> s_;
  std::deque<Mat> y_;
};

/// X - X herm(X^* Z): projection onto the tangent space of orthonormal frames.
Mat frame_tangent(const Mat& x, const Mat& z);

/// One evaluation of the objective at (a, X).
struct FrameEvaluation {
  double value = 0.0;
  /// Wirtinger gradient with respect to X in the embedding space.
  Mat gradient;
  /// CI matrix (any constant shift) at the orbitals the energy is evaluated on.
  Mat ci_matrix;
  /// Problem-specific state carried to the next evaluation (warm start).
  Mat auxiliary;
};

struct FrameProblem {
  /// Returns nullopt when (a, X) lies outside the admissible domain.
  std::function<std::optional<FrameEvaluation>(const CIVector& a, const Mat& x, const Mat* warm,
                                               bool with_gradient)>
      evaluate;
  /// Orthogonal projector onto the subspace holding X (identity if empty).
  std::function<Mat(const Mat&)> project;
  /// Approximate inverse Hessian for a tangent direction; gets Gamma_a.
  std::function<Mat(const Mat&, const Mat& gamma)> precondition;
  double gamma_floor = 0.0;
  bool freeze_a = false;
};

struct FrameOptions {
  double tolerance = 1e-8;
  int max_iterations = 2000;
  int memory = 12;
  /// Accepted increase per step (absolute), absorbing rounding noise.
  double slack = 1e-12;
};

struct FrameResult {
  CIVector a;
  Mat x;
  FrameEvaluation evaluation;
  double gradient_x = 0.0;
  double gradient_a = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

/// Alternates a-steps (lowest eigenvector of the CI matrix, retracted to
/// S_gamma and accepted only if the value does not increase) with
/// preconditioned L-BFGS steps on X using the retraction X -> g(X + Z).
/// `warm` is handed to the first evaluation.
FrameResult minimize_frames(const FrameProblem& problem, CIVector a, Mat x, const FrameOptions& options,
                            const Mat* warm = nullptr);

/// Lowest eigenvector of `ci` with phase aligned to `reference`.
Vec lowest_eigenvector(const Mat& ci, const Vec& reference);

}  // namespace mcdf
