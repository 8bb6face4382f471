#include "mcdf/optimize.hpp"

#include <cmath>

#include "mcdf/energy.hpp"

namespace mcdf {

double LbfgsMemory::push(const Mat& s, const Mat& y) {
  const double sy = real_dot(s, y);
  if (sy > 1e-14 * std::sqrt(real_dot(s, s) * real_dot(y, y))) {
    s_.push_back(s);
    y_.push_back(y);
    if (static_cast<int>(s_.size()) > capacity_) {
      s_.pop_front();
      y_.pop_front();
    }
  }
  return sy;
}

Mat LbfgsMemory::apply(const Mat& g, const std::function<Mat(const Mat&)>& h0) const {
  const std::size_t m = s_.size();
  std::vector<double> alpha(m), rho(m);
  Mat q = g;
  for (std::size_t i = m; i-- > 0;) {
    rho[i] = 1.0 / real_dot(s_[i], y_[i]);
    alpha[i] = rho[i] * real_dot(s_[i], q);
    q -= alpha[i] * y_[i];
  }
  Mat r = h0(q);
  if (m > 0) {
    // Scale the initial guess so that it matches the latest curvature pair.
    const Mat hy = h0(y_.back());
    const double denom = real_dot(y_.back(), hy);
    if (denom > 0.0) r *= real_dot(s_.back(), y_.back()) / denom;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double beta = rho[i] * real_dot(y_[i], r);
    r += (alpha[i] - beta) * s_[i];
  }
  return r;
}

Mat frame_tangent(const Mat& x, const Mat& z) { return z - x * hermitian_part(x.adjoint() * z); }

Vec lowest_eigenvector(const Mat& ci, const Vec& reference) {
  const HermitianEigen eig = hermitian_eigen(ci);
  Vec v = eig.vectors.col(0);
  const Complex overlap = v.dot(reference);
  if (std::abs(overlap) > 1e-300) v *= overlap / std::abs(overlap);
  return v;
}

namespace {

struct Point {
  CIVector a;
  Mat x;
  FrameEvaluation eval;
  Mat grad;  // Riemannian gradient (real inner product)
};

Mat riemannian_gradient(const FrameProblem& p, const Mat& x, const Mat& wirtinger) {
  const Mat g = p.project ? p.project(wirtinger) : wirtinger;
  return 2.0 * frame_tangent(x, g);
}

double ci_stationarity(const CIVector& a, const Mat& ci) {
  const Vec ha = ci * a.coeffs;
  return 2.0 * (ha - a.coeffs.dot(ha).real() * a.coeffs).norm();
}

}  // namespace

FrameResult minimize_frames(const FrameProblem& problem, CIVector a, Mat x, const FrameOptions& options,
                            const Mat* warm) {
  auto evaluate = [&](const CIVector& aa, const Mat& xx, const Mat* warm, bool grad) {
    return problem.evaluate(aa, xx, warm, grad);
  };
  auto first = evaluate(a, x, warm, true);
  if (!first) throw ConvergenceError("minimize_frames: initial point outside the admissible domain");
  Point cur{a, x, std::move(*first), Mat()};
  cur.grad = riemannian_gradient(problem, cur.x, cur.eval.gradient);

  FrameResult result;
  result.history.push_back(cur.eval.value);
  LbfgsMemory memory(options.memory);
  auto precond = [&](const Mat& z) {
    Mat r = problem.precondition ? problem.precondition(z, gamma_matrix(cur.a)) : z;
    return frame_tangent(cur.x, problem.project ? problem.project(r) : r);
  };

  double grad_a = 0.0;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    // a-step
    grad_a = 0.0;
    if (!problem.freeze_a && cur.a.coeffs.size() > 1) {
      const Vec raw = lowest_eigenvector(cur.eval.ci_matrix, cur.a.coeffs);
      CIVector target{cur.a.orbitals, cur.a.electrons, raw};
      bool binding = false;
      if (problem.gamma_floor > 0.0) {
        target = retract_to_s_gamma(target, problem.gamma_floor);
        binding = (target.coeffs - raw).norm() > 1e-12;
      }
      grad_a = binding ? (target.coeffs - cur.a.coeffs).norm() : ci_stationarity(cur.a, cur.eval.ci_matrix);
      if ((target.coeffs - cur.a.coeffs).norm() > 1e-15) {
        double t = 1.0;
        for (int trial = 0; trial < 12; ++trial, t *= 0.5) {
          CIVector cand = target;
          if (t < 1.0) {
            cand.coeffs = ((1.0 - t) * cur.a.coeffs + t * target.coeffs).normalized();
            if (problem.gamma_floor > 0.0) cand = retract_to_s_gamma(cand, problem.gamma_floor);
          }
          auto ev = evaluate(cand, cur.x, &cur.eval.auxiliary, true);
          if (ev && ev->value <= cur.eval.value + options.slack) {
            cur.a = cand;
            cur.eval = std::move(*ev);
            cur.grad = riemannian_gradient(problem, cur.x, cur.eval.gradient);
            result.history.push_back(cur.eval.value);
            break;
          }
        }
      }
      if (!binding) grad_a = ci_stationarity(cur.a, cur.eval.ci_matrix);
    }

    const double gnorm = cur.grad.norm();
    if (gnorm < options.tolerance && grad_a < options.tolerance) {
      result.converged = true;
      break;
    }

    // X-step
    Mat dir = -memory.apply(cur.grad, precond);
    dir = frame_tangent(cur.x, problem.project ? problem.project(dir) : dir);
    double slope = real_dot(cur.grad, dir);
    if (!(slope < 0.0)) {
      memory.clear();
      dir = -precond(cur.grad);
      slope = real_dot(cur.grad, dir);
    }
    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      double t = 1.0;
      for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
        Mat step = cur.x + t * dir;
        if (problem.project) step = problem.project(step);
        Mat trial_x = normalize_g(step);
        auto ev = evaluate(cur.a, trial_x, &cur.eval.auxiliary, true);
        if (!ev) continue;
        if (ev->value <= cur.eval.value + 1e-4 * t * slope + options.slack) {
          Mat new_grad = riemannian_gradient(problem, trial_x, ev->gradient);
          memory.push(frame_tangent(trial_x, t * dir), new_grad - frame_tangent(trial_x, cur.grad));
          cur.x = std::move(trial_x);
          cur.eval = std::move(*ev);
          cur.grad = std::move(new_grad);
          result.history.push_back(cur.eval.value);
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        memory.clear();
        dir = -precond(cur.grad);
        slope = real_dot(cur.grad, dir);
      }
    }
    if (!accepted) {
      result.iterations = iter + 1;
      break;
    }
  }
  result.a = cur.a;
  result.x = cur.x;
  result.gradient_x = cur.grad.norm();
  result.gradient_a = grad_a;
  result.iterations = std::max(result.iterations, iter);
  result.evaluation = std::move(cur.eval);
  return result;
}

}  // namespace mcdf
