#include "mcdf/minmax.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "mcdf/optimize.hpp"

namespace mcdf {

namespace {

struct InnerPoint {
  Mat h;
  double f = 0.0;  // F(h), rest energy removed
  Mat grad;        // real gradient of F with respect to h, in the range of P-
};

InnerPoint inner_point(const CIVector& a, const Mat& x, Mat h, const Hamiltonian& model) {
  const Mat phi = x + h;
  const Mat psi = normalize_g(phi);
  const OrbitalEvaluation o = evaluate_orbitals(a, psi, model, true);
  InnerPoint p;
  p.h = std::move(h);
  p.f = o.value;
  p.grad = 2.0 * project_spectral_columns(normalize_g_pullback(phi, o.gradient), SpectralSign::negative,
                                          model.basis());
  return p;
}

// Right factor (Gamma^T + eps)^{-1} shared by both preconditioners.
Mat occupation_weight(const Mat& gamma) {
  const Eigen::Index k = gamma.rows();
  return (gamma.transpose() + 0.02 * Mat::Identity(k, k)).inverse();
}

double c_norm(const Mat& h, const BasisDescriptor& basis) {
  return std::sqrt(std::max(0.0, inner_product_columns(h, h, 4, InnerProductKind::light_speed, basis).real()));
}

void require_dirac(const Hamiltonian& model, const char* where) {
  if (model.kinetic() != KineticModel::dirac) {
    throw DimensionError(std::string(where) + ": requires the Dirac (4-spinor) model");
  }
}

}  // namespace

InnerResult inner_maximize(const CIVector& a, const OrbitalSet& psi_plus, const SolverConfig& config,
                           const Hamiltonian& model, const Mat* warm) {
  require_dirac(model, "inner_maximize");
  model.require_compatible(psi_plus, "inner_maximize");
  const BasisDescriptor& basis = model.basis();
  const Mat& x = psi_plus.coeffs;
  const double c2 = model.rest_energy();

  InnerPoint cur = inner_point(a, x, Mat::Zero(x.rows(), x.cols()), model);
  InnerResult out;
  out.value_at_zero_excess = cur.f;
  if (warm && warm->rows() == x.rows() && warm->cols() == x.cols() && warm->norm() > 0.0) {
    InnerPoint w = inner_point(a, x, project_spectral_columns(*warm, SpectralSign::negative, basis), model);
    if (w.f >= cur.f) cur = std::move(w);
  }

  const Mat weight = occupation_weight(gamma_matrix(a));
  auto precond = [&](const Mat& z) {
    Mat out_z(z.rows(), z.cols());
    for (int mode = 0; mode < basis.mode_count(); ++mode) {
      out_z.middleRows<4>(4 * mode) = z.middleRows<4>(4 * mode) / (dirac_eigenvalue(basis, mode) + c2);
    }
    return Mat(out_z * weight);
  };

  // Minimize -F; gradients below are those of -F.
  LbfgsMemory memory(config.lbfgs_memory);
  Mat g = -cur.grad;
  int iter = 0;
  for (; iter < config.max_iter_inner; ++iter) {
    if (g.norm() < config.tol_inner) break;
    Mat dir = -project_spectral_columns(memory.apply(g, precond), SpectralSign::negative, basis);
    double slope = real_dot(g, dir);
    if (!(slope < 0.0)) {
      memory.clear();
      dir = -precond(g);
      slope = real_dot(g, dir);
    }
    bool accepted = false;
    double t = 1.0;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      InnerPoint trial = inner_point(a, x, cur.h + t * dir, model);
      if (-trial.f <= -cur.f + 1e-4 * t * slope + 1e-13 * (1.0 + std::abs(cur.f))) {
        const Mat s = t * dir;
        const Mat y = -trial.grad - g;
        const double sy = real_dot(s, y);
        const double ss = real_dot(s, s);
        if (sy < -1e-8 * std::sqrt(ss * real_dot(y, y)) && ss > 1e-24) {
          throw SubcriticalError("inner problem is not concave along the search direction (c too small "
                                 "for this basis): curvature " + std::to_string(-sy / ss),
                                 -sy / ss);
        }
        memory.push(s, y);
        cur = std::move(trial);
        g = -cur.grad;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (g.norm() < 1e3 * config.tol_inner) break;  // rounding floor
      throw ConvergenceError("inner_maximize: line search stalled at gradient norm " + std::to_string(g.norm()));
    }
  }
  if (iter >= config.max_iter_inner && g.norm() >= config.tol_inner) {
    throw ConvergenceError("inner_maximize: no convergence in " + std::to_string(config.max_iter_inner) +
                           " iterations (gradient " + std::to_string(g.norm()) + ")");
  }
  out.psi_minus = OrbitalSet{cur.h, 4};
  out.value_excess = cur.f;
  out.value = cur.f + a.electrons * c2;
  out.gradient_norm = g.norm();
  out.norm_c = c_norm(cur.h, basis);
  out.iterations = iter;
  return out;
}

double reduced_value(const CIVector& a, const OrbitalSet& psi_plus, const SolverConfig& config,
                     const Hamiltonian& model) {
  return inner_maximize(a, psi_plus, config, model).value;
}

SplitState seed_from_mchf(const MchfResult& mchf, const Hamiltonian& model) {
  require_dirac(model, "seed_from_mchf");
  const Mat up = embed_upper(mchf.phi.coeffs);
  if (up.rows() != model.basis().dimension(4)) throw DimensionError("seed_from_mchf: basis mismatch");
  const Mat plus = normalize_g(project_spectral_columns(up, SpectralSign::positive, model.basis()));
  return SplitState{mchf.a, OrbitalSet{plus, 4}, OrbitalSet{Mat::Zero(plus.rows(), plus.cols()), 4}};
}

SplitState transfer_state(const SplitState& state, const Hamiltonian& model) {
  require_dirac(model, "transfer_state");
  const Mat plus = normalize_g(project_spectral_columns(state.psi_plus.coeffs, SpectralSign::positive, model.basis()));
  return SplitState{state.a, OrbitalSet{plus, 4}, OrbitalSet{Mat::Zero(plus.rows(), plus.cols()), 4}};
}

SolverReport outer_minimize(const SplitState& initial, const SolverConfig& config, const Hamiltonian& model) {
  require_dirac(model, "outer_minimize");
  model.require_compatible(initial.psi_plus, "outer_minimize");
  const auto started = std::chrono::steady_clock::now();
  const BasisDescriptor& basis = model.basis();
  const double c2 = model.rest_energy();
  if (!(config.tol_inner > 0.0) || !(config.tol_outer > 0.0)) {
    throw ConfigError("solver tolerances must be positive");
  }

  CIVector a0 = initial.a.normalized();
  if (config.gamma_floor > 0.0) a0 = retract_to_s_gamma(a0, config.gamma_floor);
  const Mat x0 = normalize_g(project_spectral_columns(initial.psi_plus.coeffs, SpectralSign::positive, basis));

  FrameProblem problem;
  problem.gamma_floor = config.gamma_floor;
  problem.project = [&basis](const Mat& z) { return project_spectral_columns(z, SpectralSign::positive, basis); };
  problem.evaluate = [&](const CIVector& a, const Mat& x, const Mat* warm,
                         bool) -> std::optional<FrameEvaluation> {
    if (config.energy_cap_enforced && evaluate_orbitals(a, x, model, false).value >= 0.0) return std::nullopt;
    const InnerResult inner = inner_maximize(a, OrbitalSet{x, 4}, config, model, warm);
    const Mat phi = x + inner.psi_minus.coeffs;
    const Mat psi = normalize_g(phi);
    FrameEvaluation ev;
    const OrbitalEvaluation o = evaluate_orbitals(a, psi, model, true, &ev.ci_matrix);
    ev.value = o.value;
    ev.gradient = normalize_g_pullback(phi, o.gradient);
    ev.auxiliary = inner.psi_minus.coeffs;
    return ev;
  };
  problem.precondition = [&basis, c2](const Mat& z, const Mat& gamma) {
    Mat out(z.rows(), z.cols());
    for (int mode = 0; mode < basis.mode_count(); ++mode) {
      out.middleRows<4>(4 * mode) = z.middleRows<4>(4 * mode) / (dirac_eigenvalue(basis, mode) - c2 + 1.0);
    }
    return Mat(out * occupation_weight(gamma));
  };

  FrameOptions options;
  options.tolerance = config.tol_outer;
  options.max_iterations = config.max_iter_outer;
  options.memory = config.lbfgs_memory;
  const Mat& warm = initial.psi_minus.coeffs;
  const bool has_warm = warm.rows() == x0.rows() && warm.cols() == x0.cols();
  const FrameResult r = minimize_frames(problem, a0, x0, options, has_warm ? &warm : nullptr);

  if (!r.converged &&
      (r.gradient_x > 10.0 * config.tol_outer || r.gradient_a > 10.0 * config.tol_outer)) {
    throw ConvergenceError("outer_minimize: stopped after " + std::to_string(r.iterations) +
                           " iterations with gradient norms " + std::to_string(r.gradient_x) + " (orbitals), " +
                           std::to_string(r.gradient_a) + " (CI)");
  }

  SolverReport report;
  const InnerResult inner = inner_maximize(r.a, OrbitalSet{r.x, 4}, config, model, &r.evaluation.auxiliary);
  report.state = SplitState{r.a, OrbitalSet{r.x, 4}, inner.psi_minus};
  report.psi_full = OrbitalSet{normalize_g(Mat(r.x + inner.psi_minus.coeffs)), 4};
  report.lambda = lambda_matrix(r.a, report.psi_full, model, config.k_hat);
  Mat ci;
  const OrbitalEvaluation o = evaluate_orbitals(r.a, report.psi_full.coeffs, model, true, &ci);
  report.energy = o.energy;
  const Vec ha = ci * r.a.coeffs;
  report.ci_energy_excess = r.a.coeffs.dot(ha).real();
  report.ci_energy = report.ci_energy_excess + r.a.electrons * c2;
  report.residual_df2 = (ha - report.ci_energy_excess * r.a.coeffs).norm();
  report.residual_df1 = orbital_residual(r.a, report.psi_full, model).df1;
  report.min_occ = min_occupation(r.a);
  report.gamma_floor = config.gamma_floor;
  report.gradient_plus = r.gradient_x;
  report.gradient_a = r.gradient_a;
  report.inner_gradient = inner.gradient_norm;
  report.inner_norm_c = inner.norm_c;
  report.iterations = r.iterations;
  report.converged = r.converged;
  report.history = r.history;
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

CertificateTolerances default_tolerances(const SolverConfig& config) {
  CertificateTolerances t;
  t.df1 = 10.0 * config.tol_outer;
  t.df2 = 10.0 * config.tol_outer;
  return t;
}

bool Certificate::passed() const {
  for (const auto& c : checks)
    if (c.required && !c.passed) return false;
  return true;
}

const CertificateCheck* Certificate::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

Certificate certify_solution(const SolverReport& report, const Hamiltonian& model,
                             const CertificateTolerances& tol) {
  Certificate cert;
  auto add = [&](std::string name, double value, double threshold, bool passed, bool required = true) {
    cert.checks.push_back(CertificateCheck{std::move(name), value, threshold, passed, required});
  };
  const BasisDescriptor& basis = model.basis();
  const OrbitalSet& psi = report.psi_full;
  const CIVector& a = report.state.a;
  const Eigen::Index k = psi.size();

  // Orbital equation through the plain Fock operator.
  const Mat g = fock_apply(a, psi, psi, model).coeffs;
  const Mat overlap = psi.coeffs.adjoint() * g;
  cert.df1 = (g - psi.coeffs * hermitian_part(overlap)).norm();
  const double asym = (overlap - overlap.adjoint()).norm();
  // CI equation through the full matrix.
  const Mat h = ci_hamiltonian(psi, a.electrons, model).matrix;
  const Vec ha = h * a.coeffs;
  cert.df2 = (ha - a.coeffs.dot(ha).real() * a.coeffs).norm();

  add("residual_df1", cert.df1, tol.df1, cert.df1 <= tol.df1);
  add("residual_df2", cert.df2, tol.df2, cert.df2 <= tol.df2);
  add("lambda_hermitian", asym, tol.hermiticity, asym <= tol.hermiticity);
  const double gram_full = (psi.gram() - Mat::Identity(k, k)).cwiseAbs().maxCoeff();
  const double gram_plus = (report.state.psi_plus.gram() - Mat::Identity(k, k)).cwiseAbs().maxCoeff();
  add("gram_full", gram_full, tol.gram, gram_full <= tol.gram);
  add("gram_plus", gram_plus, tol.gram, gram_plus <= tol.gram);
  const double split_plus =
      project_spectral_columns(report.state.psi_plus.coeffs, SpectralSign::negative, basis).norm();
  const double split_minus =
      project_spectral_columns(report.state.psi_minus.coeffs, SpectralSign::positive, basis).norm();
  add("split_plus", split_plus, tol.split, split_plus <= tol.split);
  add("split_minus", split_minus, tol.split, split_minus <= tol.split);
  const double occ = min_occupation(a);
  add("occupation_feasible", occ - report.gamma_floor, -1e-9, occ >= report.gamma_floor - 1e-9);
  const double match = std::max(std::abs(cert.df1 - report.residual_df1), std::abs(cert.df2 - report.residual_df2));
  add("cache_match", match, tol.cache_match, match <= tol.cache_match);

  // Informational diagnostics.
  add("occupation_unsaturated", occ - report.gamma_floor, 0.0, occ > report.gamma_floor, false);
  const double upper = report.lambda.window_upper.size() ? report.lambda.window_upper(0) : 0.0;
  const double lower = report.lambda.window_lower.size() ? report.lambda.window_lower(0) : 0.0;
  add("window_upper_min", upper, 0.0, upper >= 0.0, false);
  add("window_lower_min", lower, 0.0, lower >= 0.0, false);
  add("lambda_band", report.lambda.band, 0.0, true, false);
  return cert;
}

}  // namespace mcdf
