#include "mcdf/mchf.hpp"

#include <random>
#include <string>

#include "mcdf/optimize.hpp"

namespace mcdf {

namespace {

void require_schrodinger(const Hamiltonian& model, const char* where) {
  if (model.kinetic() != KineticModel::schrodinger) {
    throw DimensionError(std::string(where) + ": requires the nonrelativistic (2-spinor) model");
  }
}

// Embeds the CI vector of a smaller orbital space into a larger one.
CIVector extend_ci(const CIVector& a, int orbitals) {
  const DeterminantSpace small(a.orbitals, a.electrons);
  const DeterminantSpace large(orbitals, a.electrons);
  CIVector out{orbitals, a.electrons, Vec::Zero(large.size())};
  for (Eigen::Index i = 0; i < small.size(); ++i) out.coeffs(large.find(small[i])) = a.coeffs(i);
  return out;
}

// Spin-paired orbitals from spatial eigenvectors, orthogonalized against `occupied`.
Mat spin_orbitals(const Mat& spatial, Eigen::Index count, const Mat& occupied) {
  const Eigen::Index modes = spatial.rows();
  Mat out(2 * modes, 0);
  for (Eigen::Index j = 0; j < spatial.cols() && out.cols() < count; ++j) {
    for (int s = 0; s < 2 && out.cols() < count; ++s) {
      Vec v = Vec::Zero(2 * modes);
      for (Eigen::Index m = 0; m < modes; ++m) v(2 * m + s) = spatial(m, j);
      for (int pass = 0; pass < 2; ++pass) {
        if (occupied.cols() > 0) v -= occupied * (occupied.adjoint() * v);
        if (out.cols() > 0) v -= out * (out.adjoint() * v);
      }
      if (v.norm() < 1e-6) continue;
      out.conservativeResize(Eigen::NoChange, out.cols() + 1);
      out.col(out.cols() - 1) = v.normalized();
    }
  }
  if (out.cols() < count) throw DimensionError("not enough basis functions for the requested orbitals");
  return out;
}

FrameProblem mchf_problem(const Hamiltonian& model) {
  FrameProblem problem;
  problem.evaluate = [&model](const CIVector& a, const Mat& x, const Mat*, bool with_gradient)
      -> std::optional<FrameEvaluation> {
    FrameEvaluation ev;
    const OrbitalEvaluation o = evaluate_orbitals(a, x, model, with_gradient, &ev.ci_matrix);
    ev.value = o.energy.total;
    ev.gradient = o.gradient;
    return ev;
  };
  const BasisDescriptor basis = model.basis();
  problem.precondition = [basis](const Mat& z, const Mat& gamma) {
    Mat out(z.rows(), z.cols());
    for (int mode = 0; mode < basis.mode_count(); ++mode) {
      out.middleRows<2>(2 * mode) = z.middleRows<2>(2 * mode) / (0.5 * basis.wavevector_norm2(mode) + 1.0);
    }
    const Eigen::Index k = gamma.rows();
    const Mat weight = (gamma.transpose() + 0.02 * Mat::Identity(k, k)).inverse();
    return Mat(out * weight);
  };
  return problem;
}

MchfResult finish(const FrameResult& r, const Hamiltonian& model) {
  MchfResult out;
  out.a = r.a;
  out.phi = OrbitalSet{r.x, 2};
  out.energy = r.evaluation.value;
  out.min_occ = min_occupation(r.a);
  out.residual = orbital_residual(out.a, out.phi, model).df1;
  const Vec ha = r.evaluation.ci_matrix * r.a.coeffs;
  out.residual_ci = (ha - r.a.coeffs.dot(ha).real() * r.a.coeffs).norm();
  out.iterations = r.iterations;
  out.converged = r.converged;
  return out;
}

}  // namespace

Mat spatial_one_body(const Hamiltonian& model) {
  const BasisDescriptor& basis = model.basis();
  const int modes = basis.mode_count();
  // V acting on scalar fields: run the 2-spinor multiplier on spin-up columns.
  Mat up = Mat::Zero(2 * modes, modes);
  for (int m = 0; m < modes; ++m) up(2 * m, m) = 1.0;
  const Mat vup = model.apply_nuclear(up);
  Mat h(modes, modes);
  for (int m = 0; m < modes; ++m) h.row(m) = vup.row(2 * m);
  for (int m = 0; m < modes; ++m) h(m, m) += 0.5 * basis.wavevector_norm2(m);
  return hermitian_part(h);
}

MchfResult mchf_initial_guess(int orbitals, int electrons, const Hamiltonian& model) {
  require_schrodinger(model, "mchf_initial_guess");
  const HermitianEigen eig = hermitian_eigen(spatial_one_body(model));
  MchfResult out;
  out.phi = OrbitalSet{spin_orbitals(eig.vectors, orbitals, Mat()), 2};
  out.a = CIVector::basis_vector(orbitals, electrons, 0);
  return out;
}

MchfResult minimize_mchf(int orbitals, int electrons, const Hamiltonian& model, const MchfConfig& config,
                         const MchfResult* seed_from) {
  require_schrodinger(model, "minimize_mchf");
  if (electrons > orbitals) throw DimensionError("minimize_mchf: N > K");
  MchfResult start;
  if (seed_from) {
    if (seed_from->a.orbitals > orbitals || seed_from->a.electrons != electrons) {
      throw DimensionError("minimize_mchf: seed must have N electrons and at most K orbitals");
    }
    const Mat& old = seed_from->phi.coeffs;
    const HermitianEigen eig = hermitian_eigen(spatial_one_body(model));
    Mat phi(old.rows(), orbitals);
    phi.leftCols(old.cols()) = old;
    if (orbitals > old.cols()) phi.rightCols(orbitals - old.cols()) = spin_orbitals(eig.vectors, orbitals - old.cols(), old);
    start.phi = OrbitalSet{normalize_g(phi), 2};
    start.a = extend_ci(seed_from->a, orbitals);
  } else {
    start = mchf_initial_guess(orbitals, electrons, model);
  }

  const FrameProblem problem = mchf_problem(model);
  FrameOptions options;
  options.tolerance = config.tolerance;
  options.max_iterations = config.max_iterations;

  MchfResult best = finish(minimize_frames(problem, start.a, start.phi.coeffs, options), model);
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal;
  for (int s = 0; s < config.extra_starts; ++s) {
    Mat noise(start.phi.coeffs.rows(), start.phi.coeffs.cols());
    for (Eigen::Index i = 0; i < noise.size(); ++i) noise(i) = Complex(normal(rng), normal(rng));
    const Mat x = normalize_g(Mat(start.phi.coeffs + config.perturbation * noise / noise.norm()));
    MchfResult trial = finish(minimize_frames(problem, start.a, x, options), model);
    if (trial.energy < best.energy - 1e-12) best = std::move(trial);
  }
  return best;
}

double full_ci_oracle(int electrons, const Hamiltonian& model) {
  require_schrodinger(model, "full_ci_oracle");
  const int orbitals = static_cast<int>(model.basis().dimension(2));
  const std::int64_t dim = binomial(orbitals, electrons);
  if (dim > 20000) {
    throw DimensionError("full_ci_oracle: " + std::to_string(dim) + " determinants exceed the 2e4 guard");
  }
  const OrbitalSet all{Mat::Identity(orbitals, orbitals), 2};
  const Mat h = ci_hamiltonian_excess(all, electrons, model);
  Eigen::SelfAdjointEigenSolver<Mat> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double occupation_floor(const MchfResult& result) { return min_occupation(result.a); }

}  // namespace mcdf
