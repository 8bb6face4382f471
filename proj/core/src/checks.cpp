#include "mcdf/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "mcdf/energy.hpp"

namespace mcdf {
namespace {

using Rng = std::mt19937_64;

Mat random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

// Smooth random orbitals: Gaussian-damped in |k| so energies stay O(1).
Mat random_orbitals(Rng& rng, const BasisDescriptor& basis, int components, int count) {
  Mat m = random_matrix(rng, basis.dimension(components), count);
  for (int mode = 0; mode < basis.mode_count(); ++mode) {
    const double damp = std::exp(-0.25 * basis.wavevector_norm2(mode));
    m.middleRows(static_cast<Eigen::Index>(mode) * components, components) *= damp;
  }
  return m;
}

CIVector random_ci(Rng& rng, int orbitals, int electrons) {
  CIVector a;
  a.orbitals = orbitals;
  a.electrons = electrons;
  a.coeffs = random_matrix(rng, binomial(orbitals, electrons), 1).col(0);
  return a.normalized();
}

Mat random_unitary(Rng& rng, int n) {
  const Mat q = Eigen::HouseholderQR<Mat>(random_matrix(rng, n, n)).householderQ();
  return q;
}

NuclearConfiguration centred_nucleus(double box, double charge) {
  NuclearConfiguration nuc;
  nuc.nuclei.push_back({{0.5 * box, 0.5 * box, 0.5 * box}, charge});
  return nuc;
}

std::vector<int> mode_bounds(CheckScale scale) {
  switch (scale) {
    case CheckScale::tiny:
      return {1};
    case CheckScale::small:
      return {1, 2};
    case CheckScale::full:
      return {1, 2, 3};
  }
  return {1};
}

FamilyResult finish(FamilyResult r) {
  r.passed = r.worst <= r.threshold && std::isfinite(r.worst);
  std::ostringstream msg;
  msg.precision(3);
  msg << "worst " << std::scientific << r.worst << " (limit " << r.threshold << ", " << r.samples << " samples)";
  if (!r.detail.empty()) msg << "; " << r.detail;
  r.detail = msg.str();
  return r;
}

double relative(double x, double y) { return std::abs(x - y) / std::max(1.0, std::max(std::abs(x), std::abs(y))); }

}  // namespace

CheckScale parse_check_scale(const std::string& name) {
  if (name == "tiny") return CheckScale::tiny;
  if (name == "small") return CheckScale::small;
  if (name == "default" || name == "full") return CheckScale::full;
  throw ConfigError("--scale: expected one of tiny, small, default (got '" + name + "')");
}

FamilyResult check_projectors(const CheckOptions& options) {
  FamilyResult r{"projector identities", false, 0.0, 1e-12, 0, {}};
  Rng rng(options.seed ^ 0x1001);
  const int per_basis = options.scale == CheckScale::tiny ? 20 : 100;
  for (int m : mode_bounds(options.scale)) {
    for (double c : {1.0, 20.0, 137.0}) {
      const BasisDescriptor basis(6.0, m, c);
      const Mat x = random_matrix(rng, basis.dimension(4), per_basis);
      const double scale = x.norm();
      const Mat pp = project_spectral_columns(x, SpectralSign::positive, basis);
      const Mat pm = project_spectral_columns(x, SpectralSign::negative, basis);
      const Mat dx = apply_dirac_columns(x, basis);
      Mat abs_d(x.rows(), x.cols());
      for (int mode = 0; mode < basis.mode_count(); ++mode) {
        const double e = dirac_eigenvalue(basis, mode);
        abs_d.middleRows(4 * mode, 4) = e * (pp.middleRows(4 * mode, 4) - pm.middleRows(4 * mode, 4));
      }
      const double dscale = dx.norm();
      r.worst = std::max(r.worst, (pp + pm - x).norm() / scale);
      r.worst = std::max(r.worst, (project_spectral_columns(pp, SpectralSign::positive, basis) - pp).norm() / scale);
      r.worst = std::max(r.worst, project_spectral_columns(pp, SpectralSign::negative, basis).norm() / scale);
      r.worst = std::max(r.worst, (abs_d - dx).norm() / dscale);
      r.worst = std::max(r.worst, (project_spectral_columns(dx, SpectralSign::positive, basis) -
                                   apply_dirac_columns(pp, basis))
                                          .norm() /
                                      dscale);
      r.samples += per_basis;
    }
  }
  return finish(r);
}

FamilyResult check_occupation(const CheckOptions& options) {
  FamilyResult r{"occupation-matrix laws", false, 0.0, 1e-10, 0, {}};
  Rng rng(options.seed ^ 0x2002);
  const int total = options.scale == CheckScale::tiny ? 300 : (options.scale == CheckScale::small ? 2000 : 10000);
  std::vector<std::pair<int, int>> shapes;
  for (int k = 1; k <= 6; ++k)
    for (int n = 1; n <= std::min(k, 3); ++n) shapes.emplace_back(k, n);
  double worst_psd = 0.0;
  for (int s = 0; s < total; ++s) {
    const auto [k, n] = shapes[static_cast<std::size_t>(s) % shapes.size()];
    const CIVector a = random_ci(rng, k, n);
    const Mat g = gamma_matrix(a);
    const RealVec occ = Eigen::SelfAdjointEigenSolver<Mat>(g, Eigen::EigenvaluesOnly).eigenvalues();
    r.worst = std::max(r.worst, (g - g.adjoint()).norm());
    r.worst = std::max(r.worst, std::abs(g.trace().real() - n));
    r.worst = std::max(r.worst, std::abs(g.trace().imag()));
    r.worst = std::max(r.worst, occ.maxCoeff() - 1.0);
    worst_psd = std::max(worst_psd, -occ.minCoeff());
    r.worst = std::max(r.worst, -occ.minCoeff());
    ++r.samples;
  }
  std::ostringstream d;
  d << "most negative occupation " << -worst_psd;
  r.detail = d.str();
  return finish(r);
}

FamilyResult check_energy_paths(const CheckOptions& options) {
  FamilyResult r{"energy-path consistency", false, 0.0, 1e-9, 0, {}};
  Rng rng(options.seed ^ 0x3003);
  const int count = options.scale == CheckScale::tiny ? 10 : 50;
  const std::vector<int> bounds = mode_bounds(options.scale);
  for (int s = 0; s < count; ++s) {
    const int m = bounds[static_cast<std::size_t>(s) % bounds.size()];
    const int k = 2 + s % 3;
    const int n = 1 + s % 2;
    const double c = s % 2 == 0 ? 10.0 : 40.0;
    const BasisDescriptor basis(5.0, m, c);
    const Hamiltonian model(basis, centred_nucleus(5.0, 2.0), KineticModel::dirac, options.coulomb);
    const OrbitalSet psi{normalize_g(random_orbitals(rng, basis, 4, k)), 4};
    const CIVector a = random_ci(rng, k, n);
    const double e = energy(a, psi, model).total;
    const CIMatrix h = ci_hamiltonian(psi, n, model);
    const double ci = (a.coeffs.adjoint() * h.matrix * a.coeffs)(0, 0).real();
    r.worst = std::max(r.worst, std::abs(e - ci) / std::abs(e));
    ++r.samples;
  }
  return finish(r);
}

Mat permutation_sum_ci_matrix(const OrbitalSet& orbitals, int electrons, const Hamiltonian& model) {
  const int k = static_cast<int>(orbitals.size());
  const DeterminantSpace space(k, electrons);
  const PairFields pairs(orbitals, model);
  const Mat h1 = orbitals.coeffs.adjoint() *
                 (model.apply_kinetic(orbitals.coeffs) + model.apply_nuclear(orbitals.coeffs));
  const Mat s = orbitals.gram();

  std::vector<int> perm(static_cast<std::size_t>(electrons));
  Mat out = Mat::Zero(space.size(), space.size());
  for (Eigen::Index bi = 0; bi < space.size(); ++bi) {
    const auto& I = space[bi];
    for (Eigen::Index bj = 0; bj < space.size(); ++bj) {
      const auto& J = space[bj];
      std::iota(perm.begin(), perm.end(), 0);
      Complex sum = 0.0;
      do {
        int inversions = 0;
        for (int p = 0; p < electrons; ++p)
          for (int q = p + 1; q < electrons; ++q)
            if (perm[p] > perm[q]) ++inversions;
        const double sign = inversions % 2 ? -1.0 : 1.0;
        auto overlap_except = [&](int p, int q) {
          Complex prod = 1.0;
          for (int t = 0; t < electrons; ++t)
            if (t != p && t != q) prod *= s(I[t], J[perm[t]]);
          return prod;
        };
        Complex term = 0.0;
        for (int p = 0; p < electrons; ++p) term += h1(I[p], J[perm[p]]) * overlap_except(p, -1);
        for (int p = 0; p < electrons; ++p)
          for (int q = p + 1; q < electrons; ++q)
            term += pairs.integral(I[p], J[perm[p]], I[q], J[perm[q]]) * overlap_except(p, q);
        sum += sign * term;
      } while (std::next_permutation(perm.begin(), perm.end()));
      out(bi, bj) = sum;
    }
  }
  return out;
}

FamilyResult check_slater_condon(const CheckOptions& options) {
  FamilyResult r{"Slater-Condon oracle", false, 0.0, 1e-10, 0, {}};
  Rng rng(options.seed ^ 0x4004);
  const std::vector<std::pair<int, int>> shapes{{2, 2}, {3, 2}, {4, 2}, {3, 3}, {4, 3}, {3, 1}};
  const int repeats = options.scale == CheckScale::full ? 3 : 1;
  for (int rep = 0; rep < repeats; ++rep) {
    for (const auto& [k, n] : shapes) {
      const BasisDescriptor basis(5.0, 1, 10.0);
      const Hamiltonian model(basis, centred_nucleus(5.0, 2.0), KineticModel::dirac, options.coulomb);
      const OrbitalSet psi{normalize_g(random_orbitals(rng, basis, 4, k)), 4};
      const Mat fast = ci_hamiltonian(psi, n, model).matrix;
      const Mat slow = permutation_sum_ci_matrix(psi, n, model);
      r.worst = std::max(r.worst, (fast - slow).cwiseAbs().maxCoeff() / std::max(1.0, slow.cwiseAbs().maxCoeff()));
      ++r.samples;
    }
  }
  return finish(r);
}

FamilyResult check_gradients(const CheckOptions& options) {
  FamilyResult r{"gradient finite differences", false, 0.0, 1.0, 0, {}};
  Rng rng(options.seed ^ 0x5005);
  const int directions = options.scale == CheckScale::tiny ? 6 : 20;
  const BasisDescriptor basis(5.0, 1, 5.0);
  const Hamiltonian model(basis, centred_nucleus(5.0, 2.0), KineticModel::dirac, options.coulomb);
  const int k = 3, n = 2;
  const OrbitalSet psi{normalize_g(random_orbitals(rng, basis, 4, k)), 4};
  const CIVector a = random_ci(rng, k, n);
  const Vec ga = gradient_a(a, psi, model);
  const Mat gp = gradient_psi(a, psi, model).coeffs;
  auto e_of = [&](const CIVector& aa, const Mat& pp) { return energy(aa, OrbitalSet{pp, 4}, model).excess; };

  double worst_dev = 0.0;
  for (int d = 0; d < directions; ++d) {
    // a-direction on the sphere, or an orbital direction on the frame manifold.
    const bool along_a = d % 2 == 0;
    double analytic;
    std::function<double(double)> f;
    if (along_a) {
      Vec z = random_matrix(rng, a.coeffs.size(), 1).col(0);
      z -= a.coeffs * a.coeffs.dot(z);
      z.normalize();
      analytic = real_dot(ga, z);
      f = [&, z](double t) {
        CIVector b = a;
        b.coeffs = (a.coeffs + t * z).normalized();
        return e_of(b, psi.coeffs);
      };
    } else {
      Mat z = random_orbitals(rng, basis, 4, k);
      z -= psi.coeffs * hermitian_part(psi.coeffs.adjoint() * z);
      z /= z.norm();
      analytic = real_dot(gp, z);
      f = [&, z](double t) { return e_of(a, normalize_g(Mat(psi.coeffs + t * z))); };
    }
    const double h = 1e-3;
    const double e1 = std::abs((f(h) - f(-h)) / (2 * h) - analytic);
    const double e2 = std::abs((f(h / 2) - f(-h / 2)) / h - analytic);
    const double ratio = e1 / e2;
    worst_dev = std::max(worst_dev, std::abs(ratio - 4.0));
    ++r.samples;
  }
  r.worst = worst_dev;
  r.detail = "deviation of the halving error ratio from 4";
  return finish(r);
}

FamilyResult check_group_action(const CheckOptions& options) {
  FamilyResult r{"group-action invariance", false, 0.0, 1e-10, 0, {}};
  Rng rng(options.seed ^ 0x6006);
  const int count = options.scale == CheckScale::tiny ? 5 : 20;
  const std::vector<int> bounds = mode_bounds(options.scale);
  for (int s = 0; s < count; ++s) {
    const int m = bounds[static_cast<std::size_t>(s) % bounds.size()];
    const int k = 3 + s % 2, n = 2;
    const BasisDescriptor basis(5.0, m, 20.0);
    const Hamiltonian model(basis, centred_nucleus(5.0, 2.0), KineticModel::dirac, options.coulomb);
    const OrbitalSet psi{normalize_g(random_orbitals(rng, basis, 4, k)), 4};
    const CIVector a = random_ci(rng, k, n);
    const Mat u = random_unitary(rng, k);
    const auto [a2, psi2] = group_action(u, a, psi);
    const double e1 = energy(a, psi, model).total;
    const double e2 = energy(a2, psi2, model).total;
    r.worst = std::max(r.worst, relative(e1, e2));
    ++r.samples;
  }
  return finish(r);
}

std::vector<FamilyResult> run_invariant_suite(const CheckOptions& options) {
  return {check_projectors(options),     check_occupation(options),  check_energy_paths(options),
          check_slater_condon(options),  check_gradients(options),   check_group_action(options)};
}

}  // namespace mcdf
