#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "mcdf/energy.hpp"
#include "support.hpp"

using namespace mcdf;
using namespace testing_support;

namespace {

struct Toy {
  oracle::Box box{5.0, 1, 6.0};
  std::vector<oracle::PointCharge> charges = centred(box, 2.0);
  Hamiltonian model{basis_of(box), nuclei_of(charges), KineticModel::dirac};
};

// Central-difference errors at h and h/2 against an analytic slope.
std::pair<double, double> fd_errors(const std::function<double(double)>& f, double analytic, double h) {
  const double e1 = std::abs((f(h) - f(-h)) / (2 * h) - analytic);
  const double e2 = std::abs((f(h / 2) - f(-h / 2)) / h - analytic);
  return {e1, e2};
}

}  // namespace

TEST(Energy, EqualsBruteForceExpectation) {
  oracle::Rng rng(41);
  Toy t;
  for (auto [k, n] : std::vector<std::pair<int, int>>{{2, 1}, {3, 2}, {4, 2}, {4, 3}}) {
    const Mat psi = oracle::random_orbitals(rng, t.box, 4, k);
    const oracle::Vec a = oracle::random_unit_vector(rng, binomial(k, n));
    const Mat h = oracle::brute_force_ci(psi, 4, n, oracle::Kinetic::dirac, t.box, t.charges);
    const double expect = (a.adjoint() * h * a)(0, 0).real();
    const EnergyBreakdown e = energy(ci_of(a, k, n), OrbitalSet{psi, 4}, t.model);
    EXPECT_NEAR(e.total, expect, 1e-10 * std::abs(expect));
    EXPECT_NEAR(e.excess, expect - n * 36.0, 1e-9);
    EXPECT_NEAR(e.kinetic_rest + e.nuclear + e.two_body, e.total, 1e-10 * std::abs(expect));
  }
}

TEST(Energy, MchfRequiresSchrodingerModel) {
  oracle::Rng rng(42);
  Toy t;
  const OrbitalSet psi{oracle::random_orbitals(rng, t.box, 4, 2), 4};
  EXPECT_THROW(energy_mchf(CIVector::basis_vector(2, 2, 0), psi, t.model), DimensionError);
}

TEST(Energy, GroupInvariance) {
  oracle::Rng rng(43);
  Toy t;
  const OrbitalSet psi{oracle::random_orbitals(rng, t.box, 4, 4), 4};
  const CIVector a = ci_of(oracle::random_unit_vector(rng, 6), 4, 2);
  const double e = energy(a, psi, t.model).total;
  for (int r = 0; r < 5; ++r) {
    const auto [a2, psi2] = group_action(oracle::random_unitary(rng, 4), a, psi);
    EXPECT_NEAR(energy(a2, psi2, t.model).total, e, 1e-10 * std::abs(e));
  }
}

TEST(NormalizeG, OrthonormalizesAndIsIdempotent) {
  oracle::Rng rng(44);
  const Mat x = oracle::random_matrix(rng, 40, 4);
  const Mat g = normalize_g(x);
  EXPECT_LT((g.adjoint() * g - Mat::Identity(4, 4)).norm(), 1e-13);
  EXPECT_LT((normalize_g(g) - g).norm(), 1e-13);
  // Lowdin: g(X) = X S^{-1/2} stays closest to X, i.e. X^* g(X) is Hermitian positive
  const Mat c = x.adjoint() * g;
  EXPECT_LT((c - c.adjoint()).norm(), 1e-12);
  Mat degenerate = x;
  degenerate.col(3) = degenerate.col(2);
  EXPECT_THROW(normalize_g(degenerate), DegeneracyError);
}

TEST(NormalizeG, PullbackMatchesFiniteDifference) {
  oracle::Rng rng(45);
  const Mat phi = oracle::random_matrix(rng, 30, 3);
  const Mat w = oracle::random_matrix(rng, 30, 3);
  // f(Psi) = Re tr(W^* Psi) has Wirtinger gradient W / 2
  auto f = [&](const Mat& p) { return real_dot(w, normalize_g(p)); };
  const Mat grad = normalize_g_pullback(phi, 0.5 * w);
  const Mat z = oracle::random_matrix(rng, 30, 3);
  const double h = 1e-5;
  const double fd = (f(phi + h * z) - f(phi - h * z)) / (2 * h);
  EXPECT_NEAR(fd, 2.0 * real_dot(grad, z), 1e-8);
}

TEST(Gradients, CiGradientSecondOrder) {
  oracle::Rng rng(46);
  Toy t;
  const OrbitalSet psi{oracle::random_orbitals(rng, t.box, 4, 4), 4};
  const CIVector a = ci_of(oracle::random_unit_vector(rng, 6), 4, 2);
  const Vec g = gradient_a(a, psi, t.model);
  EXPECT_NEAR(std::abs(a.coeffs.dot(g)), 0.0, 1e-10);  // tangent to the sphere
  for (int d = 0; d < 5; ++d) {
    Vec z = oracle::random_unit_vector(rng, 6);
    z -= a.coeffs * a.coeffs.dot(z);
    z.normalize();
    auto f = [&](double s) {
      CIVector b = a;
      b.coeffs = (a.coeffs + s * z).normalized();
      return energy(b, psi, t.model).excess;
    };
    const auto [e1, e2] = fd_errors(f, real_dot(g, z), 1e-3);
    EXPECT_NEAR(e1 / e2, 4.0, 1.0);
  }
}

TEST(Gradients, OrbitalGradientSecondOrder) {
  oracle::Rng rng(47);
  Toy t;
  const OrbitalSet psi{oracle::random_orbitals(rng, t.box, 4, 3), 4};
  const CIVector a = ci_of(oracle::random_unit_vector(rng, 3), 3, 2);
  const Mat g = gradient_psi(a, psi, t.model).coeffs;
  // tangent to the frame manifold: herm(Psi^* G) = 0
  EXPECT_LT(hermitian_part(psi.coeffs.adjoint() * g).norm(), 1e-9 * std::max(1.0, g.norm()));
  for (int d = 0; d < 5; ++d) {
    Mat z = oracle::random_orbitals(rng, t.box, 4, 3);
    z -= psi.coeffs * hermitian_part(psi.coeffs.adjoint() * z);
    z /= z.norm();
    auto f = [&](double s) { return energy(a, OrbitalSet{normalize_g(Mat(psi.coeffs + s * z)), 4}, t.model).excess; };
    const auto [e1, e2] = fd_errors(f, real_dot(g, z), 1e-3);
    EXPECT_NEAR(e1 / e2, 4.0, 1.0);
  }
}

TEST(Gradients, WirtingerGradientOfSmoothFunctional) {
  oracle::Rng rng(48);
  Toy t;
  const Mat psi = oracle::random_orbitals(rng, t.box, 4, 3);
  const CIVector a = ci_of(oracle::random_unit_vector(rng, 3), 3, 2);
  const OrbitalEvaluation ev = evaluate_orbitals(a, psi, t.model);
  const Mat z = oracle::random_matrix(rng, psi.rows(), 3) * 0.05;
  auto f = [&](double s) { return evaluate_orbitals(a, Mat(psi + s * z), t.model, false).value; };
  const double h = 1e-4;
  EXPECT_NEAR((f(h) - f(-h)) / (2 * h), 2.0 * real_dot(ev.gradient, z), 1e-6);
}

TEST(Multipliers, HermitianAtStationaryPointOnly) {
  oracle::Rng rng(49);
  Toy t;
  const OrbitalSet psi{oracle::random_orbitals(rng, t.box, 4, 3), 4};
  const CIVector a = ci_of(oracle::random_unit_vector(rng, 3), 3, 2);
  const MultiplierReport r = lambda_matrix(a, psi, t.model);
  EXPECT_LT((r.lambda - r.lambda.adjoint()).norm(), 1e-12);
  EXPECT_GT(r.asymmetry, 1e-6);  // random point: far from stationary
  EXPECT_EQ(r.window_upper.size(), 3);
  const OrbitalResidual res = orbital_residual(a, psi, t.model);
  EXPECT_GT(res.df1, 1e-6);
}
