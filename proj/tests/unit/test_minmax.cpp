#include <gtest/gtest.h>

#include <cmath>

#include "mcdf/minmax.hpp"
#include "support.hpp"

using namespace mcdf;
using namespace testing_support;

namespace {

struct Helium {
  oracle::Box box;
  std::vector<oracle::PointCharge> charges;
  Hamiltonian nr;
  Hamiltonian model;

  Helium(int m, double c)
      : box{5.0, m, c},
        charges(centred(box, 2.0)),
        nr(BasisDescriptor(5.0, m, 1.0), nuclei_of(charges), KineticModel::schrodinger),
        model(basis_of(box), nuclei_of(charges), KineticModel::dirac) {}
};

SolverConfig config_for(const MchfResult& mchf) {
  SolverConfig cfg;
  cfg.gamma_floor = 0.5 * occupation_floor(mchf);
  cfg.tol_outer = 1e-9;
  return cfg;
}

}  // namespace

TEST(Seed, PositiveSpectralAndOrthonormal) {
  Helium he(1, 20.0);
  const MchfResult mchf = minimize_mchf(4, 2, he.nr, {});
  const SplitState s = seed_from_mchf(mchf, he.model);
  const Mat& p = s.psi_plus.coeffs;
  EXPECT_LT((p.adjoint() * p - Mat::Identity(4, 4)).norm(), 1e-12);
  EXPECT_LT(project_spectral_columns(p, SpectralSign::negative, he.model.basis()).norm(), 1e-12);
  EXPECT_EQ(s.psi_minus.coeffs.norm(), 0.0);
  const SplitState moved = transfer_state(s, he.model.with_light_speed(40.0));
  EXPECT_LT(project_spectral_columns(moved.psi_plus.coeffs, SpectralSign::negative,
                                     BasisDescriptor(5.0, 1, 40.0))
                .norm(),
            1e-12);
}

TEST(Inner, ConcaveAndMaximizing) {
  Helium he(1, 20.0);
  const MchfResult mchf = minimize_mchf(4, 2, he.nr, {});
  const SplitState s = seed_from_mchf(mchf, he.model);
  SolverConfig cfg = config_for(mchf);
  const InnerResult r = inner_maximize(s.a, s.psi_plus, cfg, he.model);
  EXPECT_GE(r.value_excess, r.value_at_zero_excess - 1e-12);
  EXPECT_LT(r.gradient_norm, 1e-8);
  EXPECT_LT(project_spectral_columns(r.psi_minus.coeffs, SpectralSign::positive, he.model.basis()).norm(), 1e-12);
  // strictly negative second differences along random negative-subspace directions
  oracle::Rng rng(51);
  auto f = [&](const Mat& minus) {
    return energy(s.a, OrbitalSet{normalize_g(Mat(s.psi_plus.coeffs + minus)), 4}, he.model).excess;
  };
  for (int d = 0; d < 10; ++d) {
    Mat z = project_spectral_columns(oracle::random_matrix(rng, s.psi_plus.coeffs.rows(), 4),
                                     SpectralSign::negative, he.model.basis());
    z /= z.norm();
    const double h = 1e-3;
    const double second = f(r.psi_minus.coeffs + h * z) - 2 * f(r.psi_minus.coeffs) + f(r.psi_minus.coeffs - h * z);
    EXPECT_LT(second, 0.0);
  }
}

TEST(Outer, CertifiedSolveOnFourOrbitals) {
  Helium he(1, 20.0);
  const MchfResult mchf = minimize_mchf(4, 2, he.nr, {});
  const SolverConfig cfg = config_for(mchf);
  const SolverReport rep = outer_minimize(seed_from_mchf(mchf, he.model), cfg, he.model);
  EXPECT_TRUE(rep.converged);
  for (std::size_t i = 1; i < rep.history.size(); ++i) EXPECT_LE(rep.history[i], rep.history[i - 1] + 1e-12);
  const Certificate cert = certify_solution(rep, he.model, default_tolerances(cfg));
  for (const auto& c : cert.checks)
    if (c.required) EXPECT_TRUE(c.passed) << c.name << " = " << c.value;
  EXPECT_LT(cert.df1, 1e-8);
  EXPECT_LT(cert.df2, 1e-8);
  EXPECT_GT(rep.min_occ, cfg.gamma_floor);
  EXPECT_LT(std::abs(rep.energy.excess - mchf.energy), 0.01);  // O(1/c^2) away from I^K
  // the cached and recomputed residuals agree
  EXPECT_NEAR(cert.df1, rep.residual_df1, 1e-10);
}

TEST(Outer, SingleDeterminantCase) {
  Helium he(1, 20.0);
  const MchfResult mchf = minimize_mchf(2, 2, he.nr, {});
  SolverConfig cfg;
  cfg.gamma_floor = 0.5;
  cfg.tol_outer = 1e-9;
  const SolverReport rep = outer_minimize(seed_from_mchf(mchf, he.model), cfg, he.model);
  const Certificate cert = certify_solution(rep, he.model, default_tolerances(cfg));
  EXPECT_TRUE(cert.passed());
  EXPECT_LT(cert.df2, 1e-12);
  EXPECT_NEAR(rep.min_occ, 1.0, 1e-12);
}

TEST(Outer, PerturbedStateFailsCertificate) {
  Helium he(1, 20.0);
  const MchfResult mchf = minimize_mchf(4, 2, he.nr, {});
  const SolverConfig cfg = config_for(mchf);
  SolverReport rep = outer_minimize(seed_from_mchf(mchf, he.model), cfg, he.model);
  oracle::Rng rng(52);
  rep.psi_full.coeffs = normalize_g(Mat(rep.psi_full.coeffs + 1e-3 * oracle::random_matrix(rng, rep.psi_full.coeffs.rows(), 4)));
  const Certificate cert = certify_solution(rep, he.model, default_tolerances(cfg));
  EXPECT_FALSE(cert.passed());
  const CertificateCheck* df1 = cert.find("residual_df1");
  ASSERT_NE(df1, nullptr);
  EXPECT_FALSE(df1->passed);
}

TEST(Outer, InfeasibleGamma) {
  Helium he(1, 20.0);
  const MchfResult mchf3 = minimize_mchf(3, 2, he.nr, {});
  SolverConfig cfg;
  cfg.gamma_floor = 0.1;
  EXPECT_THROW(outer_minimize(seed_from_mchf(mchf3, he.model), cfg, he.model), InfeasibleGammaError);
  const MchfResult mchf4 = minimize_mchf(4, 2, he.nr, {});
  cfg.gamma_floor = 0.6;  // above N/K
  EXPECT_THROW(outer_minimize(seed_from_mchf(mchf4, he.model), cfg, he.model), InfeasibleGammaError);
}

TEST(Outer, RejectsNonrelativisticModel) {
  Helium he(1, 20.0);
  const MchfResult mchf = minimize_mchf(2, 2, he.nr, {});
  EXPECT_THROW(seed_from_mchf(mchf, he.nr), DimensionError);
}
