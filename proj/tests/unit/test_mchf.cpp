#include <gtest/gtest.h>

#include <cmath>

#include "mcdf/mchf.hpp"
#include "support.hpp"

using namespace mcdf;
using namespace testing_support;

namespace {

struct Atom {
  oracle::Box box{5.0, 1, 1.0};
  std::vector<oracle::PointCharge> charges = centred(box, 2.0);
  Hamiltonian model{basis_of(box), nuclei_of(charges), KineticModel::schrodinger};
};

}  // namespace

TEST(Mchf, FreeParticleGroundModeHasZeroEnergy) {
  const Hamiltonian free(BasisDescriptor(5.0, 1, 1.0), NuclearConfiguration{}, KineticModel::schrodinger);
  const MchfResult r = minimize_mchf(1, 1, free, {});
  EXPECT_NEAR(r.energy, 0.0, 1e-12);
  EXPECT_NEAR(occupation_floor(r), 1.0, 1e-12);
}

TEST(Mchf, SingleDeterminantMatchesRestrictedHartreeFock) {
  Atom at;
  const MchfResult r = minimize_mchf(2, 2, at.model, {});
  ASSERT_TRUE(r.converged);
  const double rhf = oracle::two_electron_rhf(at.box, at.charges);
  EXPECT_NEAR(r.energy, rhf, 1e-8);
  EXPECT_NEAR(occupation_floor(r), 1.0, 1e-12);
  EXPECT_LT((r.phi.gram() - Mat::Identity(2, 2)).norm(), 1e-9);
}

TEST(Mchf, FullCiOracleMatchesProductSpaceDiagonalization) {
  Atom at;
  EXPECT_NEAR(full_ci_oracle(2, at.model), oracle::two_electron_full_ci(at.box, at.charges), 1e-9);
  // N = 1: lowest eigenvalue of the one-body matrix
  const RealVec ev = Eigen::SelfAdjointEigenSolver<Mat>(spatial_one_body(at.model)).eigenvalues();
  EXPECT_NEAR(full_ci_oracle(1, at.model), ev(0), 1e-12);
}

TEST(Mchf, GuardRejectsLargeSpaces) {
  const Hamiltonian big(BasisDescriptor(5.0, 2, 1.0), NuclearConfiguration{}, KineticModel::schrodinger);
  EXPECT_THROW(full_ci_oracle(3, big), DimensionError);
}

TEST(Mchf, VariationalNesting) {
  Atom at;
  const double fci = full_ci_oracle(2, at.model);
  const MchfResult r2 = minimize_mchf(2, 2, at.model, {});
  const MchfResult r3 = minimize_mchf(3, 2, at.model, {}, &r2);
  const MchfResult r4 = minimize_mchf(4, 2, at.model, {}, &r3);
  EXPECT_LE(fci, r4.energy + 1e-8);
  EXPECT_LE(r4.energy, r3.energy + 1e-8);
  EXPECT_LE(r3.energy, r2.energy + 1e-8);
  EXPECT_LT(r4.energy, r2.energy - 1e-4);  // correlation is actually captured
  EXPECT_GT(occupation_floor(r4), 0.0);
  EXPECT_NEAR(occupation_floor(r3), 0.0, 1e-10);  // (K, N) = (3, 2): always (1, 1, 0)
}

TEST(Mchf, StationarityResidualsSmall) {
  Atom at;
  const MchfResult r = minimize_mchf(4, 2, at.model, {});
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.residual, 1e-7);
  EXPECT_LT(r.residual_ci, 1e-7);
}

TEST(Mchf, MultiStartIsSeedDeterministic) {
  Atom at;
  MchfConfig cfg;
  cfg.extra_starts = 2;
  cfg.seed = 17;
  const MchfResult a = minimize_mchf(4, 2, at.model, cfg);
  const MchfResult b = minimize_mchf(4, 2, at.model, cfg);
  EXPECT_EQ(a.energy, b.energy);
  const MchfResult base = minimize_mchf(4, 2, at.model, {});
  EXPECT_LE(a.energy, base.energy + 1e-10);
}

TEST(Mchf, RejectsWrongModel) {
  const Hamiltonian dirac(BasisDescriptor(5.0, 1, 10.0), NuclearConfiguration{}, KineticModel::dirac);
  EXPECT_THROW(minimize_mchf(2, 2, dirac, {}), DimensionError);
  Atom at;
  EXPECT_THROW(minimize_mchf(1, 2, at.model, {}), DimensionError);
}
