#include <gtest/gtest.h>

#include <sstream>

#include "mcdf/checks.hpp"
#include "mcdf/report_io.hpp"

using namespace mcdf;

namespace {

const char* kConfig = R"(
problem:
  electrons: 2
  orbitals: 4
  box_length: 5.0
  mode_bound: 1
  c: 20
  nuclei:
    - {position: [2.5, 2.5, 2.5], charge: 2}
solver:
  tol_outer: 1.0e-9
seed: 3
outputs:
  dir: out
)";

std::string with(const std::string& from, const std::string& to) {
  std::string s = kConfig;
  const auto pos = s.find(from);
  return s.replace(pos, from.size(), to);
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, ParsesAndDefaults) {
  const RunConfig c = parse_config(kConfig);
  EXPECT_EQ(c.problem.electrons, 2);
  EXPECT_EQ(c.problem.orbitals, 4);
  ASSERT_EQ(c.c_values.size(), 1u);
  EXPECT_EQ(c.c_values[0], 20.0);
  EXPECT_TRUE(c.gamma_auto);
  EXPECT_EQ(c.solver.tol_outer, 1e-9);
  EXPECT_EQ(c.solver.tol_inner, 1e-10);
  EXPECT_EQ(c.seed, 3u);
  EXPECT_EQ(c.mchf.seed, 3u);
  const RunConfig list = parse_config(with("c: 20", "c: [20, 40, 80]"));
  EXPECT_EQ(list.c_values.size(), 3u);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_NE(error_of(with("electrons: 2", "electrons: 5")).find("problem.orbitals"), std::string::npos);
  EXPECT_NE(error_of(with("box_length: 5.0", "box_length: -1")).find("problem.box_length"), std::string::npos);
  EXPECT_NE(error_of(with("box_length: 5.0", "box_length: abc")).find("problem.box_length"), std::string::npos);
  EXPECT_NE(error_of(with("c: 20", "c: [40, 20]")).find("problem.c"), std::string::npos);
  EXPECT_NE(error_of(with("charge: 2", "charge: 2, mass: 4")).find("problem.nuclei[0].mass"), std::string::npos);
  EXPECT_NE(error_of(with("tol_outer: 1.0e-9", "tol_outr: 1.0e-9")).find("solver.tol_outr"), std::string::npos);
  EXPECT_NE(error_of(with("  mode_bound: 1\n", "")).find("problem.mode_bound"), std::string::npos);
  EXPECT_THROW(parse_config("problem: [1, 2"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST(Config, ExplicitGammaAboveBoundIsInfeasible) {
  try {
    parse_config(with("tol_outer: 1.0e-9", "gamma: 0.7"));
    FAIL() << "expected InfeasibleGammaError";
  } catch (const InfeasibleGammaError& e) {
    EXPECT_NE(std::string(e.what()).find("N/K"), std::string::npos);
  }
  EXPECT_NO_THROW(parse_config(with("tol_outer: 1.0e-9", "gamma: 0.1")));
}

TEST(Results, DocumentRoundTripsAsWarmStart) {
  const RunConfig cfg = parse_config(kConfig);
  const LimitProblem& p = cfg.problem;
  const Hamiltonian nr(BasisDescriptor(p.box_length, p.mode_bound, 1.0), p.nuclei, KineticModel::schrodinger);
  const Hamiltonian model(BasisDescriptor(p.box_length, p.mode_bound, 20.0), p.nuclei, KineticModel::dirac);
  const MchfResult mchf = minimize_mchf(4, 2, nr, cfg.mchf);
  SolverConfig solver = cfg.solver;
  solver.gamma_floor = 0.5 * occupation_floor(mchf);
  const SolverReport rep = outer_minimize(seed_from_mchf(mchf, model), solver, model);
  const Certificate cert = certify_solution(rep, model, default_tolerances(solver));
  const std::string doc = result_document(cfg, 20.0, rep, cert, &mchf);
  EXPECT_NE(doc.find("\"schema\": \"mcdf-result/1\""), std::string::npos);
  EXPECT_NE(doc.find("\"config\""), std::string::npos);
  EXPECT_EQ(doc.find("wall_time"), std::string::npos);
  EXPECT_EQ(doc, result_document(cfg, 20.0, rep, cert, &mchf));

  const SplitState s = parse_state(doc, model);
  const OrbitalSet psi{normalize_g(Mat(s.psi_plus.coeffs + s.psi_minus.coeffs)), 4};
  EXPECT_NEAR(energy(s.a, psi, model).excess, rep.energy.excess, 1e-10);
  EXPECT_THROW(parse_state("{}", model), ConfigError);
  const Hamiltonian other(BasisDescriptor(5.0, 2, 20.0), p.nuclei, KineticModel::dirac);
  EXPECT_THROW(parse_state(doc, other), ConfigError);
}

TEST(Results, SweepTableColumns) {
  SweepRecord r;
  r.c = 20;
  r.energy_shifted = -0.5;
  r.certified = true;
  SweepRecord bad;
  bad.c = 40;
  bad.error = "line search stalled, gave up";
  const std::string t = sweep_table({r, bad});
  std::istringstream in(t);
  std::string header, row1, row2;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  EXPECT_EQ(header,
            "c,energy_shifted,gap_to_IK,small_component_norm,kinetic_balance_residual,lambda_band,min_occ,"
            "residual_df1,residual_df2,certified,error");
  EXPECT_EQ(row1.substr(0, 8), "20,-0.5,");
  EXPECT_NE(row2.find(",0,line search stalled  gave up"), std::string::npos);
}

TEST(Checks, TinySuitePassesAndFaultIsDetected) {
  CheckOptions o;
  o.scale = CheckScale::tiny;
  for (const auto& f : run_invariant_suite(o)) EXPECT_TRUE(f.passed) << f.name << ": " << f.detail;
  o.coulomb.slater_condon_kernel_scale = 1.001;
  EXPECT_FALSE(check_energy_paths(o).passed);
  EXPECT_EQ(parse_check_scale("default"), CheckScale::full);
  EXPECT_THROW(parse_check_scale("huge"), ConfigError);
}
