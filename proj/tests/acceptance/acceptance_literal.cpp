// Criterion 8 exactly as posed: helium-like toy with three orbitals. For two
// electrons in three orbitals every CI vector has occupations (1, 1, 0), so
// the reference floor is zero and no positive gamma admits a feasible state.
// This program reports that honestly and exits nonzero.

#include <cstdio>
#include <exception>

#include "mcdf/minmax.hpp"
#include "mcdf/parallel.hpp"

using namespace mcdf;

int main() {
  set_thread_count(1);
  NuclearConfiguration nuc;
  nuc.nuclei.push_back({{3.0, 3.0, 3.0}, 2.0});
  const Hamiltonian nr(BasisDescriptor(6.0, 2, 1.0), nuc, KineticModel::schrodinger);
  const Hamiltonian model(BasisDescriptor(6.0, 2, 40.0), nuc, KineticModel::dirac);
  const MchfResult mchf = minimize_mchf(3, 2, nr, {});
  const double floor = occupation_floor(mchf);
  const double gamma = 0.5 * floor;
  std::printf("reference I^3 = %.10f, occupation floor = %.3e, gamma = 0.5*floor = %.3e\n", mchf.energy, floor, gamma);

  bool passed = false;
  if (gamma <= 1e-12) {
    std::printf("gamma is not positive: min_occ > gamma cannot hold with a nonempty feasible set\n");
  } else {
    try {
      SolverConfig cfg;
      cfg.gamma_floor = gamma;
      const SolverReport rep = outer_minimize(seed_from_mchf(mchf, model), cfg, model);
      const Certificate cert = certify_solution(rep, model, default_tolerances(cfg));
      passed = cert.df1 < 1e-8 && cert.df2 < 1e-8 && rep.min_occ > gamma && rep.lambda.asymmetry <= 1e-9;
    } catch (const std::exception& e) {
      std::printf("solver: %s\n", e.what());
    }
  }
  // any positive gamma is rejected
  try {
    SolverConfig cfg;
    cfg.gamma_floor = 1e-3;
    outer_minimize(seed_from_mchf(mchf, model), cfg, model);
    std::printf("gamma = 1e-3 unexpectedly accepted\n");
  } catch (const InfeasibleGammaError& e) {
    std::printf("gamma = 1e-3 rejected: %s\n", e.what());
  }
  std::printf("[%s] criterion  8 (K=3 as stated): certificate on an empty feasible set\n", passed ? "PASS" : "FAIL");
  return passed ? 0 : 1;
}
