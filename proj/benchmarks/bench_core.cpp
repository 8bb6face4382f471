#include <benchmark/benchmark.h>

#include "mcdf/minmax.hpp"

using namespace mcdf;

namespace {

Hamiltonian helium(int mode_bound, double c) {
  NuclearConfiguration nuc;
  nuc.nuclei.push_back({{3.0, 3.0, 3.0}, 2.0});
  return Hamiltonian(BasisDescriptor(6.0, mode_bound, c), nuc, KineticModel::dirac);
}

// Deterministic orthonormal spinors in P+.
OrbitalSet orbitals(const Hamiltonian& model, int k) {
  const BasisDescriptor& b = model.basis();
  Mat x(b.dimension(4), k);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < k; ++j) x(i, j) = Complex(std::sin(1.0 + i * 0.37 + j * 1.3), std::cos(i * 0.11 - j));
  x = project_spectral_columns(x, SpectralSign::positive, b);
  Eigen::HouseholderQR<Mat> qr(x);
  return OrbitalSet{qr.householderQ() * Mat::Identity(x.rows(), k), 4};
}

CIVector ci(int k, int n) {
  CIVector a;
  a.orbitals = k;
  a.electrons = n;
  a.coeffs = Vec::Ones(binomial(k, n)).normalized();
  return a;
}

void BM_SpectralProjection(benchmark::State& state) {
  const Hamiltonian model = helium(static_cast<int>(state.range(0)), 40.0);
  const OrbitalSet psi = orbitals(model, 4);
  for (auto _ : state) benchmark::DoNotOptimize(project_spectral_columns(psi.coeffs, SpectralSign::positive, model.basis()));
}
BENCHMARK(BM_SpectralProjection)->Arg(1)->Arg(2)->Arg(3);

void BM_PairFields(benchmark::State& state) {
  const Hamiltonian model = helium(static_cast<int>(state.range(0)), 40.0);
  const OrbitalSet psi = orbitals(model, 4);
  for (auto _ : state) benchmark::DoNotOptimize(PairFields(psi, model));
}
BENCHMARK(BM_PairFields)->Arg(1)->Arg(2)->Arg(3);

void BM_SlaterCondon(benchmark::State& state) {
  const Hamiltonian model = helium(1, 40.0);
  const int k = static_cast<int>(state.range(0));
  const OrbitalSet psi = orbitals(model, k);
  for (auto _ : state) benchmark::DoNotOptimize(ci_hamiltonian(psi, 2, model));
}
BENCHMARK(BM_SlaterCondon)->Arg(2)->Arg(4)->Arg(6);

void BM_Energy(benchmark::State& state) {
  const Hamiltonian model = helium(2, 40.0);
  const OrbitalSet psi = orbitals(model, 4);
  const CIVector a = ci(4, 2);
  for (auto _ : state) benchmark::DoNotOptimize(energy(a, psi, model));
}
BENCHMARK(BM_Energy);

void BM_Gradients(benchmark::State& state) {
  const Hamiltonian model = helium(2, 40.0);
  const OrbitalSet psi = orbitals(model, 4);
  const CIVector a = ci(4, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gradient_a(a, psi, model));
    benchmark::DoNotOptimize(gradient_psi(a, psi, model));
  }
}
BENCHMARK(BM_Gradients);

void BM_InnerMaximize(benchmark::State& state) {
  const Hamiltonian model = helium(2, 40.0);
  const OrbitalSet psi = orbitals(model, 4);
  const CIVector a = ci(4, 2);
  SolverConfig cfg;
  cfg.gamma_floor = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(inner_maximize(a, psi, cfg, model));
}
BENCHMARK(BM_InnerMaximize)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
