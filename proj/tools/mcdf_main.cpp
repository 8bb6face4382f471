// mcdf: batch front end. Exit codes: 0 success, 2 configuration error or
// infeasible gamma, 3 solver failure (or certificate failure), 1 failed
// invariant checks.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI/CLI.hpp>

#include "mcdf/checks.hpp"
#include "mcdf/config.hpp"
#include "mcdf/limit.hpp"
#include "mcdf/parallel.hpp"
#include "mcdf/report_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

mcdf::RunConfig resolve(const Common& common) {
  if (!std::filesystem::exists(common.config))
    throw mcdf::ConfigError("--config: file '" + common.config + "' does not exist");
  mcdf::RunConfig cfg = mcdf::load_config(common.config);
  if (!common.out.empty()) cfg.outputs.dir = common.out;
  if (common.seed) {
    cfg.seed = *common.seed;
    cfg.mchf.seed = *common.seed;
  }
  return cfg;
}

std::string output_path(const mcdf::RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.outputs.dir) / name).string();
}

int cmd_solve(const Common& common) {
  using namespace mcdf;
  const RunConfig cfg = resolve(common);
  if (cfg.c_values.size() != 1)
    throw ConfigError("problem.c: solve expects a single value (use sweep for a list)");
  const double c = cfg.c_values.front();
  const LimitProblem& p = cfg.problem;

  const Hamiltonian nr(BasisDescriptor(p.box_length, p.mode_bound, 1.0), p.nuclei, KineticModel::schrodinger);
  const Hamiltonian model(BasisDescriptor(p.box_length, p.mode_bound, c), p.nuclei, KineticModel::dirac);
  MchfResult mchf;
  SolverConfig solver = cfg.solver;
  SplitState start;
  try {
    mchf = minimize_mchf(p.orbitals, p.electrons, nr, cfg.mchf);
    std::cerr << "mchf: I^K = " << mchf.energy << ", occupation floor " << occupation_floor(mchf) << '\n';
    if (cfg.gamma_auto) solver.gamma_floor = cfg.gamma_fraction * occupation_floor(mchf);
    start = cfg.outputs.warm_start.empty() ? seed_from_mchf(mchf, model) : load_state(cfg.outputs.warm_start, model);
  } catch (const ConfigError&) {
    throw;
  } catch (const InfeasibleGammaError&) {
    throw;
  } catch (const Error& e) {
    std::cerr << "mcdf solve: reference solve failed: " << e.what() << '\n';
    return kExitSolver;
  }
  if (cfg.gamma_auto && !(solver.gamma_floor > 0.0)) {
    std::string msg = "solver.gamma: the MCHF occupation floor is 0, so gamma = auto gives an empty constraint";
    if (p.electrons == 2 && p.orbitals == 3) msg += "; for N=2 and K=3 every CI vector has occupations (1, 1, 0)";
    throw InfeasibleGammaError(msg);
  }

  const auto t0 = std::chrono::steady_clock::now();
  SolverReport report;
  try {
    report = outer_minimize(start, solver, model);
  } catch (const InfeasibleGammaError&) {
    throw;
  } catch (const Error& e) {
    std::cerr << "mcdf solve: solver failed: " << e.what() << '\n';
    return kExitSolver;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const Certificate cert = certify_solution(report, model, default_tolerances(solver));
  const std::string path = output_path(cfg, cfg.outputs.result);
  write_file(path, result_document(cfg, c, report, cert, &mchf));

  std::cerr << "E - Nc^2 = " << report.energy.excess << "  df1 = " << cert.df1 << "  df2 = " << cert.df2
            << "  min_occ = " << report.min_occ << "  gamma = " << solver.gamma_floor << "  (" << seconds
            << " s)\n";
  for (const auto& check : cert.checks)
    if (!check.passed)
      std::cerr << "  " << (check.required ? "FAILED " : "note   ") << check.name << ": " << check.value
                << " (threshold " << check.threshold << ")\n";
  std::cout << path << '\n';
  return cert.passed() ? kExitOk : kExitSolver;
}

int cmd_sweep(const Common& common) {
  using namespace mcdf;
  const RunConfig cfg = resolve(common);
  SweepResult sweep;
  try {
    sweep = sweep_c(cfg.c_values, cfg.problem, cfg.sweep_options());
  } catch (const ConfigError&) {
    throw;
  } catch (const InfeasibleGammaError&) {
    throw;
  } catch (const Error& e) {
    std::cerr << "mcdf sweep: reference solve failed: " << e.what() << '\n';
    return kExitSolver;
  }
  const SweepSummary summary = summarize_sweep(sweep.records);
  const PersistenceReport persistence = occupation_persistence(sweep.records, sweep.gamma_floor);
  const std::string table = output_path(cfg, cfg.outputs.table);
  const std::string doc = output_path(cfg, cfg.outputs.summary);
  write_file(table, sweep_table(sweep.records));
  write_file(doc, sweep_summary_document(cfg, sweep, summary, persistence));
  for (const auto& r : sweep.records) {
    std::cerr << "c = " << r.c << ": ";
    if (!r.error.empty()) std::cerr << "FAILED (" << r.error << ")\n";
    else std::cerr << "gap " << r.gap_to_IK << (r.certified ? "" : " [not certified]") << '\n';
  }
  std::cout << table << '\n' << doc << '\n';
  const bool enough = 2 * summary.certified >= static_cast<int>(sweep.records.size());
  return enough ? kExitOk : kExitSolver;
}

int cmd_check(const std::string& scale, std::uint64_t seed, double fault_scale) {
  using namespace mcdf;
  CheckOptions options;
  options.scale = parse_check_scale(scale);
  options.seed = seed;
  options.coulomb.slater_condon_kernel_scale = fault_scale;
  bool all = true;
  for (const auto& family : run_invariant_suite(options)) {
    std::cout << (family.passed ? "PASS " : "FAIL ") << family.name << ": " << family.detail << '\n';
    all = all && family.passed;
  }
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiconfiguration Dirac-Fock laboratory"};
  app.require_subcommand(1);

  Common common;
  std::string scale = "default";
  std::uint64_t check_seed = 0;
  double fault_scale = 1.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "Run configuration (YAML)")->required();
    sub->add_option("--out", common.out, "Output directory (overrides outputs.dir)");
    sub->add_option("--seed", common.seed, "Seed for randomized multi-starts");
    sub->add_option("--threads", common.threads, "Worker threads (1 = bit-stable)")->check(CLI::PositiveNumber);
  };
  CLI::App* solve = app.add_subcommand("solve", "Certified MCDF solve at one speed of light");
  add_common(solve);
  CLI::App* sweep = app.add_subcommand("sweep", "Warm-started sweep over a list of c values");
  add_common(sweep);
  CLI::App* check = app.add_subcommand("check", "Run the cross-module invariant suite");
  check->add_option("--scale", scale, "tiny | small | default")->check(CLI::IsMember({"tiny", "small", "default"}));
  check->add_option("--seed", check_seed, "Seed for random samples");
  check->add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber);
  check->add_option("--fault-kernel-scale", fault_scale, "Test hook: scale the Slater-Condon kernel constant")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  mcdf::set_thread_count(common.threads);

  try {
    if (*solve) return cmd_solve(common);
    if (*sweep) return cmd_sweep(common);
    return cmd_check(scale, check_seed, fault_scale);
  } catch (const mcdf::ConfigError& e) {
    std::cerr << "mcdf: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const mcdf::InfeasibleGammaError& e) {
    std::cerr << "mcdf: infeasible occupation constraint: " << e.what() << '\n';
    return kExitConfig;
  } catch (const mcdf::Error& e) {
    std::cerr << "mcdf: " << e.what() << '\n';
    return kExitSolver;
  }
}
