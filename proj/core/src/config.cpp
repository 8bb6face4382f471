#include "mcdf/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace mcdf {
namespace {

void reject_unknown(const YAML::Node& node, const std::string& where, const std::set<std::string>& known) {
  if (!node.IsMap()) throw ConfigError(where + ": expected a mapping");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!known.count(key)) throw ConfigError(where + "." + key + ": unknown key");
  }
}

template <class T>
T read(const YAML::Node& parent, const std::string& key, const std::string& where, T fallback) {
  const YAML::Node node = parent[key];
  if (!node) return fallback;
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where + "." + key + ": cannot parse value '" + YAML::Dump(node) + "'");
  }
}

template <class T>
T require(const YAML::Node& parent, const std::string& key, const std::string& where) {
  if (!parent[key]) throw ConfigError(where + "." + key + ": missing required key");
  return read<T>(parent, key, where, T{});
}

void parse_problem(const YAML::Node& p, RunConfig& cfg) {
  const std::string w = "problem";
  reject_unknown(p, w, {"electrons", "orbitals", "box_length", "mode_bound", "c", "smearing", "nuclei"});
  cfg.problem.electrons = require<int>(p, "electrons", w);
  cfg.problem.orbitals = require<int>(p, "orbitals", w);
  cfg.problem.box_length = require<double>(p, "box_length", w);
  cfg.problem.mode_bound = require<int>(p, "mode_bound", w);
  cfg.problem.nuclei.smearing = read<double>(p, "smearing", w, 0.0);

  const YAML::Node c = p["c"];
  if (!c) throw ConfigError("problem.c: missing required key");
  cfg.c_values.clear();
  try {
    if (c.IsSequence()) {
      for (const auto& v : c) cfg.c_values.push_back(v.as<double>());
    } else {
      cfg.c_values.push_back(c.as<double>());
    }
  } catch (const YAML::Exception&) {
    throw ConfigError("problem.c: expected a number or a list of numbers");
  }

  const YAML::Node nuclei = p["nuclei"];
  if (!nuclei || !nuclei.IsSequence() || nuclei.size() == 0)
    throw ConfigError("problem.nuclei: expected a nonempty list");
  cfg.problem.nuclei.nuclei.clear();
  for (std::size_t i = 0; i < nuclei.size(); ++i) {
    const std::string wn = "problem.nuclei[" + std::to_string(i) + "]";
    reject_unknown(nuclei[i], wn, {"position", "charge"});
    Nucleus n;
    n.charge = require<double>(nuclei[i], "charge", wn);
    const auto pos = require<std::vector<double>>(nuclei[i], "position", wn);
    if (pos.size() != 3) throw ConfigError(wn + ".position: expected three coordinates");
    n.position = {pos[0], pos[1], pos[2]};
    cfg.problem.nuclei.nuclei.push_back(n);
  }
}

void parse_solver(const YAML::Node& s, RunConfig& cfg) {
  const std::string w = "solver";
  reject_unknown(s, w,
                 {"gamma", "gamma_fraction", "tol_inner", "tol_outer", "max_iter_inner", "max_iter_outer",
                  "lbfgs_memory", "energy_cap", "k_hat"});
  SolverConfig& sc = cfg.solver;
  if (s["gamma"]) {
    const YAML::Node g = s["gamma"];
    if (g.IsScalar() && g.Scalar() == "auto") {
      cfg.gamma_auto = true;
    } else {
      cfg.gamma_auto = false;
      sc.gamma_floor = read<double>(s, "gamma", w, 0.0);
    }
  }
  cfg.gamma_fraction = read<double>(s, "gamma_fraction", w, cfg.gamma_fraction);
  sc.tol_inner = read<double>(s, "tol_inner", w, sc.tol_inner);
  sc.tol_outer = read<double>(s, "tol_outer", w, sc.tol_outer);
  sc.max_iter_inner = read<int>(s, "max_iter_inner", w, sc.max_iter_inner);
  sc.max_iter_outer = read<int>(s, "max_iter_outer", w, sc.max_iter_outer);
  sc.lbfgs_memory = read<int>(s, "lbfgs_memory", w, sc.lbfgs_memory);
  sc.energy_cap_enforced = read<bool>(s, "energy_cap", w, sc.energy_cap_enforced);
  sc.k_hat = read<double>(s, "k_hat", w, sc.k_hat);
}

void parse_mchf(const YAML::Node& m, RunConfig& cfg) {
  const std::string w = "mchf";
  reject_unknown(m, w, {"tolerance", "max_iterations", "extra_starts", "perturbation"});
  cfg.mchf.tolerance = read<double>(m, "tolerance", w, cfg.mchf.tolerance);
  cfg.mchf.max_iterations = read<int>(m, "max_iterations", w, cfg.mchf.max_iterations);
  cfg.mchf.extra_starts = read<int>(m, "extra_starts", w, cfg.mchf.extra_starts);
  cfg.mchf.perturbation = read<double>(m, "perturbation", w, cfg.mchf.perturbation);
}

void parse_outputs(const YAML::Node& o, RunConfig& cfg) {
  const std::string w = "outputs";
  reject_unknown(o, w, {"dir", "result", "table", "summary", "warm_start"});
  OutputConfig& out = cfg.outputs;
  out.dir = read<std::string>(o, "dir", w, out.dir);
  out.result = read<std::string>(o, "result", w, out.result);
  out.table = read<std::string>(o, "table", w, out.table);
  out.summary = read<std::string>(o, "summary", w, out.summary);
  out.warm_start = read<std::string>(o, "warm_start", w, out.warm_start);
}

}  // namespace

SweepOptions RunConfig::sweep_options() const {
  SweepOptions o;
  o.solver = solver;
  o.mchf = mchf;
  o.mchf.seed = seed;
  o.auto_gamma = gamma_auto;
  o.gamma_fraction = gamma_fraction;
  return o;
}

RunConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: YAML syntax error: ") + e.what());
  }
  if (!root || !root.IsMap()) throw ConfigError("config: expected a mapping at top level");
  reject_unknown(root, "config", {"problem", "solver", "mchf", "seed", "outputs"});

  RunConfig cfg;
  if (!root["problem"]) throw ConfigError("problem: missing required section");
  parse_problem(root["problem"], cfg);
  if (root["solver"]) parse_solver(root["solver"], cfg);
  if (root["mchf"]) parse_mchf(root["mchf"], cfg);
  if (root["outputs"]) parse_outputs(root["outputs"], cfg);
  cfg.seed = read<std::uint64_t>(root, "seed", "config", 0);
  cfg.mchf.seed = cfg.seed;
  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void validate_config(const RunConfig& cfg) {
  const LimitProblem& p = cfg.problem;
  if (p.electrons < 1) throw ConfigError("problem.electrons: must be at least 1");
  if (p.orbitals < p.electrons) throw ConfigError("problem.orbitals: must be >= problem.electrons (N <= K)");
  if (!(p.box_length > 0.0)) throw ConfigError("problem.box_length: must be positive");
  if (p.mode_bound < 0) throw ConfigError("problem.mode_bound: must be nonnegative");
  const long modes = 2L * (2 * p.mode_bound + 1) * (2 * p.mode_bound + 1) * (2 * p.mode_bound + 1);
  if (p.orbitals > modes) throw ConfigError("problem.orbitals: exceeds the number of 2-spinor basis functions");
  if (p.nuclei.smearing < 0.0) throw ConfigError("problem.smearing: must be nonnegative");
  for (std::size_t i = 0; i < p.nuclei.nuclei.size(); ++i) {
    const auto& n = p.nuclei.nuclei[i];
    if (!(n.charge > 0.0)) throw ConfigError("problem.nuclei[" + std::to_string(i) + "].charge: must be positive");
    for (double x : n.position)
      if (x < 0.0 || x > p.box_length)
        throw ConfigError("problem.nuclei[" + std::to_string(i) + "].position: outside [0, box_length]");
  }
  if (cfg.c_values.empty()) throw ConfigError("problem.c: empty");
  for (std::size_t i = 0; i < cfg.c_values.size(); ++i) {
    if (!(cfg.c_values[i] > 0.0)) throw ConfigError("problem.c: values must be positive");
    if (i > 0 && !(cfg.c_values[i] > cfg.c_values[i - 1]))
      throw ConfigError("problem.c: sweep values must be strictly increasing");
  }
  const SolverConfig& s = cfg.solver;
  if (!cfg.gamma_auto) {
    const double bound = static_cast<double>(p.electrons) / p.orbitals;
    if (s.gamma_floor < 0.0) throw ConfigError("solver.gamma: must be nonnegative");
    if (s.gamma_floor > bound) {
      std::ostringstream msg;
      msg << "solver.gamma: " << s.gamma_floor << " exceeds N/K = " << bound
          << "; the occupation numbers sum to N over K orbitals, so no CI vector has Gamma >= gamma";
      throw InfeasibleGammaError(msg.str());
    }
  }
  if (!(cfg.gamma_fraction > 0.0 && cfg.gamma_fraction < 1.0))
    throw ConfigError("solver.gamma_fraction: must lie in (0, 1)");
  if (!(s.tol_inner > 0.0)) throw ConfigError("solver.tol_inner: must be positive");
  if (!(s.tol_outer > 0.0)) throw ConfigError("solver.tol_outer: must be positive");
  if (s.max_iter_inner < 1) throw ConfigError("solver.max_iter_inner: must be positive");
  if (s.max_iter_outer < 1) throw ConfigError("solver.max_iter_outer: must be positive");
  if (s.lbfgs_memory < 1) throw ConfigError("solver.lbfgs_memory: must be positive");
  if (!(s.k_hat > 0.0)) throw ConfigError("solver.k_hat: must be positive");
  if (!(cfg.mchf.tolerance > 0.0)) throw ConfigError("mchf.tolerance: must be positive");
  if (cfg.mchf.max_iterations < 1) throw ConfigError("mchf.max_iterations: must be positive");
  if (cfg.mchf.extra_starts < 0) throw ConfigError("mchf.extra_starts: must be nonnegative");
  if (cfg.outputs.dir.empty()) throw ConfigError("outputs.dir: must not be empty");
}

}  // namespace mcdf
