#include "mcdf/report_io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mcdf {
namespace {

using json = nlohmann::ordered_json;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json complex_matrix(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json complex_vector(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

json real_vector(const RealVec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Mat read_matrix(const json& j, Eigen::Index rows, Eigen::Index cols, const std::string& what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    throw ConfigError("warm start: " + what + " has wrong row count");
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ConfigError("warm start: " + what + " has wrong column count");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = Complex(row[k][0].get<double>(), row[k][1].get<double>());
  }
  return m;
}

json config_echo(const RunConfig& cfg) {
  json nuclei = json::array();
  for (const auto& n : cfg.problem.nuclei.nuclei)
    nuclei.push_back({{"position", {n.position[0], n.position[1], n.position[2]}}, {"charge", n.charge}});
  const SolverConfig& s = cfg.solver;
  return {
      {"problem",
       {{"electrons", cfg.problem.electrons},
        {"orbitals", cfg.problem.orbitals},
        {"box_length", cfg.problem.box_length},
        {"mode_bound", cfg.problem.mode_bound},
        {"c", cfg.c_values},
        {"smearing", cfg.problem.nuclei.smearing},
        {"nuclei", nuclei}}},
      {"solver",
       {{"gamma", cfg.gamma_auto ? json("auto") : json(s.gamma_floor)},
        {"gamma_fraction", cfg.gamma_fraction},
        {"tol_inner", s.tol_inner},
        {"tol_outer", s.tol_outer},
        {"max_iter_inner", s.max_iter_inner},
        {"max_iter_outer", s.max_iter_outer},
        {"lbfgs_memory", s.lbfgs_memory},
        {"energy_cap", s.energy_cap_enforced},
        {"k_hat", s.k_hat}}},
      {"mchf",
       {{"tolerance", cfg.mchf.tolerance},
        {"max_iterations", cfg.mchf.max_iterations},
        {"extra_starts", cfg.mchf.extra_starts},
        {"perturbation", cfg.mchf.perturbation}}},
      {"seed", cfg.seed},
      {"outputs",
       {{"dir", cfg.outputs.dir},
        {"result", cfg.outputs.result},
        {"table", cfg.outputs.table},
        {"summary", cfg.outputs.summary},
        {"warm_start", cfg.outputs.warm_start}}},
  };
}

json certificate_json(const Certificate& cert) {
  json checks = json::array();
  for (const auto& c : cert.checks)
    checks.push_back({{"name", c.name},
                      {"value", finite_or_null(c.value)},
                      {"threshold", finite_or_null(c.threshold)},
                      {"passed", c.passed},
                      {"required", c.required}});
  return {{"passed", cert.passed()}, {"df1", cert.df1}, {"df2", cert.df2}, {"checks", checks}};
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

std::string result_document(const RunConfig& config, double c, const SolverReport& report,
                            const Certificate& certificate, const MchfResult* mchf) {
  const int n = report.state.a.electrons;
  json doc;
  doc["schema"] = kResultSchema;
  doc["config"] = config_echo(config);
  doc["c"] = c;
  json r;
  r["energy"] = {{"total", report.energy.total},
                 {"shifted", report.energy.excess},
                 {"kinetic_rest", report.energy.kinetic_rest},
                 {"nuclear", report.energy.nuclear},
                 {"two_body", report.energy.two_body},
                 {"rest", n * c * c}};
  r["ci_energy"] = report.ci_energy;
  r["ci_energy_shifted"] = report.ci_energy_excess;
  r["residual_df1"] = report.residual_df1;
  r["residual_df2"] = report.residual_df2;
  r["min_occ"] = report.min_occ;
  r["gamma"] = report.gamma_floor;
  r["gradient_plus"] = report.gradient_plus;
  r["gradient_a"] = report.gradient_a;
  r["inner_gradient"] = report.inner_gradient;
  r["inner_norm_c"] = report.inner_norm_c;
  r["iterations"] = report.iterations;
  r["converged"] = report.converged;
  r["lambda"] = {{"asymmetry", report.lambda.asymmetry},
                 {"band", report.lambda.band},
                 {"window_upper", real_vector(report.lambda.window_upper)},
                 {"window_lower", real_vector(report.lambda.window_lower)},
                 {"matrix", complex_matrix(report.lambda.lambda)}};
  r["history"] = report.history;
  doc["report"] = std::move(r);
  doc["certificate"] = certificate_json(certificate);
  if (mchf) {
    doc["reference"] = {{"mchf_energy", mchf->energy},
                        {"mchf_min_occ", mchf->min_occ},
                        {"mchf_residual", mchf->residual},
                        {"gap_to_reference", report.energy.excess - mchf->energy}};
  }
  doc["state"] = {{"orbitals", report.state.a.orbitals},
                  {"electrons", report.state.a.electrons},
                  {"components", report.state.psi_plus.components},
                  {"rows", report.state.psi_plus.coeffs.rows()},
                  {"a", complex_vector(report.state.a.coeffs)},
                  {"psi_plus", complex_matrix(report.state.psi_plus.coeffs)},
                  {"psi_minus", complex_matrix(report.state.psi_minus.coeffs)}};
  return doc.dump(2) + "\n";
}

std::string sweep_table(const std::vector<SweepRecord>& records) {
  std::ostringstream out;
  out << "c,energy_shifted,gap_to_IK,small_component_norm,kinetic_balance_residual,lambda_band,min_occ,"
         "residual_df1,residual_df2,certified,error\n";
  for (const auto& r : records) {
    std::string error = r.error;
    for (char& ch : error)
      if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    out << format_number(r.c) << ',' << format_number(r.energy_shifted) << ',' << format_number(r.gap_to_IK)
        << ',' << format_number(r.small_component_norm) << ',' << format_number(r.kinetic_balance_residual)
        << ',' << format_number(r.lambda_band) << ',' << format_number(r.min_occ) << ','
        << format_number(r.residual_df1) << ',' << format_number(r.residual_df2) << ','
        << (r.certified ? 1 : 0) << ',' << error << '\n';
  }
  return out.str();
}

std::string sweep_summary_document(const RunConfig& config, const SweepResult& sweep,
                                   const SweepSummary& summary, const PersistenceReport& persistence) {
  auto fit = [](const LoglogFit& f) { return json{{"slope", f.slope}, {"intercept", f.intercept}}; };
  json doc;
  doc["schema"] = kSweepSchema;
  doc["config"] = config_echo(config);
  doc["reference_energy"] = sweep.reference_energy;
  doc["mchf_min_occ"] = sweep.mchf.min_occ;
  doc["gamma"] = sweep.gamma_floor;
  doc["certified"] = summary.certified;
  doc["points"] = sweep.records.size();
  doc["fits"] = {{"gap_to_IK", fit(summary.gap_fit)},
                 {"small_component_norm", fit(summary.small_component_fit)},
                 {"kinetic_balance_residual", fit(summary.kinetic_balance_fit)}};
  doc["gap_strictly_decreasing"] = summary.gap_strictly_decreasing;
  doc["gap_monotone_tail"] = summary.gap_monotone_tail;
  doc["small_component_band"] = finite_or_null(summary.small_component_band);
  doc["kinetic_balance_band"] = finite_or_null(summary.kinetic_balance_band);
  doc["lambda_band_growth"] = summary.lambda_band_growth;
  doc["occupation_persistence"] = {{"all_above", persistence.all_above},
                                   {"tail_above", persistence.tail_above},
                                   {"smallest_margin", finite_or_null(persistence.smallest_margin)},
                                   {"violations", persistence.violations}};
  json records = json::array();
  for (const auto& r : sweep.records)
    records.push_back({{"c", r.c},
                       {"energy_shifted", finite_or_null(r.energy_shifted)},
                       {"gap_to_IK", finite_or_null(r.gap_to_IK)},
                       {"certified", r.certified},
                       {"error", r.error}});
  doc["records"] = records;
  return doc.dump(2) + "\n";
}

SplitState parse_state(const std::string& document, const Hamiltonian& model) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("warm start: not a JSON document: ") + e.what());
  }
  if (!doc.contains("schema") || doc["schema"] != kResultSchema)
    throw ConfigError(std::string("warm start: expected schema ") + kResultSchema);
  try {
    const json& s = doc.at("state");
    const int k = s.at("orbitals").get<int>();
    const int n = s.at("electrons").get<int>();
    const Eigen::Index rows = s.at("rows").get<Eigen::Index>();
    if (rows != model.basis().dimension(4) || s.at("components").get<int>() != 4)
      throw ConfigError("warm start: state was computed on a different basis");
    SplitState state;
    state.a.orbitals = k;
    state.a.electrons = n;
    const json& a = s.at("a");
    state.a.coeffs.resize(static_cast<Eigen::Index>(a.size()));
    if (state.a.coeffs.size() != binomial(k, n)) throw ConfigError("warm start: CI vector has wrong length");
    for (std::size_t i = 0; i < a.size(); ++i)
      state.a.coeffs(static_cast<Eigen::Index>(i)) = Complex(a[i][0].get<double>(), a[i][1].get<double>());
    state.psi_plus = {read_matrix(s.at("psi_plus"), rows, k, "psi_plus"), 4};
    state.psi_minus = {read_matrix(s.at("psi_minus"), rows, k, "psi_minus"), 4};
    const double c = doc.at("c").get<double>();
    if (c != model.basis().light_speed()) return transfer_state(state, model);
    return state;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("warm start: malformed state: ") + e.what());
  }
}

SplitState load_state(const std::string& path, const Hamiltonian& model) {
  std::ifstream in(path);
  if (!in) throw ConfigError("outputs.warm_start: cannot open file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_state(buffer.str(), model);
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("outputs: cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("outputs: write failed for '" + path + "'");
}

}  // namespace mcdf
