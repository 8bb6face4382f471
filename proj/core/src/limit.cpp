#include "mcdf/limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcdf {

LoglogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  LoglogFit fit;
  const std::size_t n = lx.size();
  if (n < 2) return fit;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

SweepRecord make_record(const SolverReport& report, const Hamiltonian& model, double reference_energy,
                        const CertificateTolerances& tolerances) {
  SweepRecord r;
  const double c = model.basis().light_speed();
  r.c = c;
  r.energy_shifted = report.energy.excess;
  r.gap_to_IK = r.energy_shifted - reference_energy;
  const Mat upper = upper_components(report.psi_full.coeffs);
  const Mat lower = lower_components(report.psi_full.coeffs);
  r.small_component_norm = lower.norm();
  r.kinetic_balance_residual = (lower - apply_pauli_gradient_columns(upper, model.basis()) / (2.0 * c)).norm();
  r.lambda_band = report.lambda.band;
  r.min_occ = report.min_occ;
  const Certificate cert = certify_solution(report, model, tolerances);
  r.residual_df1 = cert.df1;
  r.residual_df2 = cert.df2;
  r.certified = cert.passed();
  return r;
}

SweepResult sweep_c(const std::vector<double>& c_values, const LimitProblem& problem,
                    const SweepOptions& options) {
  for (std::size_t i = 1; i < c_values.size(); ++i) {
    if (!(c_values[i] > c_values[i - 1])) throw ConfigError("sweep: c values must be strictly increasing");
  }
  if (c_values.empty()) throw ConfigError("sweep: empty c list");

  SweepResult out;
  const BasisDescriptor nr_basis(problem.box_length, problem.mode_bound, 1.0);
  const Hamiltonian nr(nr_basis, problem.nuclei, KineticModel::schrodinger);
  out.mchf = minimize_mchf(problem.orbitals, problem.electrons, nr, options.mchf);
  out.reference_energy = out.mchf.energy;
  SolverConfig config = options.solver;
  if (options.auto_gamma) config.gamma_floor = options.gamma_fraction * occupation_floor(out.mchf);
  out.gamma_floor = config.gamma_floor;
  const CertificateTolerances tolerances = default_tolerances(config);

  const SplitState* previous = nullptr;
  for (double c : c_values) {
    const Hamiltonian model(BasisDescriptor(problem.box_length, problem.mode_bound, c), problem.nuclei,
                            KineticModel::dirac);
    const SplitState start = previous ? transfer_state(*previous, model) : seed_from_mchf(out.mchf, model);
    try {
      SolverReport report = outer_minimize(start, config, model);
      out.records.push_back(make_record(report, model, out.reference_energy, tolerances));
      out.reports.push_back(std::move(report));
      out.solved.push_back(true);
      previous = &out.reports.back().state;
    } catch (const Error& e) {
      SweepRecord r;
      r.c = c;
      r.error = e.what();
      r.energy_shifted = r.gap_to_IK = r.small_component_norm = r.kinetic_balance_residual =
          std::numeric_limits<double>::quiet_NaN();
      out.records.push_back(r);
      out.reports.emplace_back();
      out.solved.push_back(false);
      previous = nullptr;
    }
    // reports may reallocate: re-point at the last successful state
    previous = nullptr;
    for (std::size_t i = out.reports.size(); i-- > 0;) {
      if (out.solved[i]) {
        previous = &out.reports[i].state;
        break;
      }
    }
  }
  return out;
}

PersistenceReport occupation_persistence(const std::vector<SweepRecord>& sweep, double gamma) {
  PersistenceReport p;
  p.smallest_margin = std::numeric_limits<double>::infinity();
  std::vector<const SweepRecord*> valid;
  for (const auto& r : sweep)
    if (r.error.empty()) valid.push_back(&r);
  if (valid.empty()) {
    p.smallest_margin = 0.0;
    return p;
  }
  for (const auto* r : valid) {
    p.smallest_margin = std::min(p.smallest_margin, r->min_occ - gamma);
    if (!(r->min_occ > gamma)) ++p.violations;
  }
  p.all_above = p.violations == 0;
  p.tail_above = true;
  for (std::size_t i = valid.size() >= 2 ? valid.size() - 2 : 0; i < valid.size(); ++i) {
    if (!(valid[i]->min_occ > gamma)) p.tail_above = false;
  }
  return p;
}

SweepSummary summarize_sweep(const std::vector<SweepRecord>& records) {
  SweepSummary s;
  std::vector<double> c, gap, small, kb, band;
  for (const auto& r : records) {
    if (!r.error.empty()) continue;
    if (r.certified) ++s.certified;
    c.push_back(r.c);
    gap.push_back(std::abs(r.gap_to_IK));
    small.push_back(r.small_component_norm);
    kb.push_back(r.kinetic_balance_residual);
    band.push_back(r.lambda_band);
  }
  s.gap_fit = fit_loglog(c, gap);
  s.small_component_fit = fit_loglog(c, small);
  s.kinetic_balance_fit = fit_loglog(c, kb);
  s.gap_strictly_decreasing = c.size() >= 2;
  for (std::size_t i = 1; i < gap.size(); ++i)
    if (!(gap[i] < gap[i - 1])) s.gap_strictly_decreasing = false;

  auto band_of = [&](auto scaled) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double v = scaled(i);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return c.empty() || lo <= 0.0 ? std::numeric_limits<double>::infinity() : hi / lo;
  };
  s.small_component_band = band_of([&](std::size_t i) { return c[i] * small[i]; });
  s.kinetic_balance_band = band_of([&](std::size_t i) { return c[i] * c[i] * c[i] * kb[i]; });
  s.lambda_band_growth = 0.0;
  for (std::size_t i = 0; i < band.size(); ++i)
    if (band[0] > 0.0) s.lambda_band_growth = std::max(s.lambda_band_growth, band[i] / band[0]);

  s.gap_monotone_tail = true;
  std::vector<double> signed_gap;
  for (const auto& r : records)
    if (r.error.empty()) signed_gap.push_back(r.gap_to_IK);
  if (signed_gap.size() >= 3) {
    int direction = 0;
    for (std::size_t i = 2; i < signed_gap.size(); ++i) {
      const double d = signed_gap[i] - signed_gap[i - 1];
      const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
      if (direction == 0) direction = sign;
      else if (sign != 0 && sign != direction) s.gap_monotone_tail = false;
    }
  }
  return s;
}

}  // namespace mcdf
