#include "mcdf/coulomb.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numbers>
#include <string>

#include "mcdf/parallel.hpp"

namespace mcdf {

double NuclearConfiguration::total_charge() const {
  double z = 0.0;
  for (const auto& n : nuclei) z += n.charge;
  return z;
}

void NuclearConfiguration::validate(const BasisDescriptor& basis) const {
  const double l = basis.box_length();
  for (std::size_t i = 0; i < nuclei.size(); ++i) {
    const auto& n = nuclei[i];
    if (!(n.charge > 0.0)) {
      throw DimensionError("nucleus " + std::to_string(i) + ": charge must be positive");
    }
    for (double x : n.position) {
      if (!(x >= 0.0 && x < l)) {
        throw DimensionError("nucleus " + std::to_string(i) + ": position outside [0, L)");
      }
    }
  }
  if (smearing < 0.0) throw DimensionError("nuclear smearing must be nonnegative");
}

Hamiltonian::Hamiltonian(BasisDescriptor basis, NuclearConfiguration nuclei, KineticModel kinetic,
                         CoulombOptions options)
    : basis_(basis),
      nuclei_(std::move(nuclei)),
      kinetic_(kinetic),
      options_(options),
      grid_(basis_),
      kernel_(basis_.mode_count()),
      potential_(RealVec::Zero(basis_.mode_count())) {
  nuclei_.validate(basis_);
  const double four_pi = 4.0 * std::numbers::pi;
  for (int mode = 0; mode < basis_.mode_count(); ++mode) {
    const double k2 = basis_.wavevector_norm2(mode);
    kernel_(mode) = k2 > 0.0 ? four_pi / k2 : 0.0;
  }
  if (nuclei_.nuclei.empty()) return;
  // V_hat(k) = -sum_i Z_i v_hat(k) exp(-s^2 k^2 / 2) exp(-i k.z_i)
  Vec spectrum = Vec::Zero(basis_.mode_count());
  const double s2 = nuclei_.smearing * nuclei_.smearing;
  for (int mode = 0; mode < basis_.mode_count(); ++mode) {
    if (kernel_(mode) == 0.0) continue;
    const auto k = basis_.wavevector(mode);
    const double smear = std::exp(-0.5 * s2 * basis_.wavevector_norm2(mode));
    Complex sum = 0.0;
    for (const auto& n : nuclei_.nuclei) {
      const double phase = k[0] * n.position[0] + k[1] * n.position[1] + k[2] * n.position[2];
      sum -= n.charge * std::polar(1.0, -phase);
    }
    spectrum(mode) = kernel_(mode) * smear * sum;
  }
  potential_ = grid_.synthesize(spectrum).real();
}

double Hamiltonian::rest_energy() const {
  if (kinetic_ == KineticModel::schrodinger) return 0.0;
  const double c = basis_.light_speed();
  return c * c;
}

Hamiltonian Hamiltonian::with_light_speed(double c) const {
  return Hamiltonian(basis_.with_light_speed(c), nuclei_, kinetic_, options_);
}

Mat Hamiltonian::apply_kinetic_excess(const Mat& coeffs) const {
  if (kinetic_ == KineticModel::dirac) return apply_dirac_columns(coeffs, basis_, rest_energy());
  if (coeffs.rows() != basis_.dimension(2)) {
    throw DimensionError("apply_kinetic: expected 2-component coefficients");
  }
  Mat out(coeffs.rows(), coeffs.cols());
  for (int mode = 0; mode < basis_.mode_count(); ++mode) {
    out.middleRows<2>(2 * mode) = (0.5 * basis_.wavevector_norm2(mode)) * coeffs.middleRows<2>(2 * mode);
  }
  return out;
}

Mat Hamiltonian::apply_kinetic(const Mat& coeffs) const {
  if (kinetic_ == KineticModel::dirac) return apply_dirac_columns(coeffs, basis_);
  return apply_kinetic_excess(coeffs);
}

Mat Hamiltonian::apply_nuclear(const Mat& coeffs) const {
  if (coeffs.rows() != basis_.dimension(components())) {
    throw DimensionError("nuclear_potential_apply: dimension mismatch");
  }
  if (nuclei_.nuclei.empty()) return Mat::Zero(coeffs.rows(), coeffs.cols());
  return grid_.apply_multiplier(potential_.cast<Complex>(), coeffs, components());
}

Mat Hamiltonian::apply_one_body_excess(const Mat& coeffs) const {
  return apply_kinetic_excess(coeffs) + apply_nuclear(coeffs);
}

Vec Hamiltonian::pair_density(const Mat& values, Eigen::Index k, Eigen::Index l) const {
  const int c = components();
  Vec rho = Vec::Zero(values.rows());
  for (int s = 0; s < c; ++s) {
    rho += values.col(k * c + s).conjugate().cwiseProduct(values.col(l * c + s));
  }
  return rho;
}

Vec Hamiltonian::coulomb_convolve(const Vec& density) const {
  Vec spectrum = grid_.spectrum(density);
  for (int mode = 0; mode < basis_.mode_count(); ++mode) spectrum(mode) *= kernel_(mode);
  return grid_.synthesize(spectrum);
}

void Hamiltonian::require_compatible(const OrbitalSet& orbitals, const char* where) const {
  if (orbitals.components != components() || orbitals.coeffs.rows() != basis_.dimension(components())) {
    throw DimensionError(std::string(where) + ": orbitals do not match the model basis");
  }
}

Mat nuclear_potential_apply(const Mat& coeffs, const Hamiltonian& model) {
  return model.apply_nuclear(coeffs);
}

SpinorField nuclear_potential_apply(const SpinorField& field, const Hamiltonian& model) {
  if (model.components() != 4) throw DimensionError("nuclear_potential_apply: model is not 4-component");
  return SpinorField{model.apply_nuclear(field.coeffs)};
}

Vec pair_density(const OrbitalSet& orbitals, Eigen::Index k, Eigen::Index l,
                 const Hamiltonian& model) {
  model.require_compatible(orbitals, "pair_density");
  if (k < 0 || l < 0 || k >= orbitals.size() || l >= orbitals.size()) {
    throw DimensionError("pair_density: orbital index out of range");
  }
  const Mat values = model.grid().to_values(orbitals.coeffs, orbitals.components);
  return model.pair_density(values, k, l);
}

Vec coulomb_convolve(const Vec& density, const Hamiltonian& model) {
  if (density.size() != model.grid().points()) throw DimensionError("coulomb_convolve: size mismatch");
  return model.coulomb_convolve(density);
}

PairFields::PairFields(const OrbitalSet& orbitals, const Hamiltonian& model)
    : count_(orbitals.size()), weight_(model.grid().weight()) {
  model.require_compatible(orbitals, "PairFields");
  values_ = model.grid().to_values(orbitals.coeffs, orbitals.components);
  const std::size_t n = static_cast<std::size_t>(count_ * count_);
  density_.resize(n);
  potential_.resize(n);
  // Upper triangle in parallel; the lower one follows by conjugation.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index k = 0; k < count_; ++k)
    for (Eigen::Index l = k; l < count_; ++l) pairs.emplace_back(k, l);
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [k, l] = pairs[p];
    density_[index(k, l)] = model.pair_density(values_, k, l);
    potential_[index(k, l)] = model.coulomb_convolve(density_[index(k, l)]);
  });
  for (const auto& [k, l] : pairs) {
    if (k == l) continue;
    density_[index(l, k)] = density_[index(k, l)].conjugate();
    potential_[index(l, k)] = potential_[index(k, l)].conjugate();
  }
}

Complex PairFields::integral(Eigen::Index i, Eigen::Index j, Eigen::Index k, Eigen::Index l) const {
  return weight_ * (density(i, j).cwiseProduct(potential(k, l))).sum();
}

MeanFieldMatrix w_matrix(const Mat& pair, const PairFields& fields) {
  const Eigen::Index k = fields.orbitals();
  if (pair.rows() != k * k || pair.cols() != k * k) throw DimensionError("w_matrix: pair matrix shape");
  const Eigen::Index points = fields.values().rows();
  MeanFieldMatrix w{k, std::vector<Vec>(static_cast<std::size_t>(k * k), Vec::Zero(points))};
  parallel_for(static_cast<std::size_t>(k * k), [&](std::size_t flat) {
    const Eigen::Index i = static_cast<Eigen::Index>(flat) / k;
    const Eigen::Index j = static_cast<Eigen::Index>(flat) % k;
    Vec& out = w.entries[flat];
    for (Eigen::Index p = 0; p < k; ++p) {
      for (Eigen::Index q = 0; q < k; ++q) {
        const Complex d = pair(i * k + p, j * k + q);
        if (d == Complex(0.0)) continue;
        out += (0.5 * d) * fields.potential(p, q);
      }
    }
  });
  return w;
}

MeanFieldMatrix w_matrix(const CIVector& a, const OrbitalSet& orbitals, const Hamiltonian& model) {
  if (orbitals.size() != a.orbitals) throw DimensionError("w_matrix: K mismatch between a and Psi");
  return w_matrix(pair_matrix(a), PairFields(orbitals, model));
}

Mat apply_mean_field(const MeanFieldMatrix& w, const Mat& phi, const Hamiltonian& model) {
  if (phi.cols() != w.orbitals) throw DimensionError("apply_mean_field: orbital count mismatch");
  const int c = model.components();
  const Grid& grid = model.grid();
  const Mat values = grid.to_values(phi, c);
  Mat out = Mat::Zero(values.rows(), values.cols());
  for (Eigen::Index i = 0; i < w.orbitals; ++i) {
    for (Eigen::Index j = 0; j < w.orbitals; ++j) {
      const Vec& wij = w(i, j);
      for (int s = 0; s < c; ++s) out.col(i * c + s) += wij.cwiseProduct(values.col(j * c + s));
    }
  }
  return grid.from_values(out, c);
}

Mat fock_columns(const Mat& gamma, const MeanFieldMatrix& w, const Mat& phi,
                 const Hamiltonian& model, bool excess) {
  if (gamma.rows() != phi.cols()) throw DimensionError("fock_apply: Gamma and Phi disagree on K");
  const Mat h = excess ? model.apply_one_body_excess(phi)
                       : Mat(model.apply_kinetic(phi) + model.apply_nuclear(phi));
  Mat out = h * gamma.transpose();
  if (w.orbitals > 0) out += 2.0 * apply_mean_field(w, phi, model);
  return out;
}

OrbitalSet fock_apply(const CIVector& a, const OrbitalSet& psi, const OrbitalSet& phi,
                      const Hamiltonian& model) {
  model.require_compatible(psi, "fock_apply");
  model.require_compatible(phi, "fock_apply");
  if (psi.size() != a.orbitals || phi.size() != a.orbitals) {
    throw DimensionError("fock_apply: K mismatch");
  }
  const MeanFieldMatrix w = w_matrix(a, psi, model);
  return OrbitalSet{fock_columns(gamma_matrix(a), w, phi.coeffs, model, false), psi.components};
}

namespace {

// Sign of moving orbital `from` out of and `to` into a sorted occupation list:
// a_to^dagger a_from |det> = sign |result>.
int excitation_sign(Determinant& det, int from, int to) {
  int sign = 1;
  auto it = std::find(det.begin(), det.end(), from);
  if ((it - det.begin()) % 2 == 1) sign = -sign;
  det.erase(it);
  auto pos = std::lower_bound(det.begin(), det.end(), to);
  if ((pos - det.begin()) % 2 == 1) sign = -sign;
  det.insert(pos, to);
  return sign;
}

}  // namespace

Mat slater_condon(const DeterminantSpace& space, const Mat& one_body, const PairFields& pairs,
                  double two_body_scale) {
  const Eigen::Index dim = space.size();
  Mat h = Mat::Zero(dim, dim);
  auto two = [&](int p, int q, int r, int s) { return two_body_scale * pairs.integral(p, q, r, s); };

  parallel_for(static_cast<std::size_t>(dim), [&](std::size_t col) {
    const Determinant& ket = space[static_cast<Eigen::Index>(col)];
    for (Eigen::Index row = 0; row <= static_cast<Eigen::Index>(col); ++row) {
      const Determinant& bra = space[row];
      std::vector<int> holes, particles;  // in ket not bra; in bra not ket
      std::set_difference(ket.begin(), ket.end(), bra.begin(), bra.end(), std::back_inserter(holes));
      if (holes.size() > 2) continue;
      std::set_difference(bra.begin(), bra.end(), ket.begin(), ket.end(), std::back_inserter(particles));
      Complex value = 0.0;
      if (holes.empty()) {
        for (int i : ket) {
          value += one_body(i, i);
          for (int j : ket) value += 0.5 * (two(i, i, j, j) - two(i, j, j, i));
        }
      } else if (holes.size() == 1) {
        const int q = holes[0], p = particles[0];
        Determinant work = ket;
        const int sign = excitation_sign(work, q, p);
        value = one_body(p, q);
        for (int j : ket) {
          if (j == q) continue;
          value += two(p, q, j, j) - two(p, j, j, q);
        }
        value *= double(sign);
      } else {
        // a_p^+ a_r^+ a_s a_q |ket> with q < s holes, p < r particles
        const int q = holes[0], s = holes[1], p = particles[0], r = particles[1];
        Determinant work = ket;
        int sign = excitation_sign(work, s, r);
        sign *= excitation_sign(work, q, p);
        value = double(sign) * (two(p, q, r, s) - two(p, s, r, q));
      }
      h(row, static_cast<Eigen::Index>(col)) = value;
    }
  });
  for (Eigen::Index col = 0; col < dim; ++col) {
    h(col, col) = Complex(h(col, col).real(), 0.0);
    for (Eigen::Index row = 0; row < col; ++row) h(col, row) = std::conj(h(row, col));
  }
  return h;
}

void require_orthonormal(const OrbitalSet& orbitals, double tolerance, const char* where) {
  const Eigen::Index k = orbitals.size();
  const double defect = k == 0 ? 0.0 : (orbitals.gram() - Mat::Identity(k, k)).cwiseAbs().maxCoeff();
  if (defect > tolerance) {
    throw OrthonormalityError(std::string(where) + ": orbitals are not orthonormal (Gram defect " +
                              std::to_string(defect) + ")");
  }
}

Mat ci_hamiltonian_excess(const OrbitalSet& orbitals, int electrons, const Hamiltonian& model) {
  model.require_compatible(orbitals, "ci_hamiltonian");
  require_orthonormal(orbitals, 1e-8, "ci_hamiltonian");
  const DeterminantSpace space(static_cast<int>(orbitals.size()), electrons);
  const Mat one_body = orbitals.coeffs.adjoint() * model.apply_one_body_excess(orbitals.coeffs);
  const PairFields pairs(orbitals, model);
  return slater_condon(space, one_body, pairs, model.options().slater_condon_kernel_scale);
}

CIMatrix ci_hamiltonian(const OrbitalSet& orbitals, int electrons, const Hamiltonian& model) {
  CIMatrix out;
  out.rest_energy = electrons * model.rest_energy();
  out.matrix = ci_hamiltonian_excess(orbitals, electrons, model);
  out.matrix.diagonal().array() += out.rest_energy;
  return out;
}

}  // namespace mcdf
