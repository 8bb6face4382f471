#include "mcdf/energy.hpp"

#include <string>

namespace mcdf {

namespace {

void require_shape(const CIVector& a, const Mat& psi, const Hamiltonian& model, const char* where) {
  if (psi.cols() != a.orbitals) {
    throw DimensionError(std::string(where) + ": a has K=" + std::to_string(a.orbitals) +
                         " but Psi has " + std::to_string(psi.cols()) + " orbitals");
  }
  if (psi.rows() != model.basis().dimension(model.components())) {
    throw DimensionError(std::string(where) + ": orbitals do not match the model basis");
  }
  if (a.coeffs.size() != binomial(a.orbitals, a.electrons)) {
    throw DimensionError(std::string(where) + ": CI vector length does not match C(K,N)");
  }
}

// Sum_ij Gamma_ij M_ij, real part.
double contract(const Mat& gamma, const Mat& m) { return (gamma.cwiseProduct(m)).sum().real(); }

}  // namespace

OrbitalEvaluation evaluate_orbitals(const CIVector& a, const Mat& psi, const Hamiltonian& model,
                                    bool with_gradient, Mat* ci_excess) {
  require_shape(a, psi, model, "energy");
  OrbitalEvaluation out;
  out.gamma = gamma_matrix(a);
  const int comps = model.components();
  const OrbitalSet orbitals{psi, comps};

  const Mat kin = model.apply_kinetic_excess(psi);
  const Mat nuc = model.apply_nuclear(psi);
  const Mat gram = psi.adjoint() * psi;
  const double kinetic_excess = contract(out.gamma, psi.adjoint() * kin);
  const double c2 = model.rest_energy();
  EnergyBreakdown& e = out.energy;
  e.nuclear = contract(out.gamma, psi.adjoint() * nuc);

  Mat w_psi = Mat::Zero(psi.rows(), psi.cols());
  if (a.electrons >= 2 || ci_excess) {
    const PairFields fields(orbitals, model);
    if (a.electrons >= 2) {
      const MeanFieldMatrix w = w_matrix(pair_matrix(a), fields);
      w_psi = apply_mean_field(w, psi, model);
    }
    if (ci_excess) {
      const DeterminantSpace space(a.orbitals, a.electrons);
      *ci_excess = slater_condon(space, psi.adjoint() * (kin + nuc), fields,
                                 model.options().slater_condon_kernel_scale);
    }
  }
  e.two_body = real_dot(psi, w_psi);

  const Eigen::Index k = psi.cols();
  const double gram_defect = contract(out.gamma, gram - Mat::Identity(k, k));
  const double n = a.electrons;
  e.kinetic_rest = kinetic_excess + c2 * (n + gram_defect);
  e.total = e.kinetic_rest + e.nuclear + e.two_body;
  e.excess = kinetic_excess + c2 * gram_defect + e.nuclear + e.two_body;
  out.value = kinetic_excess + e.nuclear + e.two_body;

  if (with_gradient) out.gradient = (kin + nuc) * out.gamma.transpose() + 2.0 * w_psi;
  return out;
}

EnergyBreakdown energy(const CIVector& a, const OrbitalSet& psi, const Hamiltonian& model) {
  model.require_compatible(psi, "energy");
  return evaluate_orbitals(a, psi.coeffs, model, false).energy;
}

double energy_mchf(const CIVector& a, const OrbitalSet& phi, const Hamiltonian& model) {
  if (model.kinetic() != KineticModel::schrodinger) {
    throw DimensionError("energy_mchf: model must use the nonrelativistic kinetic energy");
  }
  model.require_compatible(phi, "energy_mchf");
  require_orthonormal(phi, 1e-8, "energy_mchf");
  return evaluate_orbitals(a, phi.coeffs, model, false).energy.total;
}

Mat normalize_g(const Mat& psi) {
  const HermitianEigen eig = hermitian_eigen(psi.adjoint() * psi);
  const double smallest = eig.values.size() ? eig.values(0) : 1.0;
  if (!(smallest > 1e-12)) {
    throw DegeneracyError("normalize_g: Gram matrix is (near) singular, smallest eigenvalue " +
                              std::to_string(smallest),
                          smallest);
  }
  const RealVec inv_sqrt = eig.values.cwiseSqrt().cwiseInverse();
  return psi * (eig.vectors * inv_sqrt.asDiagonal() * eig.vectors.adjoint());
}

OrbitalSet normalize_g(const OrbitalSet& psi) { return OrbitalSet{normalize_g(psi.coeffs), psi.components}; }

Mat normalize_g_pullback(const Mat& phi, const Mat& gradient_at_image) {
  const HermitianEigen eig = hermitian_eigen(phi.adjoint() * phi);
  const Eigen::Index k = phi.cols();
  if (k == 0) return gradient_at_image;
  if (!(eig.values(0) > 1e-12)) {
    throw DegeneracyError("normalize_g: Gram matrix is (near) singular", eig.values(0));
  }
  const RealVec root = eig.values.cwiseSqrt();
  const Mat& q = eig.vectors;
  const Mat r = q * root.cwiseInverse().asDiagonal() * q.adjoint();
  // derivative of S^{-1/2}: divided difference of s^{-1/2} in the eigenbasis
  Mat b = q.adjoint() * (phi.adjoint() * gradient_at_image) * q;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) b(i, j) *= -1.0 / (root(i) * root(j) * (root(i) + root(j)));
  const Mat c = q * b * q.adjoint();
  return gradient_at_image * r + phi * (c + c.adjoint());
}

Vec gradient_a(const CIVector& a, const OrbitalSet& psi, const Hamiltonian& model) {
  require_shape(a, psi.coeffs, model, "gradient_a");
  const Mat h = ci_hamiltonian_excess(psi, a.electrons, model);
  const Vec ha = h * a.coeffs;
  const Complex e = a.coeffs.dot(ha);
  return 2.0 * (ha - e.real() * a.coeffs);
}

double ci_residual(const CIVector& a, const OrbitalSet& psi, const Hamiltonian& model) {
  return 0.5 * gradient_a(a, psi, model).norm();
}

OrbitalSet gradient_psi(const CIVector& a, const OrbitalSet& psi, const Hamiltonian& model) {
  model.require_compatible(psi, "gradient_psi");
  require_orthonormal(psi, 1e-8, "gradient_psi");
  const OrbitalEvaluation ev = evaluate_orbitals(a, psi.coeffs, model);
  const Mat& g = ev.gradient;
  return OrbitalSet{2.0 * (g - psi.coeffs * hermitian_part(psi.coeffs.adjoint() * g)), psi.components};
}

OrbitalResidual orbital_residual(const CIVector& a, const OrbitalSet& psi, const Hamiltonian& model) {
  model.require_compatible(psi, "orbital_residual");
  require_orthonormal(psi, 1e-8, "orbital_residual");
  const OrbitalEvaluation ev = evaluate_orbitals(a, psi.coeffs, model);
  const Mat overlap = psi.coeffs.adjoint() * ev.gradient;
  OrbitalResidual r;
  r.df1 = (ev.gradient - psi.coeffs * hermitian_part(overlap)).norm();
  r.asymmetry = (overlap - overlap.adjoint()).norm();
  return r;
}

MultiplierReport lambda_matrix(const CIVector& a, const OrbitalSet& psi, const Hamiltonian& model,
                               double k_hat) {
  model.require_compatible(psi, "lambda_matrix");
  require_orthonormal(psi, 1e-8, "lambda_matrix");
  const OrbitalEvaluation ev = evaluate_orbitals(a, psi.coeffs, model);
  // Lambda_ij = <psi_j, (H Psi)_i>  =>  Lambda = (Psi^* H Psi)^T; the c^2 Gamma part is exact.
  const Mat raw_shifted = (psi.coeffs.adjoint() * ev.gradient).transpose();
  MultiplierReport out;
  out.asymmetry = (raw_shifted - raw_shifted.adjoint()).norm();
  out.lambda_shifted = hermitian_part(raw_shifted);
  out.lambda = out.lambda_shifted + model.rest_energy() * ev.gamma;
  out.window_upper = hermitian_eigen(-out.lambda_shifted).values;
  out.window_lower = hermitian_eigen(out.lambda_shifted + k_hat * ev.gamma).values;
  const RealVec band = hermitian_eigen(out.lambda_shifted).values;
  out.band = band.size() ? band.cwiseAbs().maxCoeff() : 0.0;
  return out;
}

}  // namespace mcdf
