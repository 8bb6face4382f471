#include "mcdf/ci.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <random>
#include <string>

namespace mcdf {

namespace {

void require_shape(int orbitals, int electrons) {
  if (electrons < 1 || orbitals < 1 || electrons > orbitals) {
    throw DimensionError("determinant space requires 1 <= N <= K, got K=" +
                         std::to_string(orbitals) + " N=" + std::to_string(electrons));
  }
}

std::int64_t int_pow(int base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

int permutation_sign(const std::vector<int>& perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

// Applies `op` to every (flat alpha index, sign) of the N! orderings of det.
template <class Op>
void for_each_ordering(const Determinant& det, int orbitals, Op&& op) {
  std::vector<int> perm(det.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::int64_t flat = 0;
    for (int p : perm) flat = flat * orbitals + det[static_cast<std::size_t>(p)];
    op(flat, permutation_sign(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
}

// Adjoint of the linear map a -> alpha.
Vec alpha_adjoint(const Vec& tensor, const DeterminantSpace& space) {
  const double scale = 1.0 / std::sqrt(factorial(space.electrons()));
  Vec out = Vec::Zero(space.size());
  for (Eigen::Index i = 0; i < space.size(); ++i) {
    Complex sum = 0.0;
    for_each_ordering(space[i], space.orbitals(),
                      [&](std::int64_t flat, int sign) { sum += double(sign) * tensor(flat); });
    out(i) = scale * sum;
  }
  return out;
}

}  // namespace

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<Determinant> enumerate_determinants(int orbitals, int electrons) {
  require_shape(orbitals, electrons);
  std::vector<Determinant> out;
  out.reserve(static_cast<std::size_t>(binomial(orbitals, electrons)));
  Determinant det(static_cast<std::size_t>(electrons));
  std::iota(det.begin(), det.end(), 0);
  while (true) {
    out.push_back(det);
    int pos = electrons - 1;
    while (pos >= 0 && det[pos] == orbitals - electrons + pos) --pos;
    if (pos < 0) break;
    ++det[pos];
    for (int q = pos + 1; q < electrons; ++q) det[q] = det[q - 1] + 1;
  }
  return out;
}

DeterminantSpace::DeterminantSpace(int orbitals, int electrons)
    : orbitals_(orbitals), electrons_(electrons), dets_(enumerate_determinants(orbitals, electrons)) {
  for (std::size_t i = 0; i < dets_.size(); ++i) lookup_.emplace(dets_[i], static_cast<Eigen::Index>(i));
}

Eigen::Index DeterminantSpace::find(const Determinant& det) const {
  const auto it = lookup_.find(det);
  return it == lookup_.end() ? -1 : it->second;
}

CIVector CIVector::basis_vector(int orbitals, int electrons, Eigen::Index index) {
  CIVector a{orbitals, electrons, Vec::Zero(binomial(orbitals, electrons))};
  a.coeffs(index) = 1.0;
  return a;
}

CIVector CIVector::normalized() const {
  CIVector out = *this;
  out.coeffs.normalize();
  return out;
}

std::int64_t AlphaTensor::flat_index(const std::vector<int>& indices) const {
  std::int64_t flat = 0;
  for (int i : indices) flat = flat * orbitals + i;
  return flat;
}

Complex AlphaTensor::operator()(const std::vector<int>& indices) const {
  return data(flat_index(indices));
}

AlphaTensor expand_alpha(const CIVector& a) {
  require_shape(a.orbitals, a.electrons);
  const DeterminantSpace space(a.orbitals, a.electrons);
  if (a.coeffs.size() != space.size()) throw DimensionError("expand_alpha: coefficient count");
  AlphaTensor alpha{a.orbitals, a.electrons, Vec::Zero(int_pow(a.orbitals, a.electrons))};
  const double scale = 1.0 / std::sqrt(factorial(a.electrons));
  for (Eigen::Index i = 0; i < space.size(); ++i) {
    const Complex value = scale * a.coeffs(i);
    for_each_ordering(space[i], a.orbitals,
                      [&](std::int64_t flat, int sign) { alpha.data(flat) = double(sign) * value; });
  }
  return alpha;
}

CIVector contract_alpha(const AlphaTensor& alpha) {
  const DeterminantSpace space(alpha.orbitals, alpha.electrons);
  const double scale = std::sqrt(factorial(alpha.electrons));
  CIVector a{alpha.orbitals, alpha.electrons, Vec(space.size())};
  for (Eigen::Index i = 0; i < space.size(); ++i) a.coeffs(i) = scale * alpha(space[i]);
  return a;
}

Mat gamma_matrix(const CIVector& a) {
  const AlphaTensor alpha = expand_alpha(a);
  const Eigen::Index k = a.orbitals;
  const Eigen::Index rest = int_pow(a.orbitals, a.electrons - 1);
  const Eigen::Map<const Mat> b(alpha.data.data(), rest, k);
  Mat gamma = double(a.electrons) * (b.adjoint() * b);
  return hermitian_part(gamma);
}

Mat pair_matrix(const CIVector& a) {
  const Eigen::Index k = a.orbitals;
  if (a.electrons < 2) return Mat::Zero(k * k, k * k);
  const AlphaTensor alpha = expand_alpha(a);
  const Eigen::Index rest = int_pow(a.orbitals, a.electrons - 2);
  const Eigen::Map<const Mat> b(alpha.data.data(), rest, k * k);
  const double n = a.electrons;
  return n * (n - 1.0) * (b.adjoint() * b);
}

HermitianEigen hermitian_eigen(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(hermitian_part(m));
  if (solver.info() != Eigen::Success) throw Error("hermitian_eigen: decomposition failed");
  HermitianEigen out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < out.vectors.rows(); ++i) {
      const double mag = std::abs(out.vectors(i, j));
      if (mag > best + 1e-12) {
        best = mag;
        pivot = i;
      }
    }
    if (best > 0.0) {
      const Complex phase = std::conj(out.vectors(pivot, j)) / best;
      out.vectors.col(j) *= phase;
      out.vectors(pivot, j) = best;
    }
  }
  return out;
}

RealVec occupation_numbers(const CIVector& a) { return hermitian_eigen(gamma_matrix(a)).values; }

double min_occupation(const CIVector& a) { return occupation_numbers(a)(0); }

namespace {

void require_unitary(const Mat& u, int orbitals) {
  if (u.rows() != orbitals || u.cols() != orbitals) {
    throw DimensionError("group action: unitary must be K x K");
  }
  const double defect = (u.adjoint() * u - Mat::Identity(orbitals, orbitals)).cwiseAbs().maxCoeff();
  if (defect > 1e-10) {
    throw UnitarityError("group action: matrix is not unitary (defect " + std::to_string(defect) + ")");
  }
}

}  // namespace

CIVector transform_ci(const Mat& unitary, const CIVector& a) {
  require_unitary(unitary, a.orbitals);
  AlphaTensor alpha = expand_alpha(a);
  const Mat conj_u = unitary.conjugate();
  const std::int64_t k = a.orbitals;
  Vec next(alpha.data.size());
  for (int axis = 0; axis < a.electrons; ++axis) {
    const std::int64_t inner = int_pow(a.orbitals, a.electrons - axis - 1);
    const std::int64_t outer = int_pow(a.orbitals, axis);
    for (std::int64_t o = 0; o < outer; ++o) {
      for (std::int64_t r = 0; r < inner; ++r) {
        for (std::int64_t i = 0; i < k; ++i) {
          Complex sum = 0.0;
          for (std::int64_t j = 0; j < k; ++j) sum += conj_u(i, j) * alpha.data((o * k + j) * inner + r);
          next((o * k + i) * inner + r) = sum;
        }
      }
    }
    alpha.data.swap(next);
  }
  return contract_alpha(alpha);
}

OrbitalSet transform_orbitals(const Mat& unitary, const OrbitalSet& orbitals) {
  require_unitary(unitary, static_cast<int>(orbitals.size()));
  return OrbitalSet{orbitals.coeffs * unitary.transpose(), orbitals.components};
}

std::pair<CIVector, OrbitalSet> group_action(const Mat& unitary, const CIVector& a,
                                             const OrbitalSet& orbitals) {
  if (orbitals.size() != a.orbitals) throw DimensionError("group_action: K mismatch");
  return {transform_ci(unitary, a), transform_orbitals(unitary, orbitals)};
}

namespace {

// Minimizes |Gamma_a - (N/K) I|_F^2 on the unit sphere by gradient descent.
CIVector optimize_uniform(const DeterminantSpace& space, std::uint64_t seed) {
  const int k = space.orbitals();
  const int n = space.electrons();
  const double target = double(n) / k;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  CIVector a{k, n, Vec(space.size())};
  for (Eigen::Index i = 0; i < a.coeffs.size(); ++i) a.coeffs(i) = Complex(normal(rng), normal(rng));
  a.coeffs.normalize();

  auto objective = [&](const CIVector& x) {
    return (gamma_matrix(x) - target * Mat::Identity(k, k)).squaredNorm();
  };
  double f = objective(a);
  double step = 0.1;
  const Eigen::Index rest = int_pow(k, n - 1);
  for (int iter = 0; iter < 4000 && f > 1e-26; ++iter) {
    const AlphaTensor alpha = expand_alpha(a);
    const Mat r = gamma_matrix(a) - target * Mat::Identity(k, k);
    const Eigen::Map<const Mat> b(alpha.data.data(), rest, k);
    // d f / d conj(alpha_{p,r}) = 2N sum_j R_jp alpha_{j,r}
    const Mat grad_alpha = 2.0 * n * (b * r);
    const Vec flat = Eigen::Map<const Vec>(grad_alpha.data(), grad_alpha.size());
    Vec grad = 2.0 * alpha_adjoint(flat, space);
    grad -= a.coeffs * a.coeffs.dot(grad).real();
    const double gnorm2 = grad.squaredNorm();
    if (gnorm2 < 1e-28) break;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      CIVector trial{k, n, (a.coeffs - step * grad).normalized()};
      const double ft = objective(trial);
      if (ft <= f - 1e-4 * step * gnorm2) {
        a = trial;
        f = ft;
        step *= 2.0;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return a;
}

}  // namespace

CIVector uniform_occupation_vector(int orbitals, int electrons) {
  require_shape(orbitals, electrons);
  static std::mutex cache_mutex;
  static std::map<std::pair<int, int>, CIVector> cache;
  {
    std::lock_guard lock(cache_mutex);
    const auto it = cache.find({orbitals, electrons});
    if (it != cache.end()) return it->second;
  }
  const DeterminantSpace space(orbitals, electrons);
  CIVector best;
  double best_floor = -1.0;
  if (space.size() == 1) {
    best = CIVector::basis_vector(orbitals, electrons, 0);
  } else {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      CIVector candidate = optimize_uniform(space, 0x9e3779b97f4a7c15ULL * seed);
      const double floor = min_occupation(candidate);
      if (floor > best_floor + 1e-12) {
        best_floor = floor;
        best = candidate;
      }
    }
  }
  std::lock_guard lock(cache_mutex);
  cache.emplace(std::make_pair(orbitals, electrons), best);
  return best;
}

CIVector retract_to_s_gamma(const CIVector& a, double gamma_floor) {
  const double mean = double(a.electrons) / a.orbitals;
  if (gamma_floor > mean) {
    throw InfeasibleGammaError("occupation floor " + std::to_string(gamma_floor) +
                               " exceeds N/K = " + std::to_string(mean) +
                               " (K occupations in [0,1] summing to N have mean N/K)");
  }
  const CIVector start = a.normalized();
  if (gamma_floor <= 0.0 || min_occupation(start) >= gamma_floor) return start;

  CIVector uniform = uniform_occupation_vector(a.orbitals, a.electrons);
  const double reachable = min_occupation(uniform);
  if (reachable < gamma_floor) {
    throw InfeasibleGammaError("occupation floor " + std::to_string(gamma_floor) +
                               " is unattainable for K=" + std::to_string(a.orbitals) +
                               ", N=" + std::to_string(a.electrons) +
                               ": the largest reachable smallest occupation is " +
                               std::to_string(reachable));
  }
  const Complex overlap = uniform.coeffs.dot(start.coeffs);
  if (std::abs(overlap) > 0.0) uniform.coeffs *= overlap / std::abs(overlap);

  auto mix = [&](double t) {
    return CIVector{a.orbitals, a.electrons, ((1.0 - t) * start.coeffs + t * uniform.coeffs).normalized()};
  };
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (min_occupation(mix(mid)) >= gamma_floor) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return mix(hi);
}

}  // namespace mcdf
