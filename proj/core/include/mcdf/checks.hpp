#pragma once

// Cross-module invariant suite run by `mcdf check`: projector identities,
// occupation-matrix laws, energy-path consistency, a permutation-sum oracle
// for the Slater-Condon rules, finite-difference gradients and group-action
// invariance. Each family reports its worst observed deviation.

#include <cstdint>
#include <string>
#include <vector>

#include "mcdf/coulomb.hpp"

namespace mcdf {

enum class CheckScale { tiny, small, full };

CheckScale parse_check_scale(const std::string& name);

struct CheckOptions {
  CheckScale scale = CheckScale::small;
  std::uint64_t seed = 0;
  /// Passed to every Hamiltonian built by the suite (fault injection).
  CoulombOptions coulomb;
};

struct FamilyResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double threshold = 0.0;
  int samples = 0;
  std::string detail;
};

FamilyResult check_projectors(const CheckOptions& options);
FamilyResult check_occupation(const CheckOptions& options);
FamilyResult check_energy_paths(const CheckOptions& options);
FamilyResult check_slater_condon(const CheckOptions& options);
FamilyResult check_gradients(const CheckOptions& options);
FamilyResult check_group_action(const CheckOptions& options);

std::vector<FamilyResult> run_invariant_suite(const CheckOptions& options);

/// <D_I| H |D_J> by the signed sum over all permutations of product-state
/// matrix elements (no excitation-level case analysis). Cost O(N! N^2) per entry.
Mat permutation_sum_ci_matrix(const OrbitalSet& orbitals, int electrons, const Hamiltonian& model);

}  // namespace mcdf
