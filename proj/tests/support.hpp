#pragma once

// Glue between the oracle's plain descriptions and the library types.

#include <vector>

#include "mcdf/coulomb.hpp"
#include "oracle/oracle.hpp"

namespace testing_support {

inline mcdf::BasisDescriptor basis_of(const oracle::Box& box) {
  return mcdf::BasisDescriptor(box.length, box.mode_bound, box.c);
}

inline mcdf::NuclearConfiguration nuclei_of(const std::vector<oracle::PointCharge>& charges) {
  mcdf::NuclearConfiguration nuc;
  for (const auto& q : charges) {
    nuc.nuclei.push_back({q.position, q.charge});
    nuc.smearing = q.smearing;
  }
  return nuc;
}

inline std::vector<oracle::PointCharge> centred(const oracle::Box& box, double charge, double smearing = 0.0) {
  const double h = 0.5 * box.length;
  return {{{h, h, h}, charge, smearing}};
}

inline mcdf::CIVector ci_of(const oracle::Vec& a, int orbitals, int electrons) {
  mcdf::CIVector v;
  v.orbitals = orbitals;
  v.electrons = electrons;
  v.coeffs = a;
  return v;
}

}  // namespace testing_support
