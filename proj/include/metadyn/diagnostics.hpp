#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace metadyn {

struct CheckRow {
  std::string name;
  double measured = 0;   // worst value over the instances
  double tolerance = 0;  // pass when measured <= tolerance
  bool pass = false;
};

/// Finite-difference and orthonormality self-tests on seeded random
/// instances: rotation orthonormality, dR/dx, exact and cached-rotation
/// distance gradients, the property-map chain and the hill force.
std::vector<CheckRow> run_self_checks(std::uint64_t seed, int instances);

}  // namespace metadyn
