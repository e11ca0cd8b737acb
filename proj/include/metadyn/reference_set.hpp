#pragma once

#include <cstddef>
#include <vector>

#include "metadyn/geometry.hpp"

namespace metadyn {

/// Landmark structures with one scalar property each and the softmax
/// sharpness lambda (nm^-2) of the property-map variable.
struct ReferenceSet {
  std::vector<StructureD> structures;
  std::vector<double> properties;
  double lambda = 100.0;

  std::size_t size() const { return structures.size(); }
  Eigen::Index atom_count() const { return structures.empty() ? 0 : structures.front().size(); }
};

/// Throws InvalidStructure/ConfigError unless the set is non-empty, every
/// structure is centered with the same atom count and weights, there is one
/// property per structure and lambda is positive.
void validate(const ReferenceSet& ref);

}  // namespace metadyn
