#pragma once

#include <span>

#include "metadyn/msd.hpp"
#include "metadyn/reference_set.hpp"

namespace metadyn {

struct CVResult {
  double value = 0.0;
  Coords<double> grad;  // dS/dx_k
};

/// Property-map variable over the supplied (active) references:
/// S = sum q_i exp(-lambda D_i) / sum exp(-lambda D_i), evaluated with the
/// smallest distance factored out. The gradient follows from the quotient
/// rule, dS/dD_i = -lambda p_i (q_i - S) with p_i the softmax weight.
CVResult property_map(std::span<const IndexedDistance> distances, const ReferenceSet& ref);

}  // namespace metadyn
