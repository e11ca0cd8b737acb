#include "metadyn/colvar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "metadyn/errors.hpp"

namespace metadyn {

void validate(const ReferenceSet& ref) {
  if (ref.structures.empty()) throw ConfigError("reference set is empty");
  if (ref.properties.size() != ref.structures.size())
    throw ConfigError("reference set needs one property per structure");
  if (!(ref.lambda > 0.0) || !std::isfinite(ref.lambda)) throw ConfigError("lambda must be positive");
  const StructureD& first = ref.structures.front();
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const StructureD& s = ref.structures[i];
    const std::string which = "reference structure " + std::to_string(i);
    if (s.size() != first.size())
      throw InvalidStructure(which + " has " + std::to_string(s.size()) + " atoms, expected " +
                             std::to_string(first.size()));
    if (s.disp != first.disp || s.align != first.align)
      throw InvalidStructure(which + " has weights that differ from reference structure 0");
    if (!is_centered(s)) throw InvalidStructure(which + " is not centered");
    if (!std::isfinite(ref.properties[i])) throw ConfigError(which + " has a non-finite property");
  }
}

CVResult property_map(std::span<const IndexedDistance> distances, const ReferenceSet& ref) {
  if (distances.empty()) throw Error("property map needs at least one distance");
  double d_min = std::numeric_limits<double>::infinity();
  for (const auto& d : distances) {
    if (!std::isfinite(d.result.value))
      throw Error("non-finite distance to reference " + std::to_string(d.index));
    d_min = std::min(d_min, d.result.value);
  }

  std::vector<double> weight(distances.size());
  double z = 0.0;
  double qz = 0.0;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    weight[i] = std::exp(-ref.lambda * (distances[i].result.value - d_min));
    z += weight[i];
    qz += ref.properties.at(static_cast<std::size_t>(distances[i].index)) * weight[i];
  }

  CVResult out;
  out.value = qz / z;
  out.grad = Coords<double>::Zero(3, distances.front().result.grad.cols());
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const double q = ref.properties[static_cast<std::size_t>(distances[i].index)];
    const double ds_dd = -ref.lambda * (weight[i] / z) * (q - out.value);
    out.grad += ds_dd * distances[i].result.grad;
  }
  return out;
}

}  // namespace metadyn
