#include "metadyn/neighbourlist.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "metadyn/errors.hpp"

namespace metadyn {

NeighbourList::NeighbourList(int size, int stride) : enabled_(true), size_(size), stride_(stride) {
  if (size < 1) throw ConfigError("neighbour list size must be >= 1");
  if (stride < 1) throw ConfigError("neighbour list stride must be >= 1");
}

bool NeighbourList::update_due(std::int64_t step) const {
  return !initialized_ || step - last_update_step_ >= stride_;
}

void NeighbourList::update(std::int64_t step, std::span<const double> distances_all) {
  const auto n = static_cast<int>(distances_all.size());
  if (size_ > n)
    throw ConfigError("neighbour list size " + std::to_string(size_) + " exceeds reference count " +
                      std::to_string(n));
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return distances_all[a] < distances_all[b]; });
  indices_.assign(order.begin(), order.begin() + size_);
  std::sort(indices_.begin(), indices_.end());
  last_update_step_ = step;
  initialized_ = true;
}

bool NeighbourList::maybe_update(std::int64_t step, std::span<const double> distances_all) {
  if (!update_due(step)) return false;
  update(step, distances_all);
  return true;
}

std::vector<int> NeighbourList::active(int n_references) const {
  if (enabled_) return indices_;
  std::vector<int> all(static_cast<std::size_t>(n_references));
  std::iota(all.begin(), all.end(), 0);
  return all;
}

}  // namespace metadyn
