#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace metadyn {

/// The M references closest to the current structure, refreshed every L
/// steps. A disabled list acts as M = N, L = 1.
class NeighbourList {
 public:
  /// Disabled list.
  NeighbourList() = default;
  NeighbourList(int size, int stride);

  bool enabled() const { return enabled_; }
  int size() const { return size_; }
  int stride() const { return stride_; }
  std::int64_t last_update_step() const { return last_update_step_; }
  const std::vector<int>& indices() const { return indices_; }

  /// True on the first call and whenever step - last_update_step >= stride.
  bool update_due(std::int64_t step) const;

  /// Selects the `size` smallest distances (ties to the lower index) and
  /// records `step`. Throws ConfigError when size exceeds distances.size().
  void update(std::int64_t step, std::span<const double> distances_all);

  /// Updates when due; returns whether it did.
  bool maybe_update(std::int64_t step, std::span<const double> distances_all);

  /// Indices used for the variable: the list when enabled, else 0..n-1.
  std::vector<int> active(int n_references) const;

 private:
  bool enabled_ = false;
  int size_ = 0;
  int stride_ = 1;
  std::int64_t last_update_step_ = -1;
  bool initialized_ = false;
  std::vector<int> indices_;
};

}  // namespace metadyn
