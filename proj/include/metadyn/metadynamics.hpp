#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "metadyn/colvar.hpp"

namespace metadyn {

struct Hill {
  std::vector<double> center;
  std::vector<double> sigma;
  double height = 0.0;
  std::int64_t step = 0;
};

/// Uniform non-periodic grid: `bins` intervals per dimension, so bins + 1
/// nodes spanning [lower, upper].
struct GridSpec {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<int> bins;
};

struct BiasResult {
  double value = 0.0;
  std::vector<double> dv_ds;
  Coords<double> forces;  // -dV/dx
};

/// Accumulated Gaussian bias over 1 to 3 collective variables. Each hill is
/// height * prod_i exp(-(s_i - c_i)^2 / (2 sigma_i^2)).
///
/// With a grid enabled, every deposition also adds the hill (cut off at
/// `cutoff` widths per dimension) to node values and all mixed partial
/// derivatives, and evaluation uses tensor-product cubic Hermite
/// interpolation between nodes.
class HillStore {
 public:
  HillStore(std::vector<double> sigma, double height, int stride);

  int dims() const { return static_cast<int>(sigma_.size()); }
  int stride() const { return stride_; }
  double height() const { return height_; }
  const std::vector<double>& sigma() const { return sigma_; }
  const std::vector<Hill>& hills() const { return hills_; }

  void enable_grid(const GridSpec& spec, double cutoff = 6.0);
  bool grid_enabled() const { return grid_.has_value(); }
  const GridSpec& grid_spec() const;

  /// Appends a hill at `cv_values`. Requires step to be a multiple of the
  /// stride and not earlier than the previous hill; with a grid, the center
  /// must lie within the grid bounds.
  void deposit(std::span<const double> cv_values, std::int64_t step);

  /// Bias at s (grid interpolation when enabled, else direct summation).
  double value(std::span<const double> s) const;
  /// dV/ds at s, same route as value().
  std::vector<double> gradient(std::span<const double> s) const;

  double value_direct(std::span<const double> s) const;
  std::vector<double> gradient_direct(std::span<const double> s) const;

  /// Stored node value at a multi-index (grid only).
  double node_value(std::span<const int> node) const;
  std::vector<double> node_position(std::span<const int> node) const;

  /// One line per hill: step, centers, sigmas, height.
  void write_hills(std::ostream& out) const;

 private:
  struct Grid {
    GridSpec spec;
    std::vector<double> spacing;
    std::vector<std::size_t> strides;  // node strides
    std::size_t n_nodes = 0;
    double cutoff = 6.0;
    // 2^dims entries per node: value and all mixed first-order partials,
    // indexed by bitmask of differentiated dimensions.
    std::vector<double> data;
  };

  void check_in_grid(std::span<const double> s) const;
  void add_to_grid(const Hill& hill);
  void interpolate(std::span<const double> s, double* value, std::vector<double>* grad) const;

  std::vector<double> sigma_;
  double height_;
  int stride_;
  std::vector<Hill> hills_;
  std::optional<Grid> grid_;
};

/// Bias energy and atomic bias forces for one variable per store dimension.
/// forces_k = -sum_i dV/dS_i * dS_i/dx_k (the physical force).
BiasResult bias_and_force(const HillStore& store, std::span<const CVResult> cvs);

}  // namespace metadyn
