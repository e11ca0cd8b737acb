#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "metadyn/colvar.hpp"
#include "metadyn/metadynamics.hpp"
#include "metadyn/msd.hpp"
#include "metadyn/neighbourlist.hpp"
#include "metadyn/perf.hpp"

namespace metadyn {

inline constexpr double kBoltzmann = 0.0083144626181532;  // kJ/mol/K

/// Bead chain with harmonic bonds and harmonic bond angles, integrated by
/// overdamped Langevin dynamics (Euler-Maruyama). Units: nm, ps, kJ/mol, amu.
struct ToySystem {
  int n_beads = 8;
  double bond_k = 5000.0;      // kJ/mol/nm^2
  double bond_r0 = 0.15;       // nm
  double angle_k = 10.0;       // kJ/mol/rad^2
  double angle_theta0 = 1.91;  // rad
  double temperature = 300.0;  // K
  double friction = 50.0;      // 1/ps
  double bead_mass = 12.0;     // amu
  double dt = 1e-3;            // ps
  std::uint64_t rng_seed = 2024;
};

void validate(const ToySystem& system);

/// Planar zig-zag with every bond at r0 and every angle at theta0.
Coords<double> initial_chain(const ToySystem& system);

/// Bonded energy and forces (-dU/dx).
double physical_forces(const ToySystem& system, const Coords<double>& x, Coords<double>& forces);

/// Advances x one Euler-Maruyama step under `forces`.
void langevin_step(const ToySystem& system, Coords<double>& x, const Coords<double>& forces, std::mt19937_64& rng);

/// Unbiased pre-run from the initial chain, snapshotted every `interval` steps
/// after `equilibration` steps. Snapshots are centered with uniform weights;
/// property i is i.
ReferenceSet generate_references(const ToySystem& system, int count, int interval, int equilibration,
                                 double lambda);

struct NeighbourListConfig {
  bool enabled = false;
  int size = 50;
  int stride = 50;
};

struct MetadynamicsConfig {
  bool enabled = true;
  int stride = 50;
  double sigma = 0.5;
  double height = 0.5;
  bool grid = true;
  int bins = 500;
  /// Grid bounds; when unset, [min q - 2, max q + 2] of the reference set.
  std::optional<double> grid_min;
  std::optional<double> grid_max;
};

struct RunOptions {
  Mode mode = Mode::close;
  double epsilon = 0.01;  // nm^2
  NeighbourListConfig nl;
  MetadynamicsConfig mtd;
  std::int64_t n_steps = 5000;
  int trajectory_stride = 0;  // 0: no frames
  bool record_exact_comparison = false;
  int threads = 0;
  std::optional<Coords<double>> initial;
};

struct Frame {
  std::int64_t step = 0;
  Coords<double> coords;
};

/// Per-step bookkeeping for an independent recount of the counters.
struct StepEvent {
  std::int64_t expensive = 0;
  std::int64_t cheap = 0;
  bool reassigned = false;
  bool nl_updated = false;
};

struct RunReport {
  std::int64_t steps = 0;
  Mode mode = Mode::close;
  int references = 0;
  int nl_size = 0;
  int nl_stride = 1;
  std::int64_t expensive_count = 0;
  std::int64_t cheap_count = 0;
  std::int64_t reassign_count = 0;
  std::int64_t nl_updates = 0;
  double measured_K = 0;  // steps / reassign_count (close mode)
  std::vector<double> cv_series;
  std::vector<double> bias_series;
  std::vector<StepEvent> events;
  std::vector<Frame> frames;
  // Cached-rotation distances paired with an uncounted exact recomputation.
  std::vector<double> approx_values;
  std::vector<double> exact_values;
  double wall_time = 0;
  std::optional<HillStore> bias;

  RunCounters counters() const;
};

/// Runs the biased chain and evaluates the property-map variable every step
/// with the selected method. Identical inputs give identical reports apart
/// from wall_time, for any thread count.
RunReport run(const ToySystem& system, const ReferenceSet& ref, const RunOptions& options);

}  // namespace metadyn
