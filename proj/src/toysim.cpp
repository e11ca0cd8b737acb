#include "metadyn/toysim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "metadyn/errors.hpp"

namespace metadyn {

void validate(const ToySystem& s) {
  if (s.n_beads < 3) throw ConfigError("toy chain needs at least 3 beads");
  if (!(s.dt > 0)) throw ConfigError("dt must be positive");
  if (!(s.temperature >= 0)) throw ConfigError("temperature must be non-negative");
  if (!(s.friction > 0)) throw ConfigError("friction must be positive");
  if (!(s.bead_mass > 0)) throw ConfigError("bead mass must be positive");
  if (!(s.bond_r0 > 0)) throw ConfigError("bond length must be positive");
}

Coords<double> initial_chain(const ToySystem& s) {
  Coords<double> x(3, s.n_beads);
  const double dx = s.bond_r0 * std::sin(0.5 * s.angle_theta0);
  const double dy = s.bond_r0 * std::cos(0.5 * s.angle_theta0);
  for (int i = 0; i < s.n_beads; ++i) x.col(i) = Vec3<double>(i * dx, (i % 2) * dy, 0.0);
  return x;
}

double physical_forces(const ToySystem& s, const Coords<double>& x, Coords<double>& forces) {
  const Eigen::Index n = x.cols();
  forces = Coords<double>::Zero(3, n);
  double energy = 0.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const Vec3<double> b = x.col(i + 1) - x.col(i);
    const double r = b.norm();
    const double dr = r - s.bond_r0;
    energy += 0.5 * s.bond_k * dr * dr;
    const Vec3<double> f = -s.bond_k * dr / r * b;  // force on i+1
    forces.col(i + 1) += f;
    forces.col(i) -= f;
  }
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const Vec3<double> u = x.col(i - 1) - x.col(i);
    const Vec3<double> v = x.col(i + 1) - x.col(i);
    const double lu = u.norm();
    const double lv = v.norm();
    const double c = std::clamp(u.dot(v) / (lu * lv), -1.0, 1.0);
    const double theta = std::acos(c);
    const double dtheta = theta - s.angle_theta0;
    energy += 0.5 * s.angle_k * dtheta * dtheta;
    const double sin_theta = std::max(std::sqrt(1.0 - c * c), 1e-12);
    // dtheta/du = -(v/(|u||v|) - c u/|u|^2) / sin(theta), likewise for v.
    const Vec3<double> dtheta_du = -(v / (lu * lv) - c * u / (lu * lu)) / sin_theta;
    const Vec3<double> dtheta_dv = -(u / (lu * lv) - c * v / (lv * lv)) / sin_theta;
    const double k = s.angle_k * dtheta;
    forces.col(i - 1) -= k * dtheta_du;
    forces.col(i + 1) -= k * dtheta_dv;
    forces.col(i) += k * (dtheta_du + dtheta_dv);
  }
  return energy;
}

void langevin_step(const ToySystem& s, Coords<double>& x, const Coords<double>& forces, std::mt19937_64& rng) {
  const double mobility = 1.0 / (s.bead_mass * s.friction);
  const double noise = std::sqrt(2.0 * kBoltzmann * s.temperature * mobility * s.dt);
  std::normal_distribution<double> gauss(0.0, 1.0);
  x += (s.dt * mobility) * forces;
  if (noise > 0.0)
    for (Eigen::Index i = 0; i < x.cols(); ++i)
      for (int a = 0; a < 3; ++a) x(a, i) += noise * gauss(rng);
}

ReferenceSet generate_references(const ToySystem& s, int count, int interval, int equilibration, double lambda) {
  validate(s);
  if (count < 1 || interval < 1 || equilibration < 0) throw ConfigError("invalid reference generation schedule");
  std::mt19937_64 rng(s.rng_seed);
  Coords<double> x = initial_chain(s);
  Coords<double> f;
  ReferenceSet ref;
  ref.lambda = lambda;
  const std::int64_t total = equilibration + static_cast<std::int64_t>(count - 1) * interval;
  for (std::int64_t step = 0; step <= total; ++step) {
    if (step >= equilibration && (step - equilibration) % interval == 0) {
      ref.structures.push_back(center(make_structure<double>(x)));
      ref.properties.push_back(static_cast<double>(ref.properties.size()));
    }
    physical_forces(s, x, f);
    langevin_step(s, x, f, rng);
  }
  return ref;
}

RunCounters RunReport::counters() const {
  RunCounters c;
  c.mode = mode;
  c.steps = steps;
  c.expensive = expensive_count;
  c.cheap = cheap_count;
  c.reassignments = reassign_count;
  c.nl_updates = nl_updates;
  c.references = references;
  c.nl_size = nl_size;
  return c;
}

RunReport run(const ToySystem& system, const ReferenceSet& ref, const RunOptions& opt) {
  validate(system);
  validate(ref);
  if (ref.atom_count() != system.n_beads)
    throw ConfigError("reference structures have " + std::to_string(ref.atom_count()) + " atoms but the chain has " +
                      std::to_string(system.n_beads) + " beads");
  const int n_ref = static_cast<int>(ref.size());
  if (opt.nl.enabled && opt.nl.size > n_ref)
    throw ConfigError("neighbour list size " + std::to_string(opt.nl.size) + " exceeds reference count " +
                      std::to_string(n_ref));
  if (opt.n_steps < 0) throw ConfigError("step count must be non-negative");

  const auto start = std::chrono::steady_clock::now();

  Coords<double> x = opt.initial ? *opt.initial : initial_chain(system);
  if (x.cols() != system.n_beads) throw ConfigError("initial coordinates do not match the bead count");
  StructureD current{x, ref.structures.front().disp, ref.structures.front().align};

  NeighbourList nl = opt.nl.enabled ? NeighbourList(opt.nl.size, opt.nl.stride) : NeighbourList();
  CloseStructureState state(opt.epsilon);
  EvalCounters original_counters;

  std::optional<HillStore> store;
  if (opt.mtd.enabled) {
    store.emplace(std::vector<double>{opt.mtd.sigma}, opt.mtd.height, opt.mtd.stride);
    if (opt.mtd.grid) {
      const auto [qmin, qmax] = std::minmax_element(ref.properties.begin(), ref.properties.end());
      GridSpec spec{{opt.mtd.grid_min.value_or(*qmin - 2.0)}, {opt.mtd.grid_max.value_or(*qmax + 2.0)},
                    {opt.mtd.bins}};
      store->enable_grid(spec);
    }
  }

  RunReport report;
  report.mode = opt.mode;
  report.references = n_ref;
  report.nl_size = opt.nl.enabled ? opt.nl.size : 0;
  report.nl_stride = opt.nl.enabled ? opt.nl.stride : 1;
  report.cv_series.reserve(static_cast<std::size_t>(opt.n_steps));
  report.bias_series.reserve(static_cast<std::size_t>(opt.n_steps));
  report.events.reserve(static_cast<std::size_t>(opt.n_steps));

  std::mt19937_64 rng(system.rng_seed);
  Coords<double> forces;
  for (std::int64_t step = 0; step < opt.n_steps; ++step) {
    current.coords = x;
    const StructureD xc = center(current);

    const EvalCounters before = opt.mode == Mode::original ? original_counters : state.counters;
    const StepResult r = opt.mode == Mode::original
                             ? step_original(xc, step, nl, ref, original_counters, opt.threads)
                             : step_close_structure(xc, step, state, nl, ref, opt.threads);
    const EvalCounters& after = opt.mode == Mode::original ? original_counters : state.counters;
    report.events.push_back(
        {after.expensive - before.expensive, after.cheap - before.cheap, r.reassigned, r.nl_updated});
    if (r.nl_updated) ++report.nl_updates;

    if (opt.record_exact_comparison) {
      for (const IndexedDistance& d : r.distances) {
        if (d.result.exact) continue;
        report.approx_values.push_back(d.result.value);
        report.exact_values.push_back(exact_distance(xc, ref.structures[static_cast<std::size_t>(d.index)]).value);
      }
    }

    const std::vector<IndexedDistance> active = r.active_distances();
    const CVResult cv = property_map(active, ref);
    report.cv_series.push_back(cv.value);

    physical_forces(system, x, forces);
    if (store) {
      const BiasResult bias = bias_and_force(*store, std::span<const CVResult>(&cv, 1));
      forces += bias.forces;
      report.bias_series.push_back(bias.value);
      if (step % store->stride() == 0) store->deposit(std::span<const double>(&cv.value, 1), step);
    } else {
      report.bias_series.push_back(0.0);
    }

    if (opt.trajectory_stride > 0 && step % opt.trajectory_stride == 0) report.frames.push_back({step, x});
    langevin_step(system, x, forces, rng);
  }

  report.steps = opt.n_steps;
  if (opt.mode == Mode::original) {
    report.expensive_count = original_counters.expensive;
    report.cheap_count = original_counters.cheap;
  } else {
    report.expensive_count = state.counters.expensive;
    report.cheap_count = state.counters.cheap;
    report.reassign_count = state.reassign_count;
  }
  report.measured_K = report.reassign_count > 0
                          ? static_cast<double>(report.steps) / static_cast<double>(report.reassign_count)
                          : 0.0;
  report.bias = std::move(store);
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace metadyn
