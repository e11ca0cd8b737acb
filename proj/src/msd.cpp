#include "metadyn/msd.hpp"

#include <numeric>
#include <string>

#include "metadyn/errors.hpp"
#include "metadyn/parallel.hpp"

namespace metadyn {

DistanceResult distance_with_rotation(const StructureD& x, const Coords<double>& target, const RotationFitD& fit,
                                      bool exact) {
  const Eigen::Index n = x.size();
  const Coords<double> d = x.coords - fit.rotation * target;

  DistanceResult out;
  out.exact = exact;
  out.value = (d.colwise().squaredNorm() * x.disp)(0);

  const Coords<double> wd = d * x.disp.asDiagonal();  // w_j d_j
  const Vec3<double> wd_sum = wd.rowwise().sum();
  out.grad = 2.0 * wd - 2.0 * wd_sum * x.align.transpose();

  if (fit.has_derivatives()) {
    const Mat3<double> g = -2.0 * wd * target.transpose();
    for (Eigen::Index k = 0; k < n; ++k)
      for (int alpha = 0; alpha < 3; ++alpha) out.grad(alpha, k) += g.cwiseProduct(fit.d_rotation(k, alpha)).sum();
  }
  return out;
}

DistanceResult exact_distance(const StructureD& x, const StructureD& a, RotationFitD& fit_out,
                              EvalCounters* counters) {
  fit_out = kearsley_fit(x, a, true);
  if (counters) ++counters->expensive;
  return distance_with_rotation(x, a.coords, fit_out, true);
}

DistanceResult exact_distance(const StructureD& x, const StructureD& a, EvalCounters* counters) {
  RotationFitD fit;
  return exact_distance(x, a, fit, counters);
}

DistanceResult approx_distance(const StructureD& x, int index, const CloseStructureState& state,
                               const ReferenceSet& ref, EvalCounters* counters) {
  if (index < 0 || static_cast<std::size_t>(index) >= ref.size())
    throw Error("reference index " + std::to_string(index) + " out of range");
  if (!state.initialized || state.rotated_refs.size() != ref.size() || !state.fit_xy.has_derivatives())
    throw Error("close-structure state holds no usable fit");
  if (counters) ++counters->cheap;
  return distance_with_rotation(x, state.rotated_refs[static_cast<std::size_t>(index)], state.fit_xy, false);
}

std::vector<IndexedDistance> StepResult::active_distances() const {
  std::vector<IndexedDistance> out;
  out.reserve(active.size());
  std::size_t pos = 0;
  for (int idx : active) {
    while (pos < distances.size() && distances[pos].index < idx) ++pos;
    if (pos == distances.size() || distances[pos].index != idx)
      throw Error("active reference " + std::to_string(idx) + " was not evaluated");
    out.push_back(distances[pos]);
  }
  return out;
}

namespace {

std::vector<int> all_indices(std::size_t n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

template <typename Eval>
std::vector<IndexedDistance> evaluate(const std::vector<int>& indices, int threads, Eval&& eval) {
  std::vector<IndexedDistance> out(indices.size());
  parallel_for(indices.size(), threads, [&](std::size_t i) {
    out[i].index = indices[i];
    out[i].result = eval(indices[i]);
  });
  return out;
}

std::vector<double> values_of(const std::vector<IndexedDistance>& all) {
  std::vector<double> v(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) v[i] = all[i].result.value;
  return v;
}

}  // namespace

StepResult step_original(const StructureD& x, std::int64_t step, NeighbourList& nl, const ReferenceSet& ref,
                         EvalCounters& counters, int threads) {
  const auto n = static_cast<int>(ref.size());
  auto exact = [&](int i) { return exact_distance(x, ref.structures[static_cast<std::size_t>(i)]); };

  StepResult out;
  if (!nl.enabled() || nl.update_due(step)) {
    out.distances = evaluate(all_indices(ref.size()), threads, exact);
    counters.expensive += n;
    if (nl.enabled()) {
      nl.update(step, values_of(out.distances));
      out.nl_updated = true;
    }
  } else {
    out.distances = evaluate(nl.indices(), threads, exact);
    counters.expensive += static_cast<std::int64_t>(nl.indices().size());
  }
  out.active = nl.active(n);
  return out;
}

StepResult step_close_structure(const StructureD& x, std::int64_t step, CloseStructureState& state,
                                NeighbourList& nl, const ReferenceSet& ref, int threads) {
  const auto n = static_cast<int>(ref.size());
  const bool first = !state.initialized;
  if (first) state.y = x;

  ++state.step_count;
  state.fit_xy = kearsley_fit(x, state.y, true);
  ++state.counters.expensive;
  state.d_xy = distance_with_rotation(x, state.y.coords, state.fit_xy, true).value;

  StepResult out;
  if (first || state.d_xy > state.epsilon) {
    std::vector<RotationFitD> fits(ref.size());
    out.distances = evaluate(all_indices(ref.size()), threads, [&](int i) {
      const auto u = static_cast<std::size_t>(i);
      return exact_distance(x, ref.structures[u], fits[u]);
    });
    state.counters.expensive += n;
    state.saved_rots.resize(ref.size());
    state.rotated_refs.resize(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      state.saved_rots[i] = fits[i].rotation;
      state.rotated_refs[i] = fits[i].rotation * ref.structures[i].coords;
    }
    if (!first) {
      // The fit of the old y onto x does not describe the new y; it is
      // refreshed at the start of the next step.
      state.fit_xy = RotationFitD{};
    }
    state.y = x;
    state.initialized = true;
    ++state.reassign_count;
    out.reassigned = true;
    if (nl.enabled() && nl.update_due(step)) {
      nl.update(step, values_of(out.distances));
      out.nl_updated = true;
    }
    out.active = nl.active(n);
    return out;
  }

  auto approx = [&](int i) { return approx_distance(x, i, state, ref); };
  if (!nl.enabled() || nl.update_due(step)) {
    out.distances = evaluate(all_indices(ref.size()), threads, approx);
    state.counters.cheap += n;
    if (nl.enabled()) {
      nl.update(step, values_of(out.distances));
      out.nl_updated = true;
    }
  } else {
    out.distances = evaluate(nl.indices(), threads, approx);
    state.counters.cheap += static_cast<std::int64_t>(nl.indices().size());
  }
  out.active = nl.active(n);
  return out;
}

}  // namespace metadyn
