#pragma once

#include <cstdint>
#include <vector>

#include "metadyn/geometry.hpp"
#include "metadyn/neighbourlist.hpp"
#include "metadyn/reference_set.hpp"

namespace metadyn {

/// Weighted mean-square distance (nm^2) and its gradient with respect to the
/// raw coordinates of the current structure.
struct DistanceResult {
  double value = 0.0;
  Coords<double> grad;
  bool exact = true;
};

struct IndexedDistance {
  int index = 0;
  DistanceResult result;
};

/// Expensive evaluations run a Kearsley eigen-decomposition; cheap ones reuse
/// cached rotations.
struct EvalCounters {
  std::int64_t expensive = 0;
  std::int64_t cheap = 0;
};

/// D = sum_j w_j |x_j - R target_j|^2 and its gradient
/// 2 w_k d_k - 2 w'_k sum_j w_j d_j + (sum_j -2 w_j d_j target_j^T) : dR/dx_k,
/// where `fit` supplies R and dR/dx. Shared by the exact and cached paths.
DistanceResult distance_with_rotation(const StructureD& x, const Coords<double>& target,
                                      const RotationFitD& fit, bool exact);

/// Exact distance to `a`; one Kearsley fit with derivatives.
DistanceResult exact_distance(const StructureD& x, const StructureD& a, EvalCounters* counters = nullptr);

/// Exact distance that also hands back the fit (the rotation fitting a onto x).
DistanceResult exact_distance(const StructureD& x, const StructureD& a, RotationFitD& fit_out,
                              EvalCounters* counters = nullptr);

/// Close-structure cache: the structure y, the fit of y onto the current
/// structure, and the saved rotations fitting every reference onto y.
struct CloseStructureState {
  explicit CloseStructureState(double epsilon = 0.01) : epsilon(epsilon) {}

  bool initialized = false;
  StructureD y;
  RotationFitD fit_xy;
  double d_xy = 0.0;
  std::vector<Mat3<double>> saved_rots;
  std::vector<Coords<double>> rotated_refs;  // saved_rots[i] * a_i
  double epsilon;
  std::int64_t reassign_count = 0;
  std::int64_t step_count = 0;
  EvalCounters counters;
};

/// Cached-rotation distance to reference `index`: the reference is rotated by
/// its saved rotation onto y, then by R_xy onto x. No eigen-decomposition.
DistanceResult approx_distance(const StructureD& x, int index, const CloseStructureState& state,
                               const ReferenceSet& ref, EvalCounters* counters = nullptr);

struct StepResult {
  std::vector<IndexedDistance> distances;  // every reference evaluated this step, ascending index
  std::vector<int> active;                 // indices feeding the collective variable
  bool reassigned = false;
  bool nl_updated = false;

  /// Distances of the active set, in active order.
  std::vector<IndexedDistance> active_distances() const;
};

/// One step of the original method: exact distances to the neighbour list
/// members, or to all references on list updates and when the list is
/// disabled.
StepResult step_original(const StructureD& x, std::int64_t step, NeighbourList& nl, const ReferenceSet& ref,
                         EvalCounters& counters, int threads = 0);

/// One step of the close-structure method. Always fits y onto x (one expensive
/// evaluation). When this is the first step or D(x, y) > epsilon, y is
/// replaced by x and all saved rotations are recomputed exactly (N more
/// expensive evaluations, exact results for every reference). Otherwise the
/// active references, or all references on a neighbour-list update, are
/// approximated through the cache.
StepResult step_close_structure(const StructureD& x, std::int64_t step, CloseStructureState& state,
                                NeighbourList& nl, const ReferenceSet& ref, int threads = 0);

}  // namespace metadyn
