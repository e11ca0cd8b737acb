#pragma once

#include <cstdint>
#include <string>

namespace metadyn {

/// Expensive-evaluation model. `nl_size` = 0 with `nl_stride` = 1 encodes a
/// run without a neighbour list. `reassign_interval` is the mean number of
/// steps between close-structure reassignments.
struct CostModel {
  double references = 1;       // N
  double nl_size = 0;          // M
  double nl_stride = 1;        // L
  double reassign_interval = 1;  // K
};

void validate(const CostModel& model);

/// M + (N - M) / L expensive evaluations per step.
double original_cost(const CostModel& model);
/// 1 + N / K expensive evaluations per step.
double close_cost(const CostModel& model);
double msd_speedup(const CostModel& model);
/// Strict: original_cost > close_cost.
bool accelerates(const CostModel& model);

struct AmdahlInput {
  double portion = 0;  // p, fraction of the original run spent in the accelerated part
  double speedup = 1;  // s, speed-up of that part
};

/// 1 / ((1 - p) + p / s)
double amdahl(const AmdahlInput& in);

enum class Mode { original, close };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& text);

/// Counters a run reports, enough to recompute the model's per-step average.
struct RunCounters {
  Mode mode = Mode::original;
  std::int64_t steps = 0;
  std::int64_t expensive = 0;
  std::int64_t cheap = 0;
  std::int64_t reassignments = 0;
  std::int64_t nl_updates = 0;
  int references = 0;
  int nl_size = 0;  // 0 when no neighbour list
};

struct ModelComparison {
  double measured = 0;  // expensive evaluations per step
  double predicted = 0;
  std::int64_t expected_count = 0;  // exact integer identity
  bool exact_match = false;
};

/// Checks the run's expensive count against the model with the run's own
/// event counts: close mode steps + reassignments * N; original mode
/// steps * M + updates * (N - M). Throws when `model` and the run disagree on
/// N or M.
ModelComparison measured_vs_model(const RunCounters& run, const CostModel& model);

}  // namespace metadyn
