#include "metadyn/perf.hpp"

#include <cmath>

#include "metadyn/errors.hpp"

namespace metadyn {

void validate(const CostModel& m) {
  if (!(m.references >= 1)) throw ConfigError("cost model needs N >= 1");
  if (!(m.nl_size >= 0 && m.nl_size <= m.references)) throw ConfigError("cost model needs 0 <= M <= N");
  if (!(m.nl_stride >= 1)) throw ConfigError("cost model needs L >= 1");
  if (!(m.reassign_interval > 0)) throw ConfigError("cost model needs K > 0");
}

double original_cost(const CostModel& m) {
  validate(m);
  return m.nl_size + (m.references - m.nl_size) / m.nl_stride;
}

double close_cost(const CostModel& m) {
  validate(m);
  return 1.0 + m.references / m.reassign_interval;
}

double msd_speedup(const CostModel& m) { return original_cost(m) / close_cost(m); }

bool accelerates(const CostModel& m) { return original_cost(m) > close_cost(m); }

double amdahl(const AmdahlInput& in) {
  if (!(in.portion >= 0.0 && in.portion <= 1.0)) throw ConfigError("Amdahl portion must lie in [0, 1]");
  if (!(in.speedup > 0.0)) throw ConfigError("Amdahl speed-up must be positive");
  return 1.0 / ((1.0 - in.portion) + in.portion / in.speedup);
}

std::string to_string(Mode mode) { return mode == Mode::original ? "original" : "close"; }

Mode mode_from_string(const std::string& text) {
  if (text == "original") return Mode::original;
  if (text == "close") return Mode::close;
  throw ConfigError("unknown mode '" + text + "' (expected original or close)");
}

ModelComparison measured_vs_model(const RunCounters& run, const CostModel& model) {
  validate(model);
  if (run.steps < 1) throw ConfigError("run has no steps");
  if (static_cast<double>(run.references) != model.references)
    throw ConfigError("model N does not match the run's reference count");
  ModelComparison out;
  out.measured = static_cast<double>(run.expensive) / static_cast<double>(run.steps);
  const std::int64_t n = run.references;
  if (run.mode == Mode::close) {
    out.expected_count = run.steps + run.reassignments * n;
    out.predicted = close_cost(model);
  } else {
    const std::int64_t m = run.nl_size > 0 ? run.nl_size : n;
    if (run.nl_size > 0 && static_cast<double>(run.nl_size) != model.nl_size)
      throw ConfigError("model M does not match the run's neighbour list size");
    const std::int64_t updates = run.nl_size > 0 ? run.nl_updates : run.steps;
    out.expected_count = run.steps * m + updates * (n - m);
    out.predicted = original_cost(model);
  }
  out.exact_match = out.expected_count == run.expensive;
  return out;
}

}  // namespace metadyn
