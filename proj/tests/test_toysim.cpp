#include <doctest.h>

#include <cmath>
#include <random>

#include "metadyn/errors.hpp"
#include "metadyn/toysim.hpp"
#include "support.hpp"

using namespace metadyn;

namespace {

ReferenceSet small_refs(const ToySystem& sys, int count = 8) { return generate_references(sys, count, 100, 200, 100); }

RunOptions short_run(Mode mode, std::int64_t steps = 500) {
  RunOptions o;
  o.mode = mode;
  o.n_steps = steps;
  return o;
}

}  // namespace

TEST_CASE("bonded forces are minus the energy gradient") {
  ToySystem sys;
  std::mt19937_64 rng(1);
  Coords<double> x = initial_chain(sys);
  std::normal_distribution<double> g(0.0, 0.02);
  for (Eigen::Index i = 0; i < x.cols(); ++i)
    for (int a = 0; a < 3; ++a) x(a, i) += g(rng);
  Coords<double> f;
  physical_forces(sys, x, f);
  const Coords<double> fd = testing::fd_gradient(
      [&](const Coords<double>& c) {
        Coords<double> tmp;
        return physical_forces(sys, c, tmp);
      },
      x, 1e-6);
  CHECK(testing::rel_error(-f, fd) < 1e-6);
}

TEST_CASE("the initial chain is a zero-force fixed point at zero temperature") {
  ToySystem sys;
  sys.temperature = 0;
  const ReferenceSet ref = small_refs(sys);
  RunOptions o = short_run(Mode::original, 1000);
  o.mtd.enabled = false;
  o.trajectory_stride = 999;
  const RunReport r = run(sys, ref, o);
  REQUIRE(r.frames.size() == 2);
  CHECK((r.frames[1].coords - r.frames[0].coords).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("zero-temperature dynamics never raises the energy") {
  ToySystem sys;
  sys.temperature = 0;
  std::mt19937_64 rng(2);
  Coords<double> x = initial_chain(sys);
  std::normal_distribution<double> g(0.0, 0.03);
  for (Eigen::Index i = 0; i < x.cols(); ++i)
    for (int a = 0; a < 3; ++a) x(a, i) += g(rng);
  Coords<double> f;
  double prev = physical_forces(sys, x, f);
  const double start = prev;
  for (int step = 0; step < 10000; ++step) {
    langevin_step(sys, x, f, rng);
    const double e = physical_forces(sys, x, f);
    CHECK(e <= prev + 1e-12 * start);
    prev = e;
  }
  CHECK(prev < 0.01 * start);
}

TEST_CASE("epsilon zero reproduces the original method") {
  ToySystem sys;
  const ReferenceSet ref = small_refs(sys);
  RunOptions close = short_run(Mode::close);
  close.epsilon = 0;
  const RunReport a = run(sys, ref, close);
  const RunReport b = run(sys, ref, short_run(Mode::original));
  REQUIRE(a.cv_series.size() == b.cv_series.size());
  for (std::size_t i = 0; i < a.cv_series.size(); ++i) CHECK(std::abs(a.cv_series[i] - b.cv_series[i]) <= 1e-10);
  CHECK(a.reassign_count == a.steps);
  CHECK(a.cheap_count == 0);
  CHECK(b.expensive_count == b.steps * 8);
  CHECK(a.expensive_count == b.expensive_count + a.steps);
}

TEST_CASE("runs are deterministic for any thread count") {
  ToySystem sys;
  const ReferenceSet ref = small_refs(sys, 12);
  RunOptions o = short_run(Mode::close, 300);
  o.threads = 0;
  const RunReport a = run(sys, ref, o);
  o.threads = 4;
  const RunReport b = run(sys, ref, o);
  CHECK(a.cv_series == b.cv_series);
  CHECK(a.bias_series == b.bias_series);
  CHECK(a.expensive_count == b.expensive_count);
}

TEST_CASE("counter identities hold in both modes, with and without a list") {
  ToySystem sys;
  const ReferenceSet ref = small_refs(sys, 12);
  for (bool nl : {false, true}) {
    for (Mode mode : {Mode::original, Mode::close}) {
      RunOptions o = short_run(mode, 1000);
      o.nl = {nl, 4, 25};
      const RunReport r = run(sys, ref, o);
      if (mode == Mode::close) {
        CHECK(r.expensive_count == r.steps + r.reassign_count * 12);
      } else {
        const std::int64_t m = nl ? 4 : 12;
        const std::int64_t updates = nl ? r.nl_updates : r.steps;
        CHECK(r.expensive_count == r.steps * m + updates * (12 - m));
      }
      std::int64_t recount = 0;
      for (const StepEvent& e : r.events) recount += e.expensive;
      CHECK(recount == r.expensive_count);
      CostModel model{12, nl ? 4.0 : 0.0, nl ? 25.0 : 1.0, r.reassign_count > 0 ? r.measured_K : 1.0};
      CHECK(measured_vs_model(r.counters(), model).exact_match);
    }
  }
}

TEST_CASE("configuration mismatches are reported") {
  ToySystem sys;
  const ReferenceSet ref = small_refs(sys, 4);
  ToySystem other = sys;
  other.n_beads = 6;
  CHECK_THROWS_AS(run(other, ref, short_run(Mode::close, 1)), ConfigError);
  RunOptions o = short_run(Mode::close, 1);
  o.nl = {true, 5, 10};
  CHECK_THROWS_AS(run(sys, ref, o), ConfigError);
  ToySystem bad = sys;
  bad.dt = 0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = sys;
  bad.friction = 0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("reference generation") {
  ToySystem sys;
  const ReferenceSet ref = generate_references(sys, 5, 50, 0, 30);
  CHECK(ref.size() == 5);
  CHECK(ref.lambda == 30);
  CHECK(ref.properties[4] == 4.0);
  validate(ref);
}
