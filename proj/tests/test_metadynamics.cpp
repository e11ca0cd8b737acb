#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "metadyn/errors.hpp"
#include "metadyn/metadynamics.hpp"

using namespace metadyn;

namespace {

double at(const HillStore& s, double x) { return s.value(std::vector<double>{x}); }

void put(HillStore& s, double x, std::int64_t step) { s.deposit(std::vector<double>{x}, step); }

}  // namespace

TEST_CASE("one hill: height at the center, exp(-1/2) one width away") {
  HillStore s({0.5}, 1.2, 1);
  put(s, 2.0, 0);
  CHECK(at(s, 2.0) == doctest::Approx(1.2));
  CHECK(at(s, 2.5) == doctest::Approx(1.2 * std::exp(-0.5)));
  CHECK(at(s, 1.5) == doctest::Approx(1.2 * std::exp(-0.5)));
  CHECK(s.gradient(std::vector<double>{2.0})[0] == doctest::Approx(0.0));
}

TEST_CASE("two-variable hill is a product of one-dimensional factors") {
  HillStore s({0.5, 0.2}, 2.0, 10);
  s.deposit(std::vector<double>{0.0, 1.0}, 0);
  const std::vector<double> p{0.3, 1.1};
  const double expect = 2.0 * std::exp(-0.09 / 0.5) * std::exp(-0.01 / 0.08);
  CHECK(s.value(p) == doctest::Approx(expect));
  const std::vector<double> g = s.gradient(p);
  CHECK(g[0] == doctest::Approx(-expect * 0.3 / 0.25));
  CHECK(g[1] == doctest::Approx(-expect * 0.1 / 0.04));
}

TEST_CASE("bias is non-negative and only grows with depositions") {
  HillStore s({0.3}, 0.5, 5);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> probe{-1.0, -0.2, 0.0, 0.4, 2.0};
  std::vector<double> prev(probe.size(), 0.0);
  for (int i = 0; i < 50; ++i) {
    put(s, u(rng), 5 * i);
    for (std::size_t j = 0; j < probe.size(); ++j) {
      const double v = at(s, probe[j]);
      CHECK(v >= prev[j]);
      prev[j] = v;
    }
  }
}

TEST_CASE("grid agrees with direct summation at nodes and between them") {
  HillStore s({0.5}, 0.5, 1);
  s.enable_grid({{-3.0}, {3.0}, {300}});
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 200; ++i) put(s, u(rng), i);
  for (int node = 0; node <= 300; node += 7) {
    const std::vector<int> idx{node};
    const std::vector<double> pos = s.node_position(idx);
    // Each hill is truncated at six widths, so a node can miss at most h e^-18 per hill.
    const double bound = 200 * 0.5 * std::exp(-18.0) + 1e-12;
    CHECK(std::abs(s.node_value(idx) - s.value_direct(pos)) <= bound);
    CHECK(std::abs(s.value(pos) - s.value_direct(pos)) <= bound);
  }
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> p{u(rng)};
    CHECK(std::abs(s.value(p) - s.value_direct(p)) < 1e-4 * s.value_direct(p) + 1e-8);
    CHECK(std::abs(s.gradient(p)[0] - s.gradient_direct(p)[0]) < 1e-3 * 200 * 0.5);
  }
}

TEST_CASE("two-dimensional grid interpolates the direct sum") {
  HillStore s({0.4, 0.3}, 1.0, 1);
  s.enable_grid({{-2.0, -2.0}, {2.0, 2.0}, {80, 80}});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 20; ++i) s.deposit(std::vector<double>{u(rng), u(rng)}, i);
  for (int i = 0; i < 50; ++i) {
    const std::vector<double> p{u(rng), u(rng)};
    CHECK(s.value(p) == doctest::Approx(s.value_direct(p)).epsilon(1e-3));
  }
}

TEST_CASE("deposition rules") {
  HillStore s({0.5}, 1.0, 50);
  CHECK_THROWS_AS(put(s, 0.0, 25), Error);
  put(s, 0.0, 50);
  CHECK_THROWS_AS(put(s, 0.0, 0), Error);
  s.enable_grid({{-1.0}, {1.0}, {10}});
  CHECK_THROWS_AS(put(s, 1.5, 100), OutOfGrid);
  CHECK_THROWS_AS(s.value(std::vector<double>{-1.5}), OutOfGrid);
}

TEST_CASE("invalid stores are rejected") {
  CHECK_THROWS_AS(HillStore({}, 1.0, 1), ConfigError);
  CHECK_THROWS_AS(HillStore({1, 1, 1, 1}, 1.0, 1), ConfigError);
  CHECK_THROWS_AS(HillStore({0.0}, 1.0, 1), ConfigError);
  CHECK_THROWS_AS(HillStore({1.0}, 1.0, 0), ConfigError);
  HillStore s({1.0}, 1.0, 1);
  CHECK_THROWS_AS(s.enable_grid({{1.0}, {0.0}, {10}}), ConfigError);
}

TEST_CASE("bias force is minus dV/dS times the variable gradient") {
  HillStore s({0.5}, 1.0, 1);
  put(s, 0.0, 0);
  CVResult cv;
  cv.value = 0.3;
  cv.grad = Coords<double>::Ones(3, 2);
  const BiasResult b = bias_and_force(s, std::span<const CVResult>(&cv, 1));
  const double dv = s.gradient(std::vector<double>{0.3})[0];
  CHECK(b.value == doctest::Approx(at(s, 0.3)));
  CHECK(b.dv_ds[0] == doctest::Approx(dv));
  CHECK(b.forces(1, 1) == doctest::Approx(-dv));
}

TEST_CASE("HILLS output has one line per hill") {
  HillStore s({0.5}, 0.25, 10);
  put(s, 1.0, 0);
  put(s, 2.0, 10);
  std::ostringstream out;
  s.write_hills(out);
  std::istringstream in(out.str());
  std::string line;
  int lines = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++lines;
  CHECK(lines == 2);
}
