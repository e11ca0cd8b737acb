#include "metadyn/diagnostics.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "metadyn/colvar.hpp"
#include "metadyn/metadynamics.hpp"
#include "metadyn/msd.hpp"

namespace metadyn {

namespace {

StructureD random_centered(std::mt19937_64& rng, int n, const Weights<double>& w, const Weights<double>& wp) {
  std::normal_distribution<double> g(0.0, 0.5);
  Coords<double> c(3, n);
  for (int j = 0; j < n; ++j) c.col(j) = Vec3<double>(g(rng), g(rng), g(rng));
  return center(make_structure<double>(c, w, wp));
}

double fd_rel_error(const std::function<double(const Coords<double>&)>& f, const StructureD& x,
                    const Coords<double>& analytic, double h) {
  double dev = 0, ref = 0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    for (int a = 0; a < 3; ++a) {
      Coords<double> p = x.coords, m = x.coords;
      p(a, k) += h;
      m(a, k) -= h;
      const double fd = (f(p) - f(m)) / (2 * h);
      dev = std::max(dev, std::abs(fd - analytic(a, k)));
      ref = std::max(ref, std::abs(fd));
    }
  }
  return dev / std::max(ref, 1e-8);
}

StructureD with_coords(const StructureD& like, const Coords<double>& c) {
  StructureD s = like;
  s.coords = c;
  return center(s);
}

}  // namespace

std::vector<CheckRow> run_self_checks(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uw(0.2, 1.0);
  std::uniform_int_distribution<int> atoms(3, 12);
  std::normal_distribution<double> g(0.0, 1.0);

  double ortho = 0, drot = 0, exact_grad = 0, approx_grad = 0, chain_grad = 0, hill_grad = 0;
  const double h = 1e-6;
  for (int it = 0; it < instances; ++it) {
    const int n = atoms(rng);
    Weights<double> w(n), wp(n);
    for (int j = 0; j < n; ++j) w(j) = uw(rng);
    for (int j = 0; j < n; ++j) wp(j) = uw(rng);
    const StructureD x = random_centered(rng, n, w, wp);
    const StructureD a = random_centered(rng, n, w, wp);

    const RotationFitD fit = kearsley_fit(x, a, true);
    const Mat3<double> r = fit.rotation;
    ortho = std::max({ortho, (r.transpose() * r - Mat3<double>::Identity()).cwiseAbs().maxCoeff(),
                      std::abs(r.determinant() - 1.0)});
    drot = std::max(drot, rotation_derivative_check(x, a, h));

    const DistanceResult d = exact_distance(x, a);
    exact_grad = std::max(exact_grad, fd_rel_error(
                                          [&](const Coords<double>& c) {
                                            return exact_distance(with_coords(x, c), a).value;
                                          },
                                          x, d.grad, h));

    // Cache built at y, evaluated at a nearby x.
    ReferenceSet ref;
    ref.lambda = 10.0;
    for (int i = 0; i < 4; ++i) {
      ref.structures.push_back(random_centered(rng, n, w, wp));
      ref.properties.push_back(i);
    }
    CloseStructureState state(1e9);
    NeighbourList nl;
    step_close_structure(x, 0, state, nl, ref);
    StructureD moved = x;
    for (int j = 0; j < n; ++j) moved.coords.col(j) += 0.05 * Vec3<double>(g(rng), g(rng), g(rng));
    moved = center(moved);
    state.fit_xy = kearsley_fit(moved, state.y, true);
    const DistanceResult ad = approx_distance(moved, 1, state, ref);
    approx_grad = std::max(approx_grad, fd_rel_error(
                                            [&](const Coords<double>& c) {
                                              const StructureD xs = with_coords(moved, c);
                                              CloseStructureState s = state;
                                              s.fit_xy = kearsley_fit(xs, s.y, true);
                                              return approx_distance(xs, 1, s, ref).value;
                                            },
                                            moved, ad.grad, h));

    auto cv_of = [&](const StructureD& xs) {
      std::vector<IndexedDistance> ds;
      for (int i = 0; i < 4; ++i) ds.push_back({i, exact_distance(xs, ref.structures[static_cast<std::size_t>(i)])});
      return property_map(ds, ref);
    };
    const CVResult cv = cv_of(x);
    chain_grad = std::max(chain_grad, fd_rel_error([&](const Coords<double>& c) { return cv_of(with_coords(x, c)).value; },
                                                   x, cv.grad, h));

    HillStore store({0.3}, 1.0, 1);
    std::normal_distribution<double> s_noise(cv.value, 0.5);
    for (int k = 0; k < 10; ++k) store.deposit(std::vector<double>{s_noise(rng)}, k);
    const BiasResult b = bias_and_force(store, std::span<const CVResult>(&cv, 1));
    hill_grad = std::max(hill_grad, fd_rel_error(
                                        [&](const Coords<double>& c) {
                                          const double s = cv_of(with_coords(x, c)).value;
                                          return store.value(std::span<const double>(&s, 1));
                                        },
                                        x, -b.forces, h));
  }

  auto row = [](std::string name, double measured, double tol) {
    return CheckRow{std::move(name), measured, tol, measured <= tol};
  };
  return {
      row("rotation orthonormality |R^T R - I|, |det R - 1|", ortho, 1e-10),
      row("dR/dx vs finite differences (rel)", drot, 1e-5),
      row("exact distance gradient vs finite differences (rel)", exact_grad, 1e-5),
      row("cached-rotation distance gradient vs finite differences (rel)", approx_grad, 1e-5),
      row("property-map chain gradient vs finite differences (rel)", chain_grad, 1e-5),
      row("hill bias force vs finite differences (rel)", hill_grad, 1e-5),
  };
}

}  // namespace metadyn
