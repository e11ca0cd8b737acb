#pragma once

// Shared generators and independent oracles for the unit and acceptance
// suites. Nothing here calls into the eigen-decomposition path, so it can be
// used to check that path.

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "metadyn/geometry.hpp"

namespace metadyn::testing {

inline Mat3<double> random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

/// Random centered structure with random positive weights (normalized).
inline StructureD random_structure(std::mt19937_64& rng, int n_atoms, bool uniform_weights = false,
                                   double spread = 0.5) {
  std::normal_distribution<double> g(0.0, spread);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  Coords<double> c(3, n_atoms);
  for (int j = 0; j < n_atoms; ++j) c.col(j) = Vec3<double>(g(rng), g(rng), g(rng));
  Weights<double> w = Weights<double>::Ones(n_atoms);
  Weights<double> wp = Weights<double>::Ones(n_atoms);
  if (!uniform_weights) {
    for (int j = 0; j < n_atoms; ++j) w(j) = u(rng);
    for (int j = 0; j < n_atoms; ++j) wp(j) = u(rng);
  }
  return center(make_structure<double>(c, w, wp));
}

/// Same atoms, same weights as `like`, new random coordinates near `like`.
inline StructureD perturbed(const StructureD& like, std::mt19937_64& rng, double amplitude) {
  std::normal_distribution<double> g(0.0, amplitude);
  StructureD s = like;
  for (Eigen::Index j = 0; j < s.size(); ++j) s.coords.col(j) += Vec3<double>(g(rng), g(rng), g(rng));
  return center(s);
}

/// Structure `a` rebadged with the weights of `x` (fits use the current
/// structure's weights).
inline StructureD with_weights_of(StructureD a, const StructureD& x) {
  a.disp = x.disp;
  a.align = x.align;
  return center(a);
}

inline double residual_of_quaternion(const StructureD& x, const StructureD& a, const Vec4<double>& q) {
  return weighted_residual(x, a, quaternion_to_rotation<double>(q.normalized()));
}

/// Brute-force minimal residual over proper rotations: evaluates every point
/// of a 32^4 lattice on [-1,1]^4 projected to the unit sphere (~10^6
/// quaternions), then refines the best one by a shrinking coordinate pattern
/// search.
inline double brute_force_min_residual(const StructureD& x, const StructureD& a, int per_dim = 32) {
  Vec4<double> best_q(1, 0, 0, 0);
  double best = residual_of_quaternion(x, a, best_q);
  for (int i0 = 0; i0 < per_dim; ++i0) {
    for (int i1 = 0; i1 < per_dim; ++i1) {
      for (int i2 = 0; i2 < per_dim; ++i2) {
        for (int i3 = 0; i3 < per_dim; ++i3) {
          auto coord = [&](int i) { return -1.0 + (2.0 * i + 1.0) / per_dim; };
          Vec4<double> q(coord(i0), coord(i1), coord(i2), coord(i3));
          const double r = residual_of_quaternion(x, a, q);
          if (r < best) {
            best = r;
            best_q = q.normalized();
          }
        }
      }
    }
  }
  double step = 2.0 / per_dim;
  while (step > 1e-13) {
    bool improved = false;
    for (int i = 0; i < 4; ++i) {
      for (double sgn : {1.0, -1.0}) {
        Vec4<double> q = best_q;
        q(i) += sgn * step;
        q.normalize();
        const double r = residual_of_quaternion(x, a, q);
        if (r < best) {
          best = r;
          best_q = q;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

/// Central finite-difference gradient of a scalar function of raw coordinates.
inline Coords<double> fd_gradient(const std::function<double(const Coords<double>&)>& f,
                                  const Coords<double>& x, double h) {
  Coords<double> g(3, x.cols());
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    for (int alpha = 0; alpha < 3; ++alpha) {
      Coords<double> p = x;
      Coords<double> m = x;
      p(alpha, k) += h;
      m(alpha, k) -= h;
      g(alpha, k) = (f(p) - f(m)) / (2 * h);
    }
  }
  return g;
}

/// max |a - b| / max(max |b|, floor)
inline double rel_error(const Coords<double>& a, const Coords<double>& b, double floor = 1e-8) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), floor);
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace metadyn::testing
