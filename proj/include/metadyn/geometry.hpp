#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "metadyn/errors.hpp"
#include "metadyn/jacobi.hpp"

namespace metadyn {

template <typename Scalar>
using Coords = Eigen::Matrix<Scalar, 3, Eigen::Dynamic>;
template <typename Scalar>
using Weights = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Mat4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vec4 = Eigen::Matrix<Scalar, 4, 1>;

/// Atom coordinates (one column per atom, nm) with displacement weights `disp`
/// (w, governs the residual) and alignment weights `align` (w', governs the
/// centroid used for translation removal).
template <typename Scalar>
struct Structure {
  Coords<Scalar> coords;
  Weights<Scalar> disp;
  Weights<Scalar> align;

  Eigen::Index size() const { return coords.cols(); }
};

using StructureD = Structure<double>;

/// Validates sizes and finiteness, then rescales both weight vectors to sum 1.
template <typename Scalar>
Structure<Scalar> make_structure(Coords<Scalar> coords, Weights<Scalar> disp, Weights<Scalar> align) {
  const Eigen::Index n = coords.cols();
  if (n < 2) throw InvalidStructure("structure needs at least 2 atoms");
  if (disp.size() != n || align.size() != n)
    throw InvalidStructure("weight vectors must have one entry per atom");
  if (!coords.allFinite() || !disp.allFinite() || !align.allFinite())
    throw InvalidStructure("non-finite coordinate or weight");
  if ((disp.array() < Scalar(0)).any() || (align.array() < Scalar(0)).any())
    throw InvalidStructure("negative weight");
  const Scalar dsum = disp.sum();
  const Scalar asum = align.sum();
  if (!(dsum > Scalar(0))) throw InvalidStructure("all displacement weights are zero");
  if (!(asum > Scalar(0))) throw InvalidStructure("all alignment weights are zero");
  return {std::move(coords), disp / dsum, align / asum};
}

template <typename Scalar>
Structure<Scalar> make_structure(Coords<Scalar> coords) {
  const Eigen::Index n = coords.cols();
  return make_structure<Scalar>(std::move(coords), Weights<Scalar>::Ones(n), Weights<Scalar>::Ones(n));
}

template <typename Scalar>
Vec3<Scalar> alignment_centroid(const Structure<Scalar>& s) {
  return s.coords * s.align;
}

/// Shifts the coordinates so the alignment-weighted centroid is zero.
template <typename Scalar>
Structure<Scalar> center(const Structure<Scalar>& s) {
  if (s.align.size() != s.size() || !(s.align.sum() > Scalar(0)))
    throw InvalidStructure("cannot center: alignment weights are empty or all zero");
  Structure<Scalar> out = s;
  out.coords.colwise() -= alignment_centroid(s);
  return out;
}

template <typename Scalar>
bool is_centered(const Structure<Scalar>& s, Scalar tol = Scalar(1e-12)) {
  return alignment_centroid(s).cwiseAbs().maxCoeff() <= tol;
}

/// Rotation matrix of a unit quaternion (scalar part first).
template <typename Scalar>
Mat3<Scalar> quaternion_to_rotation(const Vec4<Scalar>& q) {
  const Scalar q0 = q(0), q1 = q(1), q2 = q(2), q3 = q(3);
  Mat3<Scalar> r;
  r << q0 * q0 + q1 * q1 - q2 * q2 - q3 * q3, 2 * (q1 * q2 - q0 * q3), 2 * (q1 * q3 + q0 * q2),
      2 * (q1 * q2 + q0 * q3), q0 * q0 - q1 * q1 + q2 * q2 - q3 * q3, 2 * (q2 * q3 - q0 * q1),
      2 * (q1 * q3 - q0 * q2), 2 * (q2 * q3 + q0 * q1), q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3;
  return r;
}

/// Directional derivative of quaternion_to_rotation at q along dq.
template <typename Scalar>
Mat3<Scalar> quaternion_to_rotation_derivative(const Vec4<Scalar>& q, const Vec4<Scalar>& d) {
  const Scalar q0 = q(0), q1 = q(1), q2 = q(2), q3 = q(3);
  const Scalar d0 = d(0), d1 = d(1), d2 = d(2), d3 = d(3);
  Mat3<Scalar> r;
  r << 2 * (q0 * d0 + q1 * d1 - q2 * d2 - q3 * d3), 2 * (d1 * q2 + q1 * d2 - d0 * q3 - q0 * d3),
      2 * (d1 * q3 + q1 * d3 + d0 * q2 + q0 * d2),
      2 * (d1 * q2 + q1 * d2 + d0 * q3 + q0 * d3), 2 * (q0 * d0 - q1 * d1 + q2 * d2 - q3 * d3),
      2 * (d2 * q3 + q2 * d3 - d0 * q1 - q0 * d1),
      2 * (d1 * q3 + q1 * d3 - d0 * q2 - q0 * d2), 2 * (d2 * q3 + q2 * d3 + d0 * q1 + q0 * d1),
      2 * (q0 * d0 - q1 * d1 - q2 * d2 + q3 * d3);
  return r;
}

/// Kearsley's 4x4 matrix for one atom pair, built from the difference
/// m = x - a and sum p = x + a. For a unit quaternion q,
/// q^T K q == |x - R(q) a|^2.
template <typename Scalar>
Mat4<Scalar> kearsley_block(const Vec3<Scalar>& x, const Vec3<Scalar>& a) {
  const Vec3<Scalar> m = x - a;
  const Vec3<Scalar> p = x + a;
  Mat4<Scalar> k;
  k(0, 0) = m.squaredNorm();
  k(1, 1) = m(0) * m(0) + p(1) * p(1) + p(2) * p(2);
  k(2, 2) = m(1) * m(1) + p(0) * p(0) + p(2) * p(2);
  k(3, 3) = m(2) * m(2) + p(0) * p(0) + p(1) * p(1);
  k(0, 1) = m(1) * p(2) - m(2) * p(1);
  k(0, 2) = m(2) * p(0) - m(0) * p(2);
  k(0, 3) = m(0) * p(1) - m(1) * p(0);
  k(1, 2) = m(0) * m(1) - p(0) * p(1);
  k(1, 3) = m(0) * m(2) - p(0) * p(2);
  k(2, 3) = m(1) * m(2) - p(1) * p(2);
  k(1, 0) = k(0, 1);
  k(2, 0) = k(0, 2);
  k(3, 0) = k(0, 3);
  k(2, 1) = k(1, 2);
  k(3, 1) = k(1, 3);
  k(3, 2) = k(2, 3);
  return k;
}

/// Weighted Kearsley matrix sum_j w_j K(x_j, a_j), weights taken from x.disp.
template <typename Scalar>
Mat4<Scalar> kearsley_matrix(const Structure<Scalar>& x, const Structure<Scalar>& a) {
  Mat4<Scalar> m = Mat4<Scalar>::Zero();
  for (Eigen::Index j = 0; j < x.size(); ++j)
    m += x.disp(j) * kearsley_block<Scalar>(x.coords.col(j), a.coords.col(j));
  return m;
}

/// The linear map S -> N(S) with x . R(q) a == q^T N(S) q for S = a x^T.
/// The Kearsley matrix equals (|x|^2 + |a|^2) I - 2 N(S).
template <typename Scalar>
Mat4<Scalar> quaternion_cross_matrix(const Mat3<Scalar>& s) {
  Mat4<Scalar> n;
  n << s(0, 0) + s(1, 1) + s(2, 2), s(1, 2) - s(2, 1), s(2, 0) - s(0, 2), s(0, 1) - s(1, 0),
      s(1, 2) - s(2, 1), s(0, 0) - s(1, 1) - s(2, 2), s(0, 1) + s(1, 0), s(0, 2) + s(2, 0),
      s(2, 0) - s(0, 2), s(0, 1) + s(1, 0), -s(0, 0) + s(1, 1) - s(2, 2), s(1, 2) + s(2, 1),
      s(0, 1) - s(1, 0), s(0, 2) + s(2, 0), s(1, 2) + s(2, 1), -s(0, 0) - s(1, 1) + s(2, 2);
  return n;
}

template <typename Scalar>
struct RotationFit {
  Mat3<Scalar> rotation = Mat3<Scalar>::Identity();
  Vec4<Scalar> quat = Vec4<Scalar>(1, 0, 0, 0);
  Vec4<Scalar> eigvals = Vec4<Scalar>::Zero();
  // d rotation / d x_{k,alpha} at index 3k + alpha; empty when not requested.
  // Derivatives are with respect to the raw coordinates of x, so they include
  // the dependence through alignment-weighted centering.
  std::vector<Mat3<Scalar>> drot;

  bool has_derivatives() const { return !drot.empty(); }
  const Mat3<Scalar>& d_rotation(Eigen::Index atom, int alpha) const { return drot[3 * atom + alpha]; }
};

using RotationFitD = RotationFit<double>;

/// Optimal proper rotation R minimizing sum_j w_j |x_j - R a_j|^2 by Kearsley's
/// quaternion method. Both structures must already be centered; x's
/// displacement weights define the residual and x's alignment weights define
/// the centering that dR/dx accounts for.
template <typename Scalar>
RotationFit<Scalar> kearsley_fit(const Structure<Scalar>& x, const Structure<Scalar>& a,
                                 bool with_derivatives = false) {
  if (x.size() != a.size())
    throw InvalidStructure("atom count mismatch: " + std::to_string(x.size()) + " vs " +
                           std::to_string(a.size()));
  const Eigen::Index n = x.size();

  const auto eig = jacobi_eigen<Scalar, 4>(kearsley_matrix(x, a));
  RotationFit<Scalar> fit;
  fit.eigvals = eig.values;

  Vec4<Scalar> q = eig.vectors.col(0);
  Eigen::Index imax = 0;
  q.cwiseAbs().maxCoeff(&imax);
  if (q(imax) < Scalar(0)) q = -q;
  q.normalize();
  fit.quat = q;
  fit.rotation = quaternion_to_rotation<Scalar>(q);

  if (!with_derivatives) return fit;

  if (fit.eigvals(1) - fit.eigvals(0) < Scalar(1e-9))
    throw DegenerateFit("smallest Kearsley eigenvalue is degenerate; rotation derivative undefined");

  // First-order perturbation of the ground eigenvector:
  // dq = sum_{m>0} (v_m^T dM q) / (l_0 - l_m) v_m.
  // dM/dxc_{j,alpha} = w_j (2 xc_{j,alpha} I - 2 N(a_j e_alpha^T)); centering
  // adds -w'_k * sum_j dM/dxc_{j,alpha}.
  Eigen::Matrix<Scalar, 4, 3> proj;  // column m-1: v_m / (l_0 - l_m)
  for (int m = 1; m < 4; ++m)
    proj.col(m - 1) = eig.vectors.col(m) / (fit.eigvals(0) - fit.eigvals(m));

  auto dm_dxc = [&](const Vec3<Scalar>& xc, const Vec3<Scalar>& aj, Scalar w, int alpha) {
    Mat3<Scalar> s = Mat3<Scalar>::Zero();
    s.col(alpha) = aj;
    Mat4<Scalar> d = Scalar(-2) * quaternion_cross_matrix<Scalar>(s);
    d.diagonal().array() += Scalar(2) * xc(alpha);
    return Mat4<Scalar>(w * d);
  };

  const Vec3<Scalar> wx = x.coords * x.disp;
  const Vec3<Scalar> wa = a.coords * x.disp;
  std::array<Mat4<Scalar>, 3> dm_total;
  for (int alpha = 0; alpha < 3; ++alpha) dm_total[alpha] = dm_dxc(wx, wa, Scalar(1), alpha);

  auto drot_from_dm = [&](const Mat4<Scalar>& dm) {
    const Vec4<Scalar> dq = proj * (eig.vectors.template rightCols<3>().transpose() * (dm * q));
    return quaternion_to_rotation_derivative<Scalar>(q, dq);
  };

  fit.drot.resize(static_cast<std::size_t>(3 * n));
  for (Eigen::Index k = 0; k < n; ++k) {
    for (int alpha = 0; alpha < 3; ++alpha) {
      const Mat4<Scalar> dm = dm_dxc(x.coords.col(k), a.coords.col(k), x.disp(k), alpha) -
                              x.align(k) * dm_total[alpha];
      fit.drot[3 * k + alpha] = drot_from_dm(dm);
    }
  }
  return fit;
}

/// sum_j w_j |x_j - R a_j|^2 with w from x.
template <typename Scalar>
Scalar weighted_residual(const Structure<Scalar>& x, const Structure<Scalar>& a, const Mat3<Scalar>& r) {
  return ((x.coords - r * a.coords).colwise().squaredNorm() * x.disp)(0);
}

/// Compares fit.drot against central finite differences of the fitted rotation
/// under perturbations of x (re-centered after each perturbation). Returns the
/// largest absolute deviation divided by the largest finite-difference entry.
template <typename Scalar>
Scalar rotation_derivative_check(const Structure<Scalar>& x, const Structure<Scalar>& a, Scalar h) {
  const auto fit = kearsley_fit(x, a, true);
  Scalar max_dev(0);
  Scalar max_ref(0);
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    for (int alpha = 0; alpha < 3; ++alpha) {
      Structure<Scalar> plus = x;
      Structure<Scalar> minus = x;
      plus.coords(alpha, k) += h;
      minus.coords(alpha, k) -= h;
      const Mat3<Scalar> rp = kearsley_fit(center(plus), a).rotation;
      const Mat3<Scalar> rm = kearsley_fit(center(minus), a).rotation;
      const Mat3<Scalar> fd = (rp - rm) / (Scalar(2) * h);
      max_dev = std::max(max_dev, (fd - fit.d_rotation(k, alpha)).cwiseAbs().maxCoeff());
      max_ref = std::max(max_ref, fd.cwiseAbs().maxCoeff());
    }
  }
  return max_dev / std::max(max_ref, Scalar(1e-12));
}

}  // namespace metadyn
