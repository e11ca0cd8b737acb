#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace metadyn {

template <typename Scalar, int Size>
struct SymmetricEigen {
  Eigen::Matrix<Scalar, Size, 1> values;        // ascending
  Eigen::Matrix<Scalar, Size, Size> vectors;    // column i pairs with values(i)
  int sweeps = 0;
};

/// Cyclic Jacobi diagonalization of a small symmetric matrix.
///
/// Sweeps over all off-diagonal pairs until the off-diagonal Frobenius norm
/// drops below `tol * max(1, ||A||_F)`. Eigenpairs are returned sorted by
/// ascending eigenvalue. Deterministic: the rotation order is fixed.
template <typename Scalar, int Size>
SymmetricEigen<Scalar, Size> jacobi_eigen(const Eigen::Matrix<Scalar, Size, Size>& input,
                                          Scalar tol = Scalar(1e-14), int max_sweeps = 100) {
  using std::abs;
  using std::sqrt;
  Eigen::Matrix<Scalar, Size, Size> a = input;
  Eigen::Matrix<Scalar, Size, Size> v = Eigen::Matrix<Scalar, Size, Size>::Identity();
  const Scalar scale = std::max(Scalar(1), a.norm());

  auto off_norm = [&] {
    Scalar s(0);
    for (int p = 0; p < Size; ++p)
      for (int q = 0; q < Size; ++q)
        if (p != q) s += a(p, q) * a(p, q);
    return sqrt(s);
  };

  int sweep = 0;
  for (; sweep < max_sweeps && off_norm() >= tol * scale; ++sweep) {
    for (int p = 0; p < Size - 1; ++p) {
      for (int q = p + 1; q < Size; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        // Rotation angle that annihilates a(p,q); stable form from Golub & Van Loan.
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        const Scalar sgn = theta >= Scalar(0) ? Scalar(1) : Scalar(-1);
        const Scalar t = sgn / (abs(theta) + sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        for (int k = 0; k < Size; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < Size; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < Size; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<int, Size> order;
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

  SymmetricEigen<Scalar, Size> out;
  out.sweeps = sweep;
  for (int i = 0; i < Size; ++i) {
    out.values(i) = a(order[i], order[i]);
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

}  // namespace metadyn
