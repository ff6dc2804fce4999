#pragma once

#include "sigcomm/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace sigcomm {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Eigenpairs of a symmetric matrix, eigenvalues ascending, column j of
/// `vectors` paired with `values(j)`.
template <typename Scalar>
struct EigenDecomposition {
  VectorX<Scalar> values;
  MatrixX<Scalar> vectors;
  int sweeps = 0;

  auto descending_values() const { return values.reverse(); }
  auto descending_vectors() const { return vectors.rowwise().reverse(); }
};

namespace detail {

template <typename Scalar>
Scalar off_diagonal_norm(const MatrixX<Scalar>& a) {
  Scalar s(0);
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

/// Flip v so its first entry with magnitude above tol is positive.
template <typename Derived>
void canonicalize_sign(Eigen::MatrixBase<Derived>&& v, typename Derived::Scalar tol) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > tol) {
      if (v(i) < 0) v = -v;
      return;
    }
  }
}

}  // namespace detail

inline constexpr int kJacobiMaxSweeps = 100;

/// Cyclic Jacobi eigensolver for dense symmetric matrices.
///
/// Rotations sweep the upper triangle in row-major order until the
/// off-diagonal Frobenius norm drops below 1e-12 * ||M||_F. Eigenvectors are
/// canonicalised so the first entry with |x| > 1e-12 is positive. Throws
/// DataError on asymmetric input and NumericError if 100 sweeps do not
/// converge.
template <typename Derived>
EigenDecomposition<typename Derived::Scalar> eig_symmetric(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = m.rows();
  if (n < 1 || m.cols() != n) throw DataError("eig_symmetric needs a non-empty square matrix");
  MatrixX<Scalar> a = m;
  const Scalar norm = a.norm();
  const Scalar sym_tol = Scalar(1e-12) * std::max(Scalar(1), norm);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(a(i, j) - a(j, i)) > sym_tol)
        throw DataError("eig_symmetric: matrix is not symmetric at (" + std::to_string(i + 1) +
                        ", " + std::to_string(j + 1) + ")");
  a = (a + a.transpose()) / Scalar(2);

  MatrixX<Scalar> v = MatrixX<Scalar>::Identity(n, n);
  const Scalar target = Scalar(1e-12) * norm;
  int sweep = 0;
  for (; detail::off_diagonal_norm(a) > target; ++sweep) {
    if (sweep == kJacobiMaxSweeps)
      throw NumericError("eig_symmetric: no convergence after " +
                         std::to_string(kJacobiMaxSweeps) + " sweeps");
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(Scalar(1) + theta * theta));
        const Scalar c = Scalar(1) / std::sqrt(Scalar(1) + t * t);
        const Scalar s = t * c;
        // A <- J^T A J with J the rotation in the (p, q) plane.
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = Scalar(0);
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });
  EigenDecomposition<Scalar> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  out.sweeps = sweep;
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values(j) = a(order[j], order[j]);
    out.vectors.col(j) = v.col(order[j]);
    detail::canonicalize_sign(out.vectors.col(j), Scalar(1e-12));
  }
  return out;
}

struct KMeansOptions {
  int restarts = 50;
  int max_iterations = 100;
};

struct KMeansResult {
  std::vector<int> assignment;  // 0..k-1
  Eigen::MatrixXd centroids;    // k x d
  double wcss = 0.0;
  int best_restart = 0;
  /// WCSS after each Lloyd iteration of the winning restart.
  std::vector<double> wcss_history;
};

/// Lloyd's algorithm with D^2-weighted seeding and restarts. Rows of
/// `points` are the points. Deterministic given the seed; the winner is the
/// restart with minimum WCSS, ties broken by restart index.
KMeansResult kmeans(const Eigen::Ref<const Eigen::MatrixXd>& points, int k, std::uint64_t seed,
                    const KMeansOptions& opts = {});

}  // namespace sigcomm
