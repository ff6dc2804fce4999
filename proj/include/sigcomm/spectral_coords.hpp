#pragma once

#include "sigcomm/report.hpp"

#include <Eigen/Dense>

#include <cstdint>

namespace sigcomm {

struct SpectralCoordinates {
  /// n x k; row i is the point of vertex i.
  Eigen::MatrixXd points;
  /// Eigenvalues of S in descending order (all n of them).
  Eigen::VectorXd eigenvalues;
  /// True when lambda_k and lambda_{k+1} are within 1e-9, i.e. the
  /// coordinates depend on the basis chosen inside a repeated eigenspace.
  bool basis_dependent = false;
};

/// Rows of the top-k eigenvectors of the signed adjacency matrix, each
/// eigenvector in canonical sign, then each row flipped so that its
/// largest-magnitude coordinate is positive.
SpectralCoordinates spectral_coordinates(const SignedGraph& g, int k);

struct MethodBOptions {
  int k_max = 8;
};

/// k-means on spectral coordinates for k = 1..min(k_max, n); the level with
/// the highest signed modularity is chosen (ties to the smallest k).
MethodReport method_b(const SignedGraph& g, std::uint64_t seed, const MethodBOptions& opts = {});

}  // namespace sigcomm
