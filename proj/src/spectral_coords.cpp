#include "sigcomm/spectral_coords.hpp"

#include "sigcomm/error.hpp"
#include "sigcomm/linalg.hpp"
#include "sigcomm/modularity.hpp"
#include "sigcomm/random.hpp"

#include <cmath>

namespace sigcomm {

namespace {

SpectralCoordinates coordinates_from(const EigenDecomposition<double>& eig, int k) {
  const Eigen::Index n = eig.values.size();
  SpectralCoordinates out;
  out.eigenvalues = eig.descending_values();
  out.points.resize(n, k);
  for (int j = 0; j < k; ++j) out.points.col(j) = eig.vectors.col(n - 1 - j);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index arg = 0;
    out.points.row(i).cwiseAbs().maxCoeff(&arg);
    if (out.points(i, arg) < 0.0) out.points.row(i) *= -1.0;
  }
  out.basis_dependent = k < n && std::abs(out.eigenvalues(k - 1) - out.eigenvalues(k)) < 1e-9;
  return out;
}

}  // namespace

SpectralCoordinates spectral_coordinates(const SignedGraph& g, int k) {
  if (k < 1 || k > g.n())
    throw ConfigError("spectral coordinates: k = " + std::to_string(k) + " outside [1, " +
                    std::to_string(g.n()) + "]");
  return coordinates_from(eig_symmetric(signed_adjacency(g)), k);
}

MethodReport method_b(const SignedGraph& g, std::uint64_t seed, const MethodBOptions& opts) {
  if (g.n() < 1) throw DataError("method B needs a non-empty graph");
  if (opts.k_max < 1) throw ConfigError("method B: k_max must be positive");
  MethodReport report;
  report.method = Method::B;
  if (g.empty()) report.notes.push_back("graph has no edges; q_s recorded as 0");

  const auto eig = eig_symmetric(signed_adjacency(g));
  const int k_top = std::min(opts.k_max, g.n());
  for (int k = 1; k <= k_top; ++k) {
    const SpectralCoordinates coords = coordinates_from(eig, k);
    if (coords.basis_dependent)
      report.notes.push_back("k = " + std::to_string(k) +
                             ": repeated eigenvalue at the cut; coordinates depend on the eigenbasis");
    Clustering c = Clustering::single(g.n());
    if (k > 1) {
      const auto km = kmeans(coords.points, k, derive_seed(seed, {static_cast<std::uint64_t>(k)}));
      c = Clustering(km.assignment);
    }
    const double q = signed_modularity_or_zero(g, c);
    report.levels.push_back({std::move(c), std::nullopt, q});
  }
  report.chosen_level = argmax_q_s(report.levels);
  return report;
}

}  // namespace sigcomm
