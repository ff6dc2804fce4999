#include "sigcomm/fiedler.hpp"

#include "sigcomm/error.hpp"
#include "sigcomm/linalg.hpp"
#include "sigcomm/modularity.hpp"

#include <algorithm>

namespace sigcomm {

double normalized_algebraic_connectivity(const SignedGraph& g) {
  if (g.n() < 2) throw DataError("normalized algebraic connectivity needs >= 2 vertices");
  const Eigen::MatrixXd lap = normalized_laplacian(unsigned_view(g));  // throws on isolated vertices
  // exact zero when disconnected; the eigenvalue would only be zero to round-off
  if (connected_components(g).k() != 1) return 0.0;
  const auto eig = eig_symmetric(lap);
  return std::max(0.0, eig.values(1));
}

Bisection fiedler_bisect(const SignedGraph& g) {
  if (g.n() < 2) throw DataError("Fiedler bisection needs >= 2 vertices");
  if (connected_components(g).k() != 1)
    throw DataError("Fiedler bisection needs a connected graph; split by components first");
  const auto eig = eig_symmetric(laplacian(unsigned_view(g)));
  const Eigen::VectorXd x = eig.vectors.col(1);
  Bisection out;
  for (int v = 0; v < g.n(); ++v) (x(v) > 1e-12 ? out.second : out.first).push_back(v);
  return out;
}

namespace {

// Normalized algebraic connectivity of the subgraph induced by `members`,
// 0 when that subgraph is disconnected (including isolated vertices).
double cluster_connectivity(const SignedGraph& g, const std::vector<int>& members) {
  const SignedGraph sub = induced_subgraph(g, members);
  if (connected_components(sub).k() != 1) return 0.0;
  return normalized_algebraic_connectivity(sub);
}

// Two sides of a cluster: Fiedler split when connected, otherwise the
// largest component against the rest.
std::pair<std::vector<int>, std::vector<int>> split_cluster(const SignedGraph& g,
                                                            const std::vector<int>& members) {
  const SignedGraph sub = induced_subgraph(g, members);
  const Clustering comps = connected_components(sub);
  std::vector<int> a;
  std::vector<int> b;
  if (comps.k() > 1) {
    const auto parts = comps.clusters();
    // Largest component; ties go to the one with the smallest vertex (lowest id).
    std::size_t largest = 0;
    for (std::size_t c = 1; c < parts.size(); ++c)
      if (parts[c].size() > parts[largest].size()) largest = c;
    for (int local = 0; local < sub.n(); ++local)
      (comps[local] == static_cast<int>(largest) + 1 ? a : b).push_back(members[local]);
  } else {
    const Bisection bis = fiedler_bisect(sub);
    for (int local : bis.first) a.push_back(members[local]);
    for (int local : bis.second) b.push_back(members[local]);
  }
  return {a, b};
}

}  // namespace

MethodReport method_a(const SignedGraph& g) {
  if (g.n() < 1) throw DataError("method A needs a non-empty graph");
  MethodReport report;
  report.method = Method::A;
  if (g.empty()) report.notes.push_back("graph has no edges; q_s recorded as 0");
  const SignedGraph magnitudes = unsigned_view(g);

  Clustering current = Clustering::single(g.n());
  report.levels.push_back({current, std::nullopt, signed_modularity_or_zero(g, current)});

  // Normalized algebraic connectivity of each current cluster.
  std::vector<std::vector<int>> clusters{current.members(1)};
  std::vector<double> connectivity{
      g.n() >= 2 ? cluster_connectivity(magnitudes, clusters[0]) : 0.0};

  while (static_cast<int>(clusters.size()) < g.n()) {
    std::size_t pick = clusters.size();
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      if (clusters[c].size() < 2) continue;
      if (pick == clusters.size() || connectivity[c] < connectivity[pick] ||
          (connectivity[c] == connectivity[pick] && clusters[c].front() < clusters[pick].front()))
        pick = c;
    }
    auto [a, b] = split_cluster(magnitudes, clusters[pick]);
    clusters[pick] = std::move(a);
    clusters.push_back(std::move(b));
    connectivity[pick] =
        clusters[pick].size() >= 2 ? cluster_connectivity(magnitudes, clusters[pick]) : 0.0;
    connectivity.push_back(
        clusters.back().size() >= 2 ? cluster_connectivity(magnitudes, clusters.back()) : 0.0);

    Clustering next = Clustering::from_clusters(g.n(), clusters);
    report.levels.push_back({next, find_split(current, next), signed_modularity_or_zero(g, next)});
    current = std::move(next);
  }
  report.chosen_level = argmax_q_s(report.levels);
  return report;
}

}  // namespace sigcomm
