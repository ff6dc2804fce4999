#pragma once

#include "sigcomm/connectivity.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <span>
#include <vector>

namespace sigcomm {

/// Undirected edge {i, j} (0-based, i < j) with weight in (0, 1] and sign +-1.
struct Edge {
  int i = 0;
  int j = 0;
  double weight = 1.0;
  int sign = 1;

  double signed_weight() const noexcept { return sign * weight; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Signed weighted undirected graph without loops or parallel edges.
/// Edges are kept sorted by (i, j).
class SignedGraph {
 public:
  SignedGraph() = default;
  SignedGraph(int n, std::vector<Edge> edges);

  int n() const noexcept { return n_; }
  std::size_t m() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool empty() const noexcept { return edges_.empty(); }

  /// Same vertices and weights, every sign flipped.
  SignedGraph negated() const;
  /// Every weight multiplied by a positive factor; the result must stay within (0, 1].
  SignedGraph scaled(double factor) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

/// Vertex partition with cluster ids 1..k, numbered in order of each
/// cluster's smallest vertex. Two clusterings compare equal iff they are the
/// same partition.
class Clustering {
 public:
  Clustering() = default;
  /// Arbitrary integer labels; relabelled canonically.
  explicit Clustering(std::span<const int> labels);
  explicit Clustering(const std::vector<int>& labels)
      : Clustering(std::span<const int>(labels)) {}

  static Clustering single(int n) { return Clustering(std::vector<int>(static_cast<std::size_t>(n), 0)); }
  static Clustering singletons(int n);
  /// Build from explicit member lists covering 0..n-1 exactly once.
  static Clustering from_clusters(int n, const std::vector<std::vector<int>>& clusters);

  int n() const noexcept { return static_cast<int>(assignment_.size()); }
  int k() const noexcept { return k_; }
  /// Cluster id (1-based) of a vertex.
  int operator[](int v) const { return assignment_[static_cast<std::size_t>(v)]; }
  const std::vector<int>& assignment() const noexcept { return assignment_; }
  std::vector<std::vector<int>> clusters() const;
  std::vector<int> members(int id) const;

  friend bool operator==(const Clustering&, const Clustering&) = default;

 private:
  std::vector<int> assignment_;
  int k_ = 0;
};

/// One edge per off-diagonal pair with |value| > threshold; diagonal ignored.
SignedGraph from_connectivity(const ConnectivityMatrix& m, double threshold = 0.0);
SignedGraph from_signed_matrix(const Eigen::Ref<const Eigen::MatrixXd>& values,
                               double threshold = 0.0);

Eigen::MatrixXd adjacency(const SignedGraph& g);
Eigen::MatrixXd signed_adjacency(const SignedGraph& g);
Eigen::VectorXd degrees(const SignedGraph& g);
/// L = D - A on the unsigned weights.
Eigen::MatrixXd laplacian(const SignedGraph& g);
/// D^{-1/2} L D^{-1/2}; throws DataError on an isolated vertex.
Eigen::MatrixXd normalized_laplacian(const SignedGraph& g);

struct SignSplit {
  SignedGraph positive;
  SignedGraph negative;  // stored with sign +1 (magnitudes)
};
SignSplit split_signs(const SignedGraph& g);

/// Same edges with every sign set to +1.
SignedGraph unsigned_view(const SignedGraph& g);

/// Components by breadth-first traversal over all edges regardless of sign.
Clustering connected_components(const SignedGraph& g);

/// Subgraph induced by `vertices`, relabelled 0..|vertices|-1 in the given order.
SignedGraph induced_subgraph(const SignedGraph& g, std::span<const int> vertices);

double total_weight(const SignedGraph& g);

nlohmann::json to_json(const SignedGraph& g);
SignedGraph graph_from_json(const nlohmann::json& j);

}  // namespace sigcomm
