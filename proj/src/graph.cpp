#include "sigcomm/graph.hpp"

#include "sigcomm/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace sigcomm {

SignedGraph::SignedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 0) throw DataError("vertex count must be non-negative");
  for (auto& e : edges_) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i < 0 || e.j >= n_) throw DataError("edge endpoint out of range");
    if (e.i == e.j) throw DataError("self-loop on vertex " + std::to_string(e.i + 1));
    if (!(e.weight > 0.0 && e.weight <= 1.0))
      throw DataError("edge weight must lie in (0, 1], got " + std::to_string(e.weight));
    if (e.sign != 1 && e.sign != -1) throw DataError("edge sign must be +1 or -1");
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
  for (std::size_t k = 1; k < edges_.size(); ++k)
    if (edges_[k].i == edges_[k - 1].i && edges_[k].j == edges_[k - 1].j)
      throw DataError("duplicate edge {" + std::to_string(edges_[k].i + 1) + ", " +
                      std::to_string(edges_[k].j + 1) + "}");
}

SignedGraph SignedGraph::negated() const {
  auto edges = edges_;
  for (auto& e : edges) e.sign = -e.sign;
  return SignedGraph(n_, std::move(edges));
}

SignedGraph SignedGraph::scaled(double factor) const {
  auto edges = edges_;
  for (auto& e : edges) e.weight *= factor;
  return SignedGraph(n_, std::move(edges));
}

Clustering::Clustering(std::span<const int> labels) {
  assignment_.resize(labels.size());
  std::vector<std::pair<int, int>> seen;  // (label, id)
  for (std::size_t v = 0; v < labels.size(); ++v) {
    auto it = std::find_if(seen.begin(), seen.end(),
                           [&](const auto& p) { return p.first == labels[v]; });
    if (it == seen.end()) {
      seen.emplace_back(labels[v], static_cast<int>(seen.size()) + 1);
      it = seen.end() - 1;
    }
    assignment_[v] = it->second;
  }
  k_ = static_cast<int>(seen.size());
}

Clustering Clustering::singletons(int n) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) labels[v] = v;
  return Clustering(labels);
}

Clustering Clustering::from_clusters(int n, const std::vector<std::vector<int>>& clusters) {
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (clusters[c].empty()) throw DataError("clusters must be non-empty");
    for (int v : clusters[c]) {
      if (v < 0 || v >= n) throw DataError("cluster member out of range");
      if (labels[v] != -1) throw DataError("vertex " + std::to_string(v + 1) + " in two clusters");
      labels[v] = static_cast<int>(c);
    }
  }
  if (std::find(labels.begin(), labels.end(), -1) != labels.end())
    throw DataError("clusters do not cover every vertex");
  return Clustering(labels);
}

std::vector<std::vector<int>> Clustering::clusters() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(k_));
  for (int v = 0; v < n(); ++v) out[assignment_[v] - 1].push_back(v);
  return out;
}

std::vector<int> Clustering::members(int id) const {
  std::vector<int> out;
  for (int v = 0; v < n(); ++v)
    if (assignment_[v] == id) out.push_back(v);
  return out;
}

SignedGraph from_signed_matrix(const Eigen::Ref<const Eigen::MatrixXd>& values, double threshold) {
  if (values.rows() != values.cols()) throw DataError("connectivity matrix must be square");
  if (!(threshold >= 0.0 && threshold < 1.0))
    throw ConfigError("threshold must lie in [0, 1), got " + std::to_string(threshold));
  const auto n = static_cast<int>(values.rows());
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = values(i, j);
      if (std::abs(v - values(j, i)) > 1e-12) throw DataError("connectivity matrix is not symmetric");
      if (std::abs(v) > threshold && v != 0.0)
        edges.push_back({i, j, std::abs(v), v > 0.0 ? 1 : -1});
    }
  }
  return SignedGraph(n, std::move(edges));
}

SignedGraph from_connectivity(const ConnectivityMatrix& m, double threshold) {
  return from_signed_matrix(m.values, threshold);
}

Eigen::MatrixXd adjacency(const SignedGraph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n(), g.n());
  for (const auto& e : g.edges()) a(e.i, e.j) = a(e.j, e.i) = e.weight;
  return a;
}

Eigen::MatrixXd signed_adjacency(const SignedGraph& g) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(g.n(), g.n());
  for (const auto& e : g.edges()) s(e.i, e.j) = s(e.j, e.i) = e.signed_weight();
  return s;
}

Eigen::VectorXd degrees(const SignedGraph& g) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(g.n());
  for (const auto& e : g.edges()) {
    d(e.i) += e.weight;
    d(e.j) += e.weight;
  }
  return d;
}

Eigen::MatrixXd laplacian(const SignedGraph& g) {
  Eigen::MatrixXd l = -adjacency(g);
  // Diagonal as the negated off-diagonal row sum so rows sum to zero exactly
  // up to a single rounding.
  for (int i = 0; i < g.n(); ++i) l(i, i) = -l.row(i).sum();
  return l;
}

Eigen::MatrixXd normalized_laplacian(const SignedGraph& g) {
  const Eigen::VectorXd d = degrees(g);
  for (int i = 0; i < g.n(); ++i)
    if (d(i) <= 0.0)
      throw DataError("normalized Laplacian undefined: vertex " + std::to_string(i + 1) +
                      " is isolated");
  const Eigen::VectorXd inv_sqrt = d.cwiseSqrt().cwiseInverse();
  return inv_sqrt.asDiagonal() * laplacian(g) * inv_sqrt.asDiagonal();
}

SignSplit split_signs(const SignedGraph& g) {
  std::vector<Edge> pos;
  std::vector<Edge> neg;
  for (auto e : g.edges()) {
    if (e.sign > 0) {
      pos.push_back(e);
    } else {
      e.sign = 1;
      neg.push_back(e);
    }
  }
  return {SignedGraph(g.n(), std::move(pos)), SignedGraph(g.n(), std::move(neg))};
}

SignedGraph unsigned_view(const SignedGraph& g) {
  auto edges = g.edges();
  for (auto& e : edges) e.sign = 1;
  return SignedGraph(g.n(), std::move(edges));
}

Clustering connected_components(const SignedGraph& g) {
  std::vector<std::vector<int>> nbrs(static_cast<std::size_t>(g.n()));
  for (const auto& e : g.edges()) {
    nbrs[e.i].push_back(e.j);
    nbrs[e.j].push_back(e.i);
  }
  std::vector<int> label(static_cast<std::size_t>(g.n()), -1);
  int next = 0;
  for (int s = 0; s < g.n(); ++s) {
    if (label[s] != -1) continue;
    std::deque<int> queue{s};
    label[s] = next;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : nbrs[u]) {
        if (label[v] == -1) {
          label[v] = next;
          queue.push_back(v);
        }
      }
    }
    ++next;
  }
  return Clustering(label);
}

SignedGraph induced_subgraph(const SignedGraph& g, std::span<const int> vertices) {
  std::vector<int> local(static_cast<std::size_t>(g.n()), -1);
  for (std::size_t k = 0; k < vertices.size(); ++k) local[vertices[k]] = static_cast<int>(k);
  std::vector<Edge> edges;
  for (auto e : g.edges()) {
    if (local[e.i] < 0 || local[e.j] < 0) continue;
    e.i = local[e.i];
    e.j = local[e.j];
    edges.push_back(e);
  }
  return SignedGraph(static_cast<int>(vertices.size()), std::move(edges));
}

double total_weight(const SignedGraph& g) {
  double w = 0.0;
  for (const auto& e : g.edges()) w += e.weight;
  return w;
}

nlohmann::json to_json(const SignedGraph& g) {
  auto edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.i + 1, e.j + 1, e.weight, e.sign});
  return {{"n", g.n()}, {"edges", edges}};
}

SignedGraph graph_from_json(const nlohmann::json& j) {
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges"))
    edges.push_back({e.at(0).get<int>() - 1, e.at(1).get<int>() - 1, e.at(2).get<double>(),
                     e.at(3).get<int>()});
  return SignedGraph(j.at("n").get<int>(), std::move(edges));
}

}  // namespace sigcomm
