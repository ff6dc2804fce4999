#include "sigcomm/girvan_newman.hpp"

#include "sigcomm/error.hpp"
#include "sigcomm/modularity.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <queue>

namespace sigcomm {

std::string to_string(PathLength p) { return p == PathLength::hops ? "hops" : "inverse-weight"; }

PathLength parse_path_length(const std::string& name) {
  if (name == "hops") return PathLength::hops;
  if (name == "inverse-weight") return PathLength::inverse_weight;
  throw ConfigError("unknown path length '" + name + "' (expected hops or inverse-weight)");
}

namespace {

struct Arc {
  int to;
  std::size_t edge;
  double length;
};

using Adjacency = std::vector<std::vector<Arc>>;

Adjacency build_adjacency(int n, const std::vector<Edge>& edges, const std::vector<bool>& alive,
                          PathLength length) {
  Adjacency adj(static_cast<std::size_t>(n));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!alive[e]) continue;
    const double len = length == PathLength::hops ? 1.0 : 1.0 / edges[e].weight;
    adj[edges[e].i].push_back({edges[e].j, e, len});
    adj[edges[e].j].push_back({edges[e].i, e, len});
  }
  return adj;
}

bool same_length(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

// Single-source shortest paths with path counting, then dependency
// accumulation in reverse settling order. Adds each source's contribution
// (ordered pairs) to `acc`.
void accumulate(const Adjacency& adj, const std::vector<int>& sources, std::vector<double>& acc) {
  const std::size_t n = adj.size();
  std::vector<double> dist(n);
  std::vector<double> sigma(n);
  std::vector<double> delta(n);
  std::vector<std::vector<std::pair<int, std::size_t>>> preds(n);
  std::vector<int> order;
  std::vector<bool> settled(n);
  using Item = std::pair<double, int>;
  for (int s : sources) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(settled.begin(), settled.end(), false);
    for (auto& p : preds) p.clear();
    order.clear();
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[s] = 0.0;
    sigma[s] = 1.0;
    heap.emplace(0.0, s);
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (settled[u]) continue;
      settled[u] = true;
      order.push_back(u);
      for (const Arc& a : adj[u]) {
        if (settled[a.to]) continue;
        const double nd = d + a.length;
        if (same_length(nd, dist[a.to])) {
          sigma[a.to] += sigma[u];
          preds[a.to].emplace_back(u, a.edge);
        } else if (nd < dist[a.to]) {
          dist[a.to] = nd;
          sigma[a.to] = sigma[u];
          preds[a.to].assign(1, {u, a.edge});
          heap.emplace(nd, a.to);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int w = *it;
      for (const auto& [v, e] : preds[w]) {
        const double c = sigma[v] / sigma[w] * (1.0 + delta[w]);
        acc[e] += c;
        delta[v] += c;
      }
    }
  }
}

}  // namespace

std::vector<double> edge_betweenness(const SignedGraph& g, PathLength length) {
  const std::vector<bool> alive(g.m(), true);
  const Adjacency adj = build_adjacency(g.n(), g.edges(), alive, length);
  std::vector<int> sources(static_cast<std::size_t>(g.n()));
  for (int v = 0; v < g.n(); ++v) sources[v] = v;
  std::vector<double> acc(g.m(), 0.0);
  accumulate(adj, sources, acc);
  for (auto& a : acc) a /= 2.0;
  return acc;
}

GirvanNewmanRun girvan_newman(const SignedGraph& g, const MethodCOptions& opts) {
  if (g.n() < 1) throw DataError("method C needs a non-empty graph");
  GirvanNewmanRun run;
  MethodReport& report = run.report;
  report.method = Method::C;
  if (g.empty()) report.notes.push_back("graph has no edges; q_s recorded as 0");

  const auto& edges = g.edges();
  std::vector<bool> alive(edges.size(), true);
  std::vector<double> between = edge_betweenness(g, opts.length);

  Clustering comps = connected_components(g);
  report.levels.push_back({comps, std::nullopt, signed_modularity_or_zero(g, comps)});

  std::size_t remaining = edges.size();
  while (remaining > 0) {
    std::size_t pick = edges.size();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (!alive[e]) continue;
      if (pick == edges.size() || between[e] > between[pick] + 1e-9) pick = e;
    }
    alive[pick] = false;
    --remaining;

    std::vector<Edge> kept;
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (alive[e]) kept.push_back(edges[e]);
    Clustering next = connected_components(SignedGraph(g.n(), kept));
    run.removals.push_back({edges[pick].i + 1, edges[pick].j + 1, between[pick], next.k()});

    // Only edges in the component(s) that held the removed edge change.
    std::vector<int> sources;
    for (int v = 0; v < g.n(); ++v)
      if (next[v] == next[edges[pick].i] || next[v] == next[edges[pick].j]) sources.push_back(v);
    const Adjacency adj = build_adjacency(g.n(), edges, alive, opts.length);
    std::vector<double> acc(edges.size(), 0.0);
    accumulate(adj, sources, acc);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (!alive[e]) continue;
      const bool affected = next[edges[e].i] == next[edges[pick].i] ||
                            next[edges[e].i] == next[edges[pick].j];
      if (affected) between[e] = acc[e] / 2.0;
    }

    if (next.k() > comps.k()) {
      report.levels.push_back({next, find_split(comps, next), signed_modularity_or_zero(g, next)});
      comps = std::move(next);
    }
  }
  report.chosen_level = argmax_q_s(report.levels);
  return run;
}

nlohmann::json to_json(const std::vector<RemovalStep>& removals) {
  auto out = nlohmann::json::array();
  for (const auto& r : removals) out.push_back({r.i, r.j, r.betweenness, r.components_after});
  return out;
}

}  // namespace sigcomm
