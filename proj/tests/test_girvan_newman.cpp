#include "sigcomm/girvan_newman.hpp"

#include "support/oracles.hpp"
#include "support/report_checks.hpp"

#include <doctest.h>

using namespace sigcomm;

namespace {

double betweenness_of(const SignedGraph& g, const std::vector<double>& b, int i, int j) {
  for (std::size_t k = 0; k < g.m(); ++k)
    if (g.edges()[k].i == i && g.edges()[k].j == j) return b[k];
  FAIL("edge not found");
  return 0.0;
}

}  // namespace

TEST_SUITE("girvan_newman") {

TEST_CASE("small betweenness values") {
  const SignedGraph path(3, {{0, 1, 1, 1}, {1, 2, 1, 1}});
  const auto bp = edge_betweenness(path);
  CHECK(bp[0] == doctest::Approx(2.0));
  CHECK(bp[1] == doctest::Approx(2.0));

  const SignedGraph bridged = oracle::two_triangles(true);
  CHECK(betweenness_of(bridged, edge_betweenness(bridged), 2, 3) == doctest::Approx(9.0));

  const SignedGraph cycle(4, {{0, 1, 1, 1}, {1, 2, 1, 1}, {2, 3, 1, 1}, {0, 3, 1, 1}});
  for (double b : edge_betweenness(cycle)) CHECK(b == doctest::Approx(2.0));
}

TEST_CASE("betweenness matches path enumeration") {
  Rng rng(505);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(8));
    const bool unit = trial % 2 == 0;
    const SignedGraph g = oracle::random_graph(rng, n, 0.45, 0.3, unit);
    for (PathLength len : {PathLength::hops, PathLength::inverse_weight}) {
      const auto fast = edge_betweenness(g, len);
      const auto slow = oracle::betweenness(g, len);
      REQUIRE(fast.size() == slow.size());
      for (std::size_t k = 0; k < fast.size(); ++k) CHECK(std::abs(fast[k] - slow[k]) <= 1e-9);
    }
  }
}

TEST_CASE("total betweenness is the sum of hop distances") {
  Rng rng(8);
  const SignedGraph g = oracle::random_connected_graph(rng, 9, 0.2, 0.0, true);
  const auto b = edge_betweenness(g);
  const auto dist = [&] {
    std::vector<std::vector<int>> d(9, std::vector<int>(9, 100));
    for (int v = 0; v < 9; ++v) d[v][v] = 0;
    for (const auto& e : g.edges()) d[e.i][e.j] = d[e.j][e.i] = 1;
    for (int k = 0; k < 9; ++k)
      for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d;
  }();
  double total = 0.0;
  for (int i = 0; i < 9; ++i)
    for (int j = i + 1; j < 9; ++j) total += dist[i][j];
  CHECK(std::accumulate(b.begin(), b.end(), 0.0) == doctest::Approx(total));
}

TEST_CASE("method C removes the bridge first") {
  const SignedGraph g = oracle::two_triangles(true);
  const auto run = girvan_newman(g);
  REQUIRE(!run.removals.empty());
  CHECK(run.removals[0].i == 3);
  CHECK(run.removals[0].j == 4);
  CHECK(run.removals[0].components_after == 2);
  CHECK(run.report.levels[1].clustering == Clustering(std::vector<int>{0, 0, 0, 1, 1, 1}));
  CHECK(run.report.chosen_q_s() ==
        doctest::Approx(girvan_newman_modularity(g, Clustering(std::vector<int>{0, 0, 0, 1, 1, 1}))));
  oracle::check_dendrogram(run.report, g);
  CHECK(run.removals.size() == g.m());
  for (std::size_t k = 1; k < run.removals.size(); ++k)
    CHECK(run.removals[k].components_after >= run.removals[k - 1].components_after);
}

TEST_CASE("method C on the example graph") {
  const SignedGraph g = oracle::example_graph();
  const MethodReport r = method_c(g);
  bool has_split = false;
  for (const auto& l : r.levels) has_split |= l.clustering == oracle::example_two_clusters();
  CHECK(has_split);
  CHECK(r.chosen_q_s() <= oracle::best_partition(g, 9).q_s + 1e-12);
  oracle::check_dendrogram(r, g);
  oracle::check_choice(r);

  const MethodReport weighted = method_c(g, {.length = PathLength::inverse_weight});
  oracle::check_dendrogram(weighted, g);
  CHECK(weighted.levels.back().clustering.k() == 9);
}

TEST_CASE("method C edge cases") {
  const MethodReport empty = method_c(SignedGraph(4, {}));
  CHECK(empty.levels.size() == 1);
  CHECK(empty.levels[0].clustering.k() == 4);

  const SignedGraph split(5, {{0, 1, 1, 1}, {2, 3, 1, 1}, {3, 4, 1, 1}});
  const MethodReport r = method_c(split);
  CHECK(r.levels.front().clustering == connected_components(split));

  Rng rng(3);
  const SignedGraph g = oracle::random_graph(rng, 9, 0.5, 0.3);
  const auto a = girvan_newman(g), b = girvan_newman(g);
  REQUIRE(a.removals.size() == b.removals.size());
  for (std::size_t k = 0; k < a.removals.size(); ++k) {
    CHECK(a.removals[k].i == b.removals[k].i);
    CHECK(a.removals[k].j == b.removals[k].j);
  }
  CHECK(to_json(a.removals).size() == a.removals.size());
  CHECK(parse_path_length("inverse-weight") == PathLength::inverse_weight);
}

}
