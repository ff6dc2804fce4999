#include "sigcomm/error.hpp"
#include "sigcomm/spectral_coords.hpp"

#include "support/oracles.hpp"
#include "support/report_checks.hpp"

#include <doctest.h>

using namespace sigcomm;

TEST_SUITE("spectral_coords") {

TEST_CASE("disjoint cliques of distinct sizes sit on the axes") {
  std::vector<Edge> edges;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) edges.push_back({i, j, 1.0, 1});
  for (int i = 4; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j) edges.push_back({i, j, 1.0, 1});
  const SignedGraph g(7, edges);
  const auto sc = spectral_coordinates(g, 2);
  for (int v = 0; v < 7; ++v) {
    const int axis = v < 4 ? 0 : 1;
    CHECK(std::abs(sc.points(v, 1 - axis)) <= 1e-10);
    CHECK(sc.points(v, axis) > 0.1);
  }
  CHECK(!sc.basis_dependent);
}

TEST_CASE("two equal cliques are flagged as basis dependent") {
  const auto sc = spectral_coordinates(oracle::disjoint_cliques(2, 4), 2);
  CHECK(sc.basis_dependent == false);  // lambda_2 and lambda_3 differ
  CHECK(spectral_coordinates(oracle::disjoint_cliques(2, 4), 1).basis_dependent);
}

TEST_CASE("perturbed cliques are recovered by method B") {
  // unequal cliques keep each leading eigenvector on one clique; equal ones mix
  std::vector<Edge> edges;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) edges.push_back({i, j, 1.0, 1});
  for (int i = 5; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) edges.push_back({i, j, 1.0, 1});
  edges.push_back({4, 5, 0.2, 1});
  const SignedGraph g(8, edges);
  const MethodReport r = method_b(g, 5);
  CHECK(r.chosen() == Clustering(std::vector<int>{0, 0, 0, 0, 0, 1, 1, 1}));
  const auto sc = spectral_coordinates(g, 2);
  for (int v = 0; v < 8; ++v) {
    const int axis = std::abs(sc.points(v, 0)) > std::abs(sc.points(v, 1)) ? 0 : 1;
    CHECK(axis == (v < 5 ? 0 : 1));
    CHECK(sc.points(v, axis) > 0.0);
  }
}

TEST_CASE("one dimension gives the Perron vector") {
  Rng rng(6);
  const SignedGraph g = oracle::random_connected_graph(rng, 9, 0.4, 0.0);
  const auto sc = spectral_coordinates(g, 1);
  CHECK(sc.points.minCoeff() > 0.0);
  CHECK(sc.eigenvalues(0) >= sc.eigenvalues(1));
  CHECK_THROWS_AS((void)spectral_coordinates(g, 0), ConfigError);
  CHECK_THROWS_AS((void)spectral_coordinates(g, 10), ConfigError);
}

TEST_CASE("method B on the example graph") {
  const SignedGraph g = oracle::example_graph();
  const MethodReport r = method_b(g, 1);
  CHECK(r.method == Method::B);
  CHECK(r.levels.size() == 8);
  for (std::size_t t = 0; t < r.levels.size(); ++t) CHECK(r.levels[t].clustering.k() <= static_cast<int>(t) + 1);
  CHECK(r.chosen() == oracle::example_two_clusters());
  CHECK(r.chosen_level == 1);
  oracle::check_choice(r);
  for (const auto& l : r.levels)
    CHECK(std::abs(l.q_s - signed_modularity(g, l.clustering)) <= 1e-12);
}

TEST_CASE("method B on triangles and degenerate graphs") {
  const MethodReport tri = method_b(oracle::two_triangles(false), 2);
  CHECK(tri.chosen() == Clustering(std::vector<int>{0, 0, 0, 1, 1, 1}));
  CHECK(tri.chosen_q_s() == doctest::Approx(0.5).epsilon(1e-14));

  const MethodReport sparse = method_b(SignedGraph(5, {{1, 3, 0.7, 1}}), 3);
  CHECK(sparse.chosen_q_s() >= 0.0);
  const MethodReport none = method_b(SignedGraph(4, {}), 3);
  CHECK(none.chosen().k() == 1);
  CHECK(none.chosen_q_s() == 0.0);
}

TEST_CASE("method B is deterministic per seed") {
  Rng rng(10);
  const SignedGraph g = oracle::random_graph(rng, 12, 0.5, 0.3);
  const MethodReport a = method_b(g, 99), b = method_b(g, 99);
  REQUIRE(a.levels.size() == b.levels.size());
  for (std::size_t t = 0; t < a.levels.size(); ++t) {
    CHECK(a.levels[t].clustering == b.levels[t].clustering);
    CHECK(a.levels[t].q_s == b.levels[t].q_s);
  }
  CHECK(method_b(g, 1, {.k_max = 3}).levels.size() == 3);
}

}
