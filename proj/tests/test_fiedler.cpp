#include "sigcomm/error.hpp"
#include "sigcomm/fiedler.hpp"
#include "sigcomm/linalg.hpp"

#include "support/oracles.hpp"
#include "support/report_checks.hpp"

#include <doctest.h>

#include <algorithm>

using namespace sigcomm;

TEST_SUITE("fiedler") {

TEST_CASE("normalized algebraic connectivity on small graphs") {
  CHECK(normalized_algebraic_connectivity(SignedGraph(4, {{0, 1, 1, 1}, {2, 3, 1, 1}})) == 0.0);
  CHECK(normalized_algebraic_connectivity(oracle::complete_graph(4)) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  const SignedGraph path(3, {{0, 1, 1, 1}, {1, 2, 1, 1}});
  CHECK(normalized_algebraic_connectivity(path) == doctest::Approx(1.0).epsilon(1e-12));
  const auto ev = eig_symmetric(normalized_laplacian(path)).values;
  CHECK(ev(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ev(2) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(normalized_algebraic_connectivity(SignedGraph(2, {{0, 1, 0.4, -1}})) == doctest::Approx(2.0));
  CHECK_THROWS_AS((void)normalized_algebraic_connectivity(SignedGraph(1, {})), DataError);
  CHECK_THROWS_AS((void)normalized_algebraic_connectivity(SignedGraph(3, {{0, 1, 1, 1}})), DataError);
}

TEST_CASE("complete graphs and random graphs") {
  for (int n = 3; n <= 10; ++n)
    CHECK(std::abs(normalized_algebraic_connectivity(oracle::complete_graph(n)) - n / (n - 1.0)) <= 1e-9);
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(8));
    const SignedGraph g = oracle::random_connected_graph(rng, n, 0.3, 0.3);
    if (static_cast<int>(g.m()) == n * (n - 1) / 2) continue;
    const double a = normalized_algebraic_connectivity(g);
    CHECK(a > 1e-12);
    CHECK(a <= 1.0 + 1e-9);
  }
}

TEST_CASE("fiedler bisection") {
  const Bisection tri = fiedler_bisect(oracle::two_triangles(true));
  auto sorted = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto a = sorted(tri.first), b = sorted(tri.second);
  CHECK(((a == std::vector<int>{0, 1, 2} && b == std::vector<int>{3, 4, 5}) ||
         (b == std::vector<int>{0, 1, 2} && a == std::vector<int>{3, 4, 5})));

  const Bisection edge = fiedler_bisect(SignedGraph(2, {{0, 1, 1, 1}}));
  CHECK(edge.first.size() == 1);
  CHECK(edge.second.size() == 1);

  const SignedGraph star(4, {{0, 1, 1, 1}, {0, 2, 1, 1}, {0, 3, 1, 1}});
  const Bisection s = fiedler_bisect(star);
  CHECK(!s.first.empty());
  CHECK(!s.second.empty());
  CHECK(s.first.size() + s.second.size() == 4);

  CHECK_THROWS_AS((void)fiedler_bisect(oracle::two_triangles(false)), DataError);
}

TEST_CASE("method A on the example graph") {
  const SignedGraph g = oracle::example_graph();
  const MethodReport r = method_a(g);
  CHECK(r.method == Method::A);
  CHECK(r.levels.size() == 9);
  CHECK(r.chosen() == oracle::example_two_clusters());
  CHECK(r.chosen_q_s() == doctest::Approx(0.34102592347800553).epsilon(1e-12));
  oracle::check_dendrogram(r, g);
  oracle::check_choice(r);
}

TEST_CASE("method A on disconnected triangles") {
  const SignedGraph g = oracle::two_triangles(false);
  const MethodReport r = method_a(g);
  CHECK(r.levels[1].clustering == Clustering(std::vector<int>{0, 0, 0, 1, 1, 1}));
  CHECK(r.levels[1].q_s == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.chosen_level == 1);
  oracle::check_dendrogram(r, g);
}

TEST_CASE("method A degenerate inputs") {
  const MethodReport one = method_a(SignedGraph(1, {}));
  CHECK(one.levels.size() == 1);
  CHECK(one.chosen_q_s() == 0.0);
  CHECK(!one.notes.empty());
  const MethodReport empty = method_a(SignedGraph(3, {}));
  CHECK(empty.levels.size() == 3);
  CHECK(empty.chosen_level == 0);
}

TEST_CASE("method A is equivariant under relabelling") {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 7;
    const SignedGraph g = oracle::random_connected_graph(rng, n, 0.4, 0.3);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    std::vector<Edge> moved;
    for (const auto& e : g.edges())
      moved.push_back({std::min(perm[e.i], perm[e.j]), std::max(perm[e.i], perm[e.j]), e.weight, e.sign});
    const SignedGraph h(n, moved);
    const MethodReport a = method_a(g), b = method_a(h);
    oracle::check_dendrogram(a, g);
    oracle::check_dendrogram(b, h);
    REQUIRE(a.levels.size() == b.levels.size());
    // pairs all score the same, so the id tie-break decides once one exists
    for (std::size_t t = 0; t < a.levels.size(); ++t) {
      CHECK(std::abs(a.levels[t].q_s - b.levels[t].q_s) <= 1e-12);
      const auto parts = a.levels[t].clustering.clusters();
      if (std::any_of(parts.begin(), parts.end(), [](const auto& c) { return c.size() <= 2; })) break;
    }
  }
}

}
