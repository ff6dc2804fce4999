#include "sigcomm/error.hpp"
#include "sigcomm/graph.hpp"
#include "sigcomm/linalg.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

using namespace sigcomm;

TEST_SUITE("graph") {

TEST_CASE("example graph from its matrix") {
  const SignedGraph g = oracle::example_graph();
  CHECK(g.n() == 9);
  CHECK(g.m() == 18);
  const auto negative = std::count_if(g.edges().begin(), g.edges().end(),
                                      [](const Edge& e) { return e.sign < 0; });
  CHECK(negative == 5);
  CHECK(signed_adjacency(g) == oracle::example_matrix());
  CHECK(adjacency(g) == oracle::example_matrix().cwiseAbs());

  const auto [pos, neg] = split_signs(g);
  CHECK(pos.m() == 13);
  CHECK(neg.m() == 5);
  CHECK(total_weight(pos) + total_weight(neg) == doctest::Approx(total_weight(g)));
  for (const auto& e : neg.edges()) CHECK(e.sign == 1);
}

TEST_CASE("example laplacian") {
  const Eigen::MatrixXd l = laplacian(oracle::example_graph());
  const double diag[] = {12, 25, 17, 28, 12, 17, 25, 29, 13};
  for (int i = 0; i < 9; ++i) CHECK(l(i, i) == doctest::Approx(diag[i] / 10.0).epsilon(1e-14));
  CHECK(l(0, 3) == doctest::Approx(-0.8));
  CHECK(l.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(eig_symmetric(l).values.minCoeff() > -1e-12);
  CHECK(eig_symmetric(normalized_laplacian(oracle::example_graph())).values.minCoeff() > -1e-12);
}

TEST_CASE("single edges") {
  const SignedGraph pos(2, {{0, 1, 0.5, 1}});
  Eigen::Matrix2d half;
  half << 0, 0.5, 0.5, 0;
  CHECK(adjacency(pos) == Eigen::MatrixXd(half));
  CHECK(signed_adjacency(pos) == Eigen::MatrixXd(half));
  const SignedGraph neg(2, {{0, 1, 0.5, -1}});
  CHECK(adjacency(neg) == Eigen::MatrixXd(half));
  CHECK(signed_adjacency(neg) == Eigen::MatrixXd(-half));

  const SignedGraph unit(2, {{0, 1, 1.0, 1}});
  Eigen::Matrix2d l;
  l << 1, -1, -1, 1;
  CHECK(laplacian(unit) == Eigen::MatrixXd(l));
  CHECK((normalized_laplacian(unit) - l).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("two disjoint edges") {
  const SignedGraph g(4, {{0, 1, 1.0, 1}, {2, 3, 1.0, 1}});
  const auto ev = eig_symmetric(laplacian(g)).values;
  CHECK(std::abs(ev(0)) < 1e-12);
  CHECK(std::abs(ev(1)) < 1e-12);
  CHECK(ev(2) > 1.0);
  CHECK(connected_components(g).k() == 2);
}

TEST_CASE("components") {
  CHECK(connected_components(oracle::two_triangles(false)).k() == 2);
  CHECK(connected_components(oracle::two_triangles(false)) ==
        Clustering(std::vector<int>{0, 0, 0, 1, 1, 1}));
  CHECK(connected_components(SignedGraph(4, {{0, 1, 1, 1}, {1, 2, 1, -1}, {2, 3, 1, 1}})).k() == 1);
  CHECK(connected_components(SignedGraph(5, {})).k() == 5);
}

TEST_CASE("normalized laplacian needs every vertex to have an edge") {
  CHECK_THROWS_AS((void)normalized_laplacian(SignedGraph(3, {{0, 1, 1.0, 1}})), DataError);
}

TEST_CASE("invariants are enforced") {
  CHECK_THROWS_AS(SignedGraph(2, {{0, 0, 0.5, 1}}), DataError);
  CHECK_THROWS_AS(SignedGraph(2, {{0, 1, 0.5, 1}, {1, 0, 0.5, 1}}), DataError);
  CHECK_THROWS_AS(SignedGraph(2, {{0, 1, 1.5, 1}}), DataError);
  CHECK_THROWS_AS(SignedGraph(2, {{0, 1, 0.0, 1}}), DataError);
  CHECK_THROWS_AS(SignedGraph(2, {{0, 1, 0.5, 0}}), DataError);
  CHECK_THROWS_AS(SignedGraph(2, {{0, 2, 0.5, 1}}), DataError);
}

TEST_CASE("thresholding") {
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
  CHECK(from_signed_matrix(id).m() == 0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(4, 4, -0.99);
  m.diagonal().setOnes();
  CHECK(from_signed_matrix(m, 0.99).m() == 0);
  CHECK(from_signed_matrix(m, 0.5).m() == 6);
  CHECK_THROWS_AS((void)from_signed_matrix(m, 1.0), ConfigError);
}

TEST_CASE("thresholded matrix is reproduced by the signed adjacency") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd m(7, 7);
    for (int i = 0; i < 7; ++i)
      for (int j = i; j < 7; ++j) m(i, j) = m(j, i) = 2.0 * rng.uniform() - 1.0;
    const double threshold = 0.3 * rng.uniform();
    Eigen::MatrixXd expected = (m.array().abs() > threshold).select(m, 0.0);
    expected.diagonal().setZero();
    CHECK(signed_adjacency(from_signed_matrix(m, threshold)) == expected);
  }
}

TEST_CASE("graph transformations") {
  const SignedGraph g = oracle::example_graph();
  CHECK(signed_adjacency(g.negated()) == -signed_adjacency(g));
  CHECK(signed_adjacency(g.scaled(0.5)) == 0.5 * signed_adjacency(g));
  CHECK_THROWS_AS((void)g.scaled(2.0), DataError);
  CHECK(adjacency(unsigned_view(g)) == signed_adjacency(unsigned_view(g)));

  const std::vector<int> keep{5, 6, 7, 8};
  const SignedGraph sub = induced_subgraph(g, keep);
  CHECK(sub.n() == 4);
  CHECK(signed_adjacency(sub) == oracle::example_matrix().bottomRightCorner(4, 4));

  const SignedGraph back = graph_from_json(to_json(g));
  CHECK(back.edges() == g.edges());
  CHECK(to_json(g)["edges"][0][0] == 1);
}

TEST_CASE("clusterings are canonical") {
  const Clustering a(std::vector<int>{7, 7, 3, 9, 3});
  CHECK(a.assignment() == std::vector<int>{1, 1, 2, 3, 2});
  CHECK(a.k() == 3);
  CHECK(a.members(2) == std::vector<int>{2, 4});
  CHECK(a == Clustering(std::vector<int>{0, 0, 1, 2, 1}));
  CHECK(Clustering::from_clusters(5, {{3}, {0, 1}, {2, 4}}) == a);
  CHECK(Clustering::singletons(3).k() == 3);
  CHECK(Clustering::single(3).k() == 1);
  CHECK_THROWS_AS((void)Clustering::from_clusters(3, {{0, 1}}), DataError);
  CHECK_THROWS_AS((void)Clustering::from_clusters(3, {{0, 1}, {1, 2}}), DataError);
}

}
