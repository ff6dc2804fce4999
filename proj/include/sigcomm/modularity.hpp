#pragma once

#include "sigcomm/graph.hpp"

#include <Eigen/Dense>

namespace sigcomm {

/// k x k matrix of edge-mass fractions between clusters. Intra-cluster mass
/// sits on the diagonal (each edge once); inter-cluster mass appears in full
/// in both e_ij and e_ji, which is what makes the extremes 1 - 1/k (equal
/// disjoint components) and -2 (bipartite parts) come out.
struct MixingMatrix {
  Eigen::MatrixXd e;

  Eigen::VectorXd marginals() const { return e.rowwise().sum(); }
};

/// Requires an all-positive graph with at least one edge.
MixingMatrix mixing_matrix(const SignedGraph& g, const Clustering& c);

/// sum_i (e_ii - a_i^2)
double modularity_from_marginals(const MixingMatrix& m);
/// tr(E) - ||E^2||, ||X|| the sum of all entries.
double modularity_from_trace(const MixingMatrix& m);

/// Girvan-Newman modularity of an all-positive graph.
double girvan_newman_modularity(const SignedGraph& g, const Clustering& c);

/// How m+ and m- are measured in the signed combination.
enum class EdgeMass { weight, count };

/// q_s = (m+ q+ - m- q-) / (m+ + m-), with q+- the modularity of the positive
/// and negative parts. An empty part contributes nothing. Throws DataError
/// on an edgeless graph.
double signed_modularity(const SignedGraph& g, const Clustering& c,
                         EdgeMass mass = EdgeMass::weight);

/// Signed modularity, or 0 for an edgeless graph (methods record levels of
/// edgeless graphs with this convention).
double signed_modularity_or_zero(const SignedGraph& g, const Clustering& c,
                                 EdgeMass mass = EdgeMass::weight);

}  // namespace sigcomm
