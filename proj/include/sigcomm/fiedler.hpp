#pragma once

#include "sigcomm/report.hpp"

#include <vector>

namespace sigcomm {

/// Second-smallest eigenvalue of the normalized Laplacian (unsigned weights).
/// Zero iff the graph is disconnected. Throws on n < 2 or an isolated vertex.
double normalized_algebraic_connectivity(const SignedGraph& g);

struct Bisection {
  std::vector<int> first;   // x_i <= 0
  std::vector<int> second;  // x_i > 0
};

/// Sign split of the Fiedler vector of L = D - A (unsigned weights), after
/// canonical sign fixing. Requires a connected graph on >= 2 vertices.
Bisection fiedler_bisect(const SignedGraph& g);

/// Recursive Fiedler bisection down to singletons, always splitting the
/// cluster whose induced subgraph has the smallest normalized algebraic
/// connectivity. Every level is scored against the signed input graph.
MethodReport method_a(const SignedGraph& g);

}  // namespace sigcomm
