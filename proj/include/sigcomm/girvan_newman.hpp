#pragma once

#include "sigcomm/report.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace sigcomm {

/// Edge length used for shortest paths: every edge one hop, or 1 / weight.
enum class PathLength { hops, inverse_weight };

std::string to_string(PathLength p);
PathLength parse_path_length(const std::string& name);

/// Shortest-path edge betweenness on the unsigned graph, one value per edge
/// of g.edges(). Each connected vertex pair contributes a total of 1, split
/// equally over its tied shortest paths.
std::vector<double> edge_betweenness(const SignedGraph& g, PathLength length = PathLength::hops);

struct RemovalStep {
  int i = 0;  // 1-based endpoints
  int j = 0;
  double betweenness = 0.0;
  int components_after = 0;
};

struct MethodCOptions {
  PathLength length = PathLength::hops;
};

struct GirvanNewmanRun {
  MethodReport report;
  std::vector<RemovalStep> removals;
};

/// Repeatedly remove the highest-betweenness edge (ties to the smallest
/// (i, j)), recomputing betweenness inside the affected component. Each time
/// the component count grows, the components form a new level.
GirvanNewmanRun girvan_newman(const SignedGraph& g, const MethodCOptions& opts = {});

inline MethodReport method_c(const SignedGraph& g, const MethodCOptions& opts = {}) {
  return girvan_newman(g, opts).report;
}

nlohmann::json to_json(const std::vector<RemovalStep>& removals);

}  // namespace sigcomm
