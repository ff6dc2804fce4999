#pragma once

#include "sigcomm/graph.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace sigcomm {

enum class Method { A, B, C, D };

char to_char(Method m);
Method parse_method(char c);

/// Cluster `parent` of the previous level became `child_a` and `child_b`.
/// Ids are the canonical 1-based ids of the respective levels.
struct Split {
  int parent = 0;
  int child_a = 0;
  int child_b = 0;
};

struct Level {
  Clustering clustering;
  std::optional<Split> split;
  double q_s = 0.0;
};

/// One method's levels (a dendrogram for A, C, D; independent k levels for B)
/// and the level with maximum signed modularity.
struct MethodReport {
  Method method = Method::A;
  std::vector<Level> levels;
  std::size_t chosen_level = 0;
  std::vector<std::string> notes;

  const Clustering& chosen() const { return levels.at(chosen_level).clustering; }
  double chosen_q_s() const { return levels.at(chosen_level).q_s; }
  std::vector<double> q_s_trace() const;
};

/// Index of the maximum q_s; a later level must beat the incumbent by more
/// than 1e-12, so ties go to the earlier level (fewer clusters).
std::size_t argmax_q_s(const std::vector<Level>& levels);

/// Find the split that turns `before` into `after`, if `after` refines
/// `before` by splitting exactly one cluster in two.
std::optional<Split> find_split(const Clustering& before, const Clustering& after);

nlohmann::json to_json(const Level& level);
nlohmann::json to_json(const MethodReport& report);

}  // namespace sigcomm
