#pragma once

#include "sigcomm/modularity.hpp"
#include "sigcomm/report.hpp"

#include <json.hpp>

#include <cstdint>
#include <vector>

namespace sigcomm {

/// Geometric cooling: temp_steps temperatures from t_initial towards t_final,
/// samples_per_temp proposals at each.
struct AnnealingSchedule {
  int temp_steps = 400;
  int samples_per_temp = 500;
  double t_initial = 1.0;
  double t_final = 1e-3;

  void validate() const;
  /// (t_final / t_initial)^(1 / temp_steps)
  double decay() const;
};

/// Sizes of the bisection search spaces of the hierarchical scheme against
/// the number of all partitions (the Bell number).
struct SearchSpaceSizes {
  int n = 0;
  std::uint64_t bell_reference = 0;
  std::uint64_t best_case = 0;
  std::uint64_t worst_case = 0;
};

/// Exact Bell number B_n; n <= 25 (larger values overflow 64 bits).
std::uint64_t bell_number(int n);

/// Best case: sum over k = 0..floor(log2 n) of (2^(floor(n / 2^k) - 1) - 1);
/// worst case: sum over k = 0..n-1 of (2^(n-1-k) - 1). Requires 2 <= n <= 25.
SearchSpaceSizes hierarchical_search_space(int n);

struct BisectResult {
  std::vector<int> first;   // contains the smallest vertex of the cluster
  std::vector<int> second;
  /// Global signed modularity of the partition with the split applied.
  double q_s = 0.0;
  /// Best global q_s seen after each temperature level.
  std::vector<double> best_trace;
};

/// Anneal a bipartition of cluster `cluster_id` of `context`, maximising the
/// signed modularity of the whole graph with every other cluster fixed.
/// The cluster must have at least two vertices.
BisectResult sa_bisect(const SignedGraph& g, const Clustering& context, int cluster_id,
                       const AnnealingSchedule& schedule, std::uint64_t seed,
                       EdgeMass mass = EdgeMass::weight);

/// Bisection of the whole vertex set.
inline BisectResult sa_bisect(const SignedGraph& g, const AnnealingSchedule& schedule,
                              std::uint64_t seed, EdgeMass mass = EdgeMass::weight) {
  return sa_bisect(g, Clustering::single(g.n()), 1, schedule, seed, mass);
}

struct MethodDOptions {
  AnnealingSchedule schedule;
  int max_clusters = 8;
  EdgeMass mass = EdgeMass::weight;
};

struct AnnealingRun {
  MethodReport report;
  /// best_trace of the bisection committed at each level after the first.
  std::vector<std::vector<double>> traces;
};

/// Hierarchical annealed bisection: each level trial-splits every cluster of
/// size >= 2 and commits the split with the highest global q_s, until
/// max_clusters levels or no splittable cluster remain.
AnnealingRun hierarchical_annealing(const SignedGraph& g, std::uint64_t seed,
                                    const MethodDOptions& opts = {});

inline MethodReport method_d(const SignedGraph& g, std::uint64_t seed,
                             const MethodDOptions& opts = {}) {
  return hierarchical_annealing(g, seed, opts).report;
}

nlohmann::json to_json(const SearchSpaceSizes& s);

}  // namespace sigcomm
