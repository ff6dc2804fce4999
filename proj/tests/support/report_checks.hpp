#pragma once

#include "sigcomm/modularity.hpp"
#include "sigcomm/report.hpp"

#include <doctest.h>

namespace oracle {

/// Every level refines the previous one by exactly one split, level t has t
/// clusters, and each stored q_s matches a fresh evaluation.
inline void check_dendrogram(const sigcomm::MethodReport& r, const sigcomm::SignedGraph& g) {
  REQUIRE(!r.levels.empty());
  CHECK(r.levels.front().clustering.k() == 1);
  CHECK(!r.levels.front().split);
  for (std::size_t t = 0; t < r.levels.size(); ++t) {
    const auto& level = r.levels[t];
    CHECK(level.clustering.n() == g.n());
    CHECK(std::abs(level.q_s - sigcomm::signed_modularity_or_zero(g, level.clustering)) <= 1e-12);
    if (t == 0) continue;
    const auto split = sigcomm::find_split(r.levels[t - 1].clustering, level.clustering);
    REQUIRE(split);
    REQUIRE(level.split);
    CHECK(level.split->parent == split->parent);
    CHECK(level.clustering.k() == r.levels[t - 1].clustering.k() + 1);
  }
}

/// The chosen level is the first one attaining the maximum q_s.
inline void check_choice(const sigcomm::MethodReport& r) {
  double best = r.levels.front().q_s;
  for (const auto& l : r.levels) best = std::max(best, l.q_s);
  CHECK(r.chosen_q_s() >= best - 1e-12);
  for (std::size_t t = 0; t < r.chosen_level; ++t) CHECK(r.levels[t].q_s < r.chosen_q_s());
}

}  // namespace oracle
