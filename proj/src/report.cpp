#include "sigcomm/report.hpp"

#include "sigcomm/error.hpp"

#include <map>
#include <set>

namespace sigcomm {

char to_char(Method m) { return static_cast<char>('A' + static_cast<int>(m)); }

Method parse_method(char c) {
  if (c >= 'A' && c <= 'D') return static_cast<Method>(c - 'A');
  if (c >= 'a' && c <= 'd') return static_cast<Method>(c - 'a');
  throw ConfigError(std::string("unknown method '") + c + "' (expected A, B, C or D)");
}

std::vector<double> MethodReport::q_s_trace() const {
  std::vector<double> out;
  out.reserve(levels.size());
  for (const auto& l : levels) out.push_back(l.q_s);
  return out;
}

std::size_t argmax_q_s(const std::vector<Level>& levels) {
  std::size_t best = 0;
  for (std::size_t t = 1; t < levels.size(); ++t)
    if (levels[t].q_s > levels[best].q_s + 1e-12) best = t;
  return best;
}

std::optional<Split> find_split(const Clustering& before, const Clustering& after) {
  if (before.n() != after.n() || after.k() != before.k() + 1) return std::nullopt;
  // Each new cluster must sit inside one old cluster.
  std::map<int, std::set<int>> children;
  for (int v = 0; v < after.n(); ++v) children[before[v]].insert(after[v]);
  std::map<int, int> parent_of;
  for (int v = 0; v < after.n(); ++v) {
    auto [it, inserted] = parent_of.emplace(after[v], before[v]);
    if (!inserted && it->second != before[v]) return std::nullopt;
  }
  std::optional<Split> split;
  for (const auto& [parent, kids] : children) {
    if (kids.size() == 2) {
      if (split) return std::nullopt;
      split = Split{parent, *kids.begin(), *kids.rbegin()};
    } else if (kids.size() != 1) {
      return std::nullopt;
    }
  }
  return split;
}

nlohmann::json to_json(const Level& level) {
  nlohmann::json j{{"k", level.clustering.k()},
                   {"assignment", level.clustering.assignment()},
                   {"q_s", level.q_s}};
  if (level.split)
    j["split"] = {level.split->parent, level.split->child_a, level.split->child_b};
  else
    j["split"] = nullptr;
  return j;
}

nlohmann::json to_json(const MethodReport& report) {
  auto levels = nlohmann::json::array();
  for (const auto& l : report.levels) levels.push_back(to_json(l));
  nlohmann::json j{{"method", std::string(1, to_char(report.method))},
                   {"levels", levels},
                   {"chosen_level", report.chosen_level},
                   {"chosen_k", report.chosen().k()},
                   {"chosen_q_s", report.chosen_q_s()}};
  if (!report.notes.empty()) j["notes"] = report.notes;
  return j;
}

}  // namespace sigcomm
