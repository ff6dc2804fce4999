#include "sigcomm/annealing.hpp"

#include "sigcomm/error.hpp"
#include "sigcomm/random.hpp"

#include <array>
#include <cmath>
#include <map>
#include <tuple>

namespace sigcomm {

void AnnealingSchedule::validate() const {
  if (temp_steps < 1 || samples_per_temp < 1)
    throw ConfigError("annealing steps and samples must be positive");
  if (!(t_initial > 0.0 && t_final > 0.0 && t_final < t_initial))
    throw ConfigError("annealing temperatures must satisfy 0 < t_final < t_initial");
}

double AnnealingSchedule::decay() const {
  return std::pow(t_final / t_initial, 1.0 / static_cast<double>(temp_steps));
}

std::uint64_t bell_number(int n) {
  if (n < 0 || n > 25) throw ConfigError("Bell number supported for 0 <= n <= 25");
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (int i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (std::uint64_t v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

SearchSpaceSizes hierarchical_search_space(int n) {
  if (n < 2 || n > 25) throw ConfigError("search space sizes supported for 2 <= n <= 25");
  SearchSpaceSizes s;
  s.n = n;
  s.bell_reference = bell_number(n);
  for (int k = 0; (n >> k) >= 1; ++k) s.best_case += (std::uint64_t{1} << ((n >> k) - 1)) - 1;
  for (int k = 0; k < n; ++k) s.worst_case += (std::uint64_t{1} << (n - 1 - k)) - 1;
  return s;
}

nlohmann::json to_json(const SearchSpaceSizes& s) {
  return {{"n", s.n},
          {"bell_reference", s.bell_reference},
          {"best_case", s.best_case},
          {"worst_case", s.worst_case}};
}

namespace {

// Per-sign data for incremental evaluation of one cluster's contribution
// to the modularity sum: term(C) = in(C)/W - ((vol(C) - in(C))/W)^2.
struct SignPart {
  Eigen::MatrixXd w;        // n x n magnitudes of this sign
  Eigen::VectorXd degree;
  double total = 0.0;       // W
  double mass = 0.0;        // m in the signed combination

  double term(double in, double vol) const {
    if (total <= 0.0) return 0.0;
    const double a = (vol - in) / total;
    return in / total - a * a;
  }
};

struct Objective {
  SignPart pos;
  SignPart neg;
  double base_pos = 0.0;  // sum of terms over the fixed clusters
  double base_neg = 0.0;

  double combine(double sum_pos, double sum_neg) const {
    const double denom = pos.mass + neg.mass;
    if (denom <= 0.0) return 0.0;
    return (pos.mass * sum_pos - neg.mass * sum_neg) / denom;
  }
};

SignPart make_part(const SignedGraph& g, int sign, EdgeMass mass) {
  SignPart p;
  p.w = Eigen::MatrixXd::Zero(g.n(), g.n());
  p.degree = Eigen::VectorXd::Zero(g.n());
  std::size_t count = 0;
  for (const auto& e : g.edges()) {
    if (e.sign != sign) continue;
    p.w(e.i, e.j) = p.w(e.j, e.i) = e.weight;
    p.degree(e.i) += e.weight;
    p.degree(e.j) += e.weight;
    p.total += e.weight;
    ++count;
  }
  p.mass = mass == EdgeMass::weight ? p.total : static_cast<double>(count);
  return p;
}

std::pair<double, double> cluster_sums(const SignPart& p, const std::vector<int>& members) {
  double in = 0.0;
  double vol = 0.0;
  for (std::size_t a = 0; a < members.size(); ++a) {
    vol += p.degree(members[a]);
    for (std::size_t b = a + 1; b < members.size(); ++b) in += p.w(members[a], members[b]);
  }
  return {in, vol};
}

// Annealing state for a bipartition of one cluster.
class BisectionState {
 public:
  BisectionState(const Objective& obj, std::vector<int> members, Rng& rng)
      : obj_(obj), members_(std::move(members)) {
    const std::size_t m = members_.size();
    side_.resize(m);
    for (std::size_t a = 0; a < m; ++a) side_[a] = static_cast<int>(rng.below(2));
    int ones = 0;
    for (int s : side_) ones += s;
    if (ones == 0) side_[rng.below(m)] = 1;
    if (ones == static_cast<int>(m)) side_[rng.below(m)] = 0;

    link_pos_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), 2);
    link_neg_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), 2);
    for (std::size_t a = 0; a < m; ++a) {
      slot_.push_back(lists_[side_[a]].size());
      lists_[side_[a]].push_back(a);
      for (std::size_t b = 0; b < m; ++b) {
        link_pos_(a, side_[b]) += obj_.pos.w(members_[a], members_[b]);
        link_neg_(a, side_[b]) += obj_.neg.w(members_[a], members_[b]);
      }
    }
    for (int s = 0; s < 2; ++s) {
      std::vector<int> vs;
      for (std::size_t a : lists_[s]) vs.push_back(members_[a]);
      std::tie(in_pos_[s], vol_pos_[s]) = cluster_sums(obj_.pos, vs);
      std::tie(in_neg_[s], vol_neg_[s]) = cluster_sums(obj_.neg, vs);
    }
    q_ = evaluate(in_pos_, vol_pos_, in_neg_, vol_neg_);
  }

  double q() const { return q_; }
  const std::vector<int>& sides() const { return side_; }
  bool frozen() const { return lists_[0].size() < 2 && lists_[1].size() < 2; }

  /// Propose moving a random vertex out of a random side of size > 1.
  /// Returns (local index, q after the move).
  std::pair<std::size_t, double> propose(Rng& rng) const {
    int from = 0;
    if (lists_[0].size() > 1 && lists_[1].size() > 1)
      from = static_cast<int>(rng.below(2));
    else
      from = lists_[0].size() > 1 ? 0 : 1;
    const std::size_t a = lists_[from][rng.below(lists_[from].size())];
    const int to = 1 - from;
    const std::size_t v = static_cast<std::size_t>(members_[a]);
    std::array<double, 2> ip = in_pos_, vp = vol_pos_, in = in_neg_, vn = vol_neg_;
    ip[from] -= link_pos_(a, from);
    ip[to] += link_pos_(a, to);
    vp[from] -= obj_.pos.degree(v);
    vp[to] += obj_.pos.degree(v);
    in[from] -= link_neg_(a, from);
    in[to] += link_neg_(a, to);
    vn[from] -= obj_.neg.degree(v);
    vn[to] += obj_.neg.degree(v);
    return {a, evaluate(ip, vp, in, vn)};
  }

  void apply(std::size_t a, double q_after) {
    const int from = side_[a];
    const int to = 1 - from;
    const auto v = static_cast<std::size_t>(members_[a]);
    in_pos_[from] -= link_pos_(a, from);
    in_pos_[to] += link_pos_(a, to);
    vol_pos_[from] -= obj_.pos.degree(v);
    vol_pos_[to] += obj_.pos.degree(v);
    in_neg_[from] -= link_neg_(a, from);
    in_neg_[to] += link_neg_(a, to);
    vol_neg_[from] -= obj_.neg.degree(v);
    vol_neg_[to] += obj_.neg.degree(v);
    for (std::size_t b = 0; b < members_.size(); ++b) {
      const double wp = obj_.pos.w(members_[b], members_[a]);
      const double wn = obj_.neg.w(members_[b], members_[a]);
      link_pos_(b, from) -= wp;
      link_pos_(b, to) += wp;
      link_neg_(b, from) -= wn;
      link_neg_(b, to) += wn;
    }
    // Swap-remove from the old side's list.
    auto& old_list = lists_[from];
    const std::size_t pos = slot_[a];
    old_list[pos] = old_list.back();
    slot_[old_list[pos]] = pos;
    old_list.pop_back();
    slot_[a] = lists_[to].size();
    lists_[to].push_back(a);
    side_[a] = to;
    q_ = q_after;
  }

 private:
  double evaluate(const std::array<double, 2>& ip, const std::array<double, 2>& vp,
                  const std::array<double, 2>& in, const std::array<double, 2>& vn) const {
    const double sp = obj_.base_pos + obj_.pos.term(ip[0], vp[0]) + obj_.pos.term(ip[1], vp[1]);
    const double sn = obj_.base_neg + obj_.neg.term(in[0], vn[0]) + obj_.neg.term(in[1], vn[1]);
    return obj_.combine(sp, sn);
  }

  const Objective& obj_;
  std::vector<int> members_;
  std::vector<int> side_;
  std::array<std::vector<std::size_t>, 2> lists_;
  std::vector<std::size_t> slot_;
  Eigen::MatrixXd link_pos_;
  Eigen::MatrixXd link_neg_;
  std::array<double, 2> in_pos_{}, vol_pos_{}, in_neg_{}, vol_neg_{};
  double q_ = 0.0;
};

}  // namespace

BisectResult sa_bisect(const SignedGraph& g, const Clustering& context, int cluster_id,
                       const AnnealingSchedule& schedule, std::uint64_t seed, EdgeMass mass) {
  schedule.validate();
  if (context.n() != g.n()) throw DataError("clustering does not match the graph order");
  if (cluster_id < 1 || cluster_id > context.k()) throw DataError("cluster id out of range");
  const std::vector<int> members = context.members(cluster_id);
  if (members.size() < 2) throw DataError("annealed bisection needs a cluster of >= 2 vertices");

  Objective obj{make_part(g, 1, mass), make_part(g, -1, mass)};
  for (int c = 1; c <= context.k(); ++c) {
    if (c == cluster_id) continue;
    const auto vs = context.members(c);
    const auto [ip, vp] = cluster_sums(obj.pos, vs);
    const auto [in, vn] = cluster_sums(obj.neg, vs);
    obj.base_pos += obj.pos.term(ip, vp);
    obj.base_neg += obj.neg.term(in, vn);
  }

  Rng rng(seed);
  BisectionState state(obj, members, rng);
  std::vector<int> best_sides = state.sides();
  double best_q = state.q();
  BisectResult out;
  out.best_trace.reserve(static_cast<std::size_t>(schedule.temp_steps));

  if (!state.frozen()) {
    const double decay = schedule.decay();
    double temperature = schedule.t_initial;
    for (int step = 0; step < schedule.temp_steps; ++step) {
      for (int sample = 0; sample < schedule.samples_per_temp; ++sample) {
        const auto [a, q_new] = state.propose(rng);
        const double q_old = state.q();
        const bool accept =
            q_new > q_old || rng.uniform() < std::exp(-(q_old - q_new) / temperature);
        if (!accept) continue;
        state.apply(a, q_new);
        if (q_new > best_q) {
          best_q = q_new;
          best_sides = state.sides();
        }
      }
      out.best_trace.push_back(best_q);
      temperature *= decay;
    }
  }

  // The side holding the cluster's smallest vertex comes first.
  const int lead = best_sides[0];
  for (std::size_t a = 0; a < members.size(); ++a)
    (best_sides[a] == lead ? out.first : out.second).push_back(members[a]);
  std::vector<int> labels = context.assignment();
  for (int v : out.second) labels[v] = context.k() + 1;
  out.q_s = signed_modularity_or_zero(g, Clustering(labels), mass);
  return out;
}

AnnealingRun hierarchical_annealing(const SignedGraph& g, std::uint64_t seed,
                                    const MethodDOptions& opts) {
  if (g.n() < 1) throw DataError("method D needs a non-empty graph");
  if (opts.max_clusters < 1) throw ConfigError("method D: max clusters must be positive");
  opts.schedule.validate();
  AnnealingRun run;
  MethodReport& report = run.report;
  report.method = Method::D;
  if (g.empty()) report.notes.push_back("graph has no edges; q_s recorded as 0");

  Clustering current = Clustering::single(g.n());
  report.levels.push_back({current, std::nullopt, signed_modularity_or_zero(g, current, opts.mass)});

  // A cluster's best split does not depend on how the rest of the graph is
  // partitioned, so each cluster is annealed once, seeded by its members.
  std::map<std::vector<int>, BisectResult> cache;
  const int level_cap = std::min(opts.max_clusters, g.n());
  while (current.k() < level_cap) {
    bool found = false;
    double best_q = 0.0;
    Clustering best;
    const BisectResult* best_split = nullptr;
    for (int c = 1; c <= current.k(); ++c) {
      const std::vector<int> members = current.members(c);
      if (members.size() < 2) continue;
      auto it = cache.find(members);
      if (it == cache.end()) {
        std::uint64_t key = derive_seed(seed, {0x4D44ULL, members.size()});
        for (int v : members) key = derive_seed(key, {static_cast<std::uint64_t>(v)});
        it = cache.emplace(members, sa_bisect(g, current, c, opts.schedule, key, opts.mass)).first;
      }
      std::vector<int> labels = current.assignment();
      for (int v : it->second.second) labels[v] = current.k() + 1;
      Clustering candidate(labels);
      const double q = signed_modularity_or_zero(g, candidate, opts.mass);
      if (!found || q > best_q + 1e-12) {
        found = true;
        best_q = q;
        best = std::move(candidate);
        best_split = &it->second;
      }
    }
    if (!found) break;
    report.levels.push_back({best, find_split(current, best), best_q});
    run.traces.push_back(best_split->best_trace);
    current = std::move(best);
  }
  report.chosen_level = argmax_q_s(report.levels);
  return run;
}

}  // namespace sigcomm
