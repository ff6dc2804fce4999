#include "sigcomm/linalg.hpp"
#include "sigcomm/random.hpp"

#include <limits>

namespace sigcomm {

namespace {

struct Run {
  std::vector<int> assignment;
  Eigen::MatrixXd centroids;
  double wcss = 0.0;
  std::vector<double> history;
};

Eigen::MatrixXd seed_centroids(const Eigen::Ref<const Eigen::MatrixXd>& pts, int k, Rng& rng) {
  const Eigen::Index n = pts.rows();
  Eigen::MatrixXd c(k, pts.cols());
  c.row(0) = pts.row(static_cast<Eigen::Index>(rng.below(static_cast<std::size_t>(n))));
  Eigen::VectorXd d2 = (pts.rowwise() - c.row(0)).rowwise().squaredNorm();
  for (int j = 1; j < k; ++j) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (acc > target && d2(i) > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.below(static_cast<std::size_t>(n)));
    }
    c.row(j) = pts.row(pick);
    d2 = d2.cwiseMin((pts.rowwise() - c.row(j)).rowwise().squaredNorm());
  }
  return c;
}

double wcss_of(const Eigen::Ref<const Eigen::MatrixXd>& pts, const std::vector<int>& assign,
               const Eigen::MatrixXd& c) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) s += (pts.row(i) - c.row(assign[i])).squaredNorm();
  return s;
}

Run lloyd(const Eigen::Ref<const Eigen::MatrixXd>& pts, int k, Rng& rng, int max_iterations) {
  const Eigen::Index n = pts.rows();
  Run run;
  run.centroids = seed_centroids(pts, k, rng);
  run.assignment.assign(static_cast<std::size_t>(n), -1);
  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = run.assignment[i];
      double best_d = best >= 0 ? (pts.row(i) - run.centroids.row(best)).squaredNorm()
                                : std::numeric_limits<double>::infinity();
      for (int j = 0; j < k; ++j) {
        const double d = (pts.row(i) - run.centroids.row(j)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (best != run.assignment[i]) {
        run.assignment[i] = best;
        changed = true;
      }
    }

    // Empty clusters take the point farthest from its centroid.
    std::vector<int> size(static_cast<std::size_t>(k), 0);
    for (int a : run.assignment) ++size[a];
    for (int j = 0; j < k; ++j) {
      if (size[j] > 0) continue;
      Eigen::Index far = -1;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (size[run.assignment[i]] < 2) continue;
        const double d = (pts.row(i) - run.centroids.row(run.assignment[i])).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      --size[run.assignment[far]];
      run.assignment[far] = j;
      size[j] = 1;
      changed = true;
    }

    run.centroids.setZero();
    for (Eigen::Index i = 0; i < n; ++i) run.centroids.row(run.assignment[i]) += pts.row(i);
    for (int j = 0; j < k; ++j) run.centroids.row(j) /= static_cast<double>(size[j]);
    run.history.push_back(wcss_of(pts, run.assignment, run.centroids));
    if (!changed) break;
  }
  run.wcss = run.history.back();
  return run;
}

}  // namespace

KMeansResult kmeans(const Eigen::Ref<const Eigen::MatrixXd>& points, int k, std::uint64_t seed,
                    const KMeansOptions& opts) {
  if (k < 1 || k > points.rows())
    throw ConfigError("kmeans: k = " + std::to_string(k) + " outside [1, " +
                    std::to_string(points.rows()) + "]");
  if (opts.restarts < 1 || opts.max_iterations < 1)
    throw ConfigError("kmeans: restarts and iterations must be positive");
  KMeansResult best;
  bool have = false;
  for (int r = 0; r < opts.restarts; ++r) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(r)}));
    Run run = lloyd(points, k, rng, opts.max_iterations);
    if (!have || run.wcss < best.wcss) {
      best.assignment = std::move(run.assignment);
      best.centroids = std::move(run.centroids);
      best.wcss = run.wcss;
      best.best_restart = r;
      best.wcss_history = std::move(run.history);
      have = true;
    }
  }
  return best;
}

}  // namespace sigcomm
