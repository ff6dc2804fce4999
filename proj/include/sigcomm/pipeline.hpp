#pragma once

#include "sigcomm/annealing.hpp"
#include "sigcomm/connectivity.hpp"
#include "sigcomm/girvan_newman.hpp"
#include "sigcomm/report.hpp"
#include "sigcomm/signal_io.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sigcomm {

struct PipelineConfig {
  std::filesystem::path input;
  LoadOptions load;
  Eigen::Index window_size = 0;
  std::vector<MatrixKind> kinds{MatrixKind::correlation};
  SpectralConfig spectral;
  double threshold = 0.0;
  std::vector<Method> methods{Method::A, Method::B, Method::C, Method::D};
  AnnealingSchedule schedule;
  int max_levels = 8;
  PathLength gn_length = PathLength::hops;
  AnticorrelationMode anticorrelation_mode = AnticorrelationMode::weighted;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  bool plots = false;
  bool dump_matrices = false;
  /// Adds removal sequences and annealing traces to the dendrogram files.
  bool verbose_traces = false;
  /// 0 picks the hardware concurrency.
  unsigned workers = 1;

  /// Throws ConfigError. Checks that do not need the recording.
  void validate() const;
};

struct WindowResult {
  std::size_t window_index = 0;
  MatrixKind kind = MatrixKind::correlation;
  int n = 0;
  /// Correlation windows only.
  std::optional<double> anticorrelation_weighted;
  std::optional<double> anticorrelation_count;
  /// One report per configured method, in configuration order.
  std::vector<MethodReport> reports;
  std::vector<RemovalStep> gn_removals;
  std::vector<std::vector<double>> annealing_traces;
  std::vector<std::string> warnings;
  /// Kept only when matrices are dumped.
  std::optional<ConnectivityMatrix> matrix;

  const MethodReport& report(Method m) const;
  /// Anticorrelation in the configured mode.
  std::optional<double> anticorrelation(AnticorrelationMode mode) const {
    return mode == AnticorrelationMode::weighted ? anticorrelation_weighted : anticorrelation_count;
  }
};

/// Seed of one method on one window.
std::uint64_t window_seed(std::uint64_t master, std::size_t window_index, Method m);

/// Every window and kind of an in-memory recording, sorted by kind (in
/// configuration order) then window index. Input path and output directory
/// are ignored. On failure rethrows the error of the first failed task
/// (by kind, then window), prefixed with the window index and stage.
std::vector<WindowResult> analyze_recording(const Recording& rec, const PipelineConfig& cfg);

/// Results of one matrix kind, in window order.
std::vector<const WindowResult*> results_of_kind(const std::vector<WindowResult>& results,
                                                 MatrixKind kind);

std::string cluster_map_csv(const std::vector<const WindowResult*>& results, Method m);
std::string modularity_csv(const std::vector<const WindowResult*>& results,
                           const std::vector<Method>& methods);
std::string anticorrelation_csv(const std::vector<const WindowResult*>& results);
nlohmann::json dendrogram_json(const WindowResult& r, bool verbose);

std::string line_plot_svg(const std::string& title, const std::vector<std::string>& series_names,
                          const std::vector<std::vector<double>>& series);
std::string cluster_map_svg(const std::string& title, const std::vector<const WindowResult*>& results,
                            Method m);

struct PipelineOutput {
  std::vector<WindowResult> results;
  /// Written files relative to the output directory, sorted.
  std::vector<std::string> files;
};

/// Load, analyse and write every artifact plus manifest.json. On failure a
/// manifest with status "failed" is written before the error propagates.
PipelineOutput run_pipeline(const PipelineConfig& cfg);

/// Emit the artifacts of existing results; returns the written files.
std::vector<std::string> write_outputs(const std::vector<WindowResult>& results,
                                       const PipelineConfig& cfg, const Recording& rec);

}  // namespace sigcomm
