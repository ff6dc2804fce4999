#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace sigcomm {

enum class MatrixKind { correlation, coherency };

std::string to_string(MatrixKind k);
MatrixKind parse_matrix_kind(const std::string& name);

/// Per-window symmetric connectivity matrix.
struct ConnectivityMatrix {
  MatrixKind kind = MatrixKind::correlation;
  std::size_t window_index = 0;
  Eigen::MatrixXd values;
  /// Non-fatal conditions hit while estimating (e.g. a constant channel).
  std::vector<std::string> warnings;

  Eigen::Index n() const noexcept { return values.rows(); }
};

/// Welch estimator settings. Zero segment_length means window_size / 8.
struct SpectralConfig {
  Eigen::Index segment_length = 0;
  double overlap_fraction = 0.5;
  double band_low = 1.0;
  double band_high = 100.0;

  /// Resolve defaults and validate against a window and sample rate.
  SpectralConfig resolved(Eigen::Index window_size, double sample_rate) const;
};

/// Zero-lag Pearson correlation after per-window mean removal. A constant
/// channel gets zero off-diagonal entries and a warning.
ConnectivityMatrix correlation_matrix(const Eigen::Ref<const Eigen::MatrixXd>& window,
                                      std::size_t window_index = 0);

/// Magnitude-squared coherence |P_ij|^2 / (P_ii P_jj) from Hann-tapered,
/// segment-averaged spectra, averaged over the bins inside the band.
ConnectivityMatrix coherency_matrix(const Eigen::Ref<const Eigen::MatrixXd>& window,
                                    double sample_rate, const SpectralConfig& cfg,
                                    std::size_t window_index = 0);

enum class AnticorrelationMode { weighted, count };

std::string to_string(AnticorrelationMode m);
AnticorrelationMode parse_anticorrelation_mode(const std::string& name);

/// Fraction of negative off-diagonal mass (weighted) or entries (count).
double anticorrelation_index(const ConnectivityMatrix& m, AnticorrelationMode mode);

std::string to_csv(const ConnectivityMatrix& m);
nlohmann::json to_json(const ConnectivityMatrix& m);
ConnectivityMatrix connectivity_from_json(const nlohmann::json& j);

}  // namespace sigcomm
