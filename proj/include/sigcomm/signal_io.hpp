#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sigcomm {

/// Sampled multichannel signal: rows are samples, columns are channels.
/// Immutable after construction; the constructor enforces the invariants
/// (positive rate, at least two channels, all samples finite).
class Recording {
 public:
  Recording(double sample_rate, Eigen::MatrixXd data);

  double sample_rate() const noexcept { return sample_rate_; }
  Eigen::Index n_channels() const noexcept { return data_.cols(); }
  Eigen::Index n_samples() const noexcept { return data_.rows(); }
  const Eigen::MatrixXd& data() const noexcept { return data_; }

 private:
  double sample_rate_;
  Eigen::MatrixXd data_;
};

enum class InputFormat { csv, raw_f32 };

InputFormat parse_input_format(const std::string& name);
std::string to_string(InputFormat f);

struct LoadOptions {
  InputFormat format = InputFormat::csv;
  bool csv_header = false;     // skip the first CSV line
  Eigen::Index channels = 0;   // mandatory for raw-f32
  double sample_rate = 1000.0; // neither format carries it
};

/// Throws DataError with row/column location on malformed input.
Recording load_recording(const std::filesystem::path& path, const LoadOptions& opts);

/// Parse CSV text directly (rows = samples, columns = channels).
Recording parse_csv(const std::string& text, bool header, double sample_rate);

/// Decode little-endian interleaved binary32 samples.
Recording decode_raw_f32(const std::vector<std::uint8_t>& bytes, Eigen::Index channels,
                         double sample_rate);

void write_csv(const Recording& rec, const std::filesystem::path& path);
void write_raw_f32(const Recording& rec, const std::filesystem::path& path);

struct WindowSpec {
  Eigen::Index window_size = 0;
};

/// A half-open sample range [offset, offset + length) of a recording.
struct Window {
  std::size_t index = 0;
  Eigen::Index offset = 0;
  Eigen::Index length = 0;
};

/// Consecutive non-overlapping windows; the trailing partial window is dropped.
std::vector<Window> window_recording(const Recording& rec, const WindowSpec& spec);

/// View of the samples of one window.
inline auto window_block(const Recording& rec, const Window& w) {
  return rec.data().middleRows(w.offset, w.length);
}

struct SyntheticSpec {
  Eigen::Index n_channels = 16;
  Eigen::Index n_samples = 10000;
  double sample_rate = 1000.0;
  /// Planted community label per channel.
  std::vector<int> community;
  /// Weight of the community latent in each channel, in [0, 1].
  double shared_signal_strength = 0.9;
  /// When set, every community after the first carries -cross_coupling times
  /// the first community's latent, making cross-group pairs anticorrelated.
  bool anticorrelated_pairs = false;
  double cross_coupling = 0.5;
  double noise_level = 0.3;
  /// Weight of a white drive shared by every channel (same sign everywhere).
  double drive_strength = 0.0;

  void validate() const;
};

/// Expand community sizes such as {9, 7} into a per-channel label vector.
std::vector<int> communities_from_sizes(const std::vector<int>& sizes);

Recording generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace sigcomm
