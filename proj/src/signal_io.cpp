#include "sigcomm/signal_io.hpp"

#include "sigcomm/error.hpp"
#include "sigcomm/random.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace sigcomm {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string location(std::size_t line, std::size_t column) {
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

Recording::Recording(double sample_rate, Eigen::MatrixXd data)
    : sample_rate_(sample_rate), data_(std::move(data)) {
  if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_))
    throw DataError("sample rate must be positive, got " + std::to_string(sample_rate_));
  if (data_.cols() < 2)
    throw DataError("recording needs at least 2 channels, got " + std::to_string(data_.cols()));
  for (Eigen::Index c = 0; c < data_.cols(); ++c)
    for (Eigen::Index r = 0; r < data_.rows(); ++r)
      if (!std::isfinite(data_(r, c)))
        throw DataError("non-finite sample at sample " + std::to_string(r + 1) + ", channel " +
                        std::to_string(c + 1));
}

InputFormat parse_input_format(const std::string& name) {
  if (name == "csv") return InputFormat::csv;
  if (name == "raw-f32") return InputFormat::raw_f32;
  throw ConfigError("unknown input format '" + name + "' (expected csv or raw-f32)");
}

std::string to_string(InputFormat f) { return f == InputFormat::csv ? "csv" : "raw-f32"; }

Recording parse_csv(const std::string& text, bool header, double sample_rate) {
  std::vector<double> values;
  std::size_t width = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  std::istringstream in(text);
  std::string line;
  bool skipped_header = !header;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    std::size_t column = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = view.find(',', start);
      std::string_view field =
          trim(view.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                  : comma - start));
      ++column;
      if (!field.empty() && field.front() == '+') field.remove_prefix(1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
        throw DataError("cannot parse '" + std::string(field) + "' at " +
                        location(line_no, column));
      if (!std::isfinite(v))
        throw DataError("non-finite value '" + std::string(field) + "' at " +
                        location(line_no, column));
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (rows == 0) {
      width = column;
    } else if (column != width) {
      throw DataError("ragged row at line " + std::to_string(line_no) + ": " +
                      std::to_string(column) + " columns, expected " + std::to_string(width));
    }
    ++rows;
  }
  if (rows == 0) throw DataError("CSV input contains no samples");
  if (width < 2)
    throw DataError("recording needs at least 2 channels, got " + std::to_string(width));
  Eigen::MatrixXd data =
      Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          values.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(width));
  return Recording(sample_rate, std::move(data));
}

Recording decode_raw_f32(const std::vector<std::uint8_t>& bytes, Eigen::Index channels,
                         double sample_rate) {
  if (channels < 2)
    throw ConfigError("raw-f32 input needs --channels >= 2, got " + std::to_string(channels));
  const std::size_t frame = 4 * static_cast<std::size_t>(channels);
  if (bytes.size() % frame != 0)
    throw DataError("raw-f32 byte length " + std::to_string(bytes.size()) +
                    " is not divisible by 4 * channels = " + std::to_string(frame));
  const auto samples = static_cast<Eigen::Index>(bytes.size() / frame);
  Eigen::MatrixXd data(samples, channels);
  for (Eigen::Index r = 0; r < samples; ++r) {
    for (Eigen::Index c = 0; c < channels; ++c) {
      const std::size_t at = (static_cast<std::size_t>(r) * channels + c) * 4;
      std::uint32_t bits = static_cast<std::uint32_t>(bytes[at]) |
                           (static_cast<std::uint32_t>(bytes[at + 1]) << 8) |
                           (static_cast<std::uint32_t>(bytes[at + 2]) << 16) |
                           (static_cast<std::uint32_t>(bytes[at + 3]) << 24);
      const float f = std::bit_cast<float>(bits);
      if (!std::isfinite(f))
        throw DataError("non-finite sample at sample " + std::to_string(r + 1) + ", channel " +
                        std::to_string(c + 1));
      data(r, c) = static_cast<double>(f);
    }
  }
  return Recording(sample_rate, std::move(data));
}

Recording load_recording(const std::filesystem::path& path, const LoadOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (opts.format == InputFormat::raw_f32)
    return decode_raw_f32(bytes, opts.channels, opts.sample_rate);
  return parse_csv(std::string(bytes.begin(), bytes.end()), opts.csv_header, opts.sample_rate);
}

void write_csv(const Recording& rec, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  char buf[32];
  std::string line;
  for (Eigen::Index r = 0; r < rec.n_samples(); ++r) {
    line.clear();
    for (Eigen::Index c = 0; c < rec.n_channels(); ++c) {
      if (c) line.push_back(',');
      const auto res = std::to_chars(buf, buf + sizeof buf, rec.data()(r, c));
      line.append(buf, res.ptr);
    }
    line.push_back('\n');
    out << line;
  }
  if (!out) throw DataError("write failed for " + path.string());
}

void write_raw_f32(const Recording& rec, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  std::vector<char> buf(static_cast<std::size_t>(rec.n_channels()) * 4);
  for (Eigen::Index r = 0; r < rec.n_samples(); ++r) {
    for (Eigen::Index c = 0; c < rec.n_channels(); ++c) {
      const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(rec.data()(r, c)));
      for (int b = 0; b < 4; ++b) buf[c * 4 + b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw DataError("write failed for " + path.string());
}

std::vector<Window> window_recording(const Recording& rec, const WindowSpec& spec) {
  if (spec.window_size < 2)
    throw ConfigError("window size must be >= 2, got " + std::to_string(spec.window_size));
  if (spec.window_size > rec.n_samples())
    throw ConfigError("window size " + std::to_string(spec.window_size) +
                      " exceeds recording length " + std::to_string(rec.n_samples()));
  const auto count = rec.n_samples() / spec.window_size;
  std::vector<Window> windows;
  windows.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i)
    windows.push_back({static_cast<std::size_t>(i), i * spec.window_size, spec.window_size});
  return windows;
}

void SyntheticSpec::validate() const {
  if (n_channels < 2) throw ConfigError("synthetic recording needs >= 2 channels");
  if (n_samples < 2) throw ConfigError("synthetic recording needs >= 2 samples");
  if (!(sample_rate > 0.0)) throw ConfigError("sample rate must be positive");
  if (static_cast<Eigen::Index>(community.size()) != n_channels)
    throw ConfigError("community labels cover " + std::to_string(community.size()) +
                      " channels, expected " + std::to_string(n_channels));
  if (!(shared_signal_strength >= 0.0 && shared_signal_strength <= 1.0))
    throw ConfigError("shared signal strength must lie in [0, 1]");
  if (!(cross_coupling >= 0.0 && cross_coupling <= 1.0))
    throw ConfigError("cross coupling must lie in [0, 1]");
  if (!(noise_level >= 0.0) || !(drive_strength >= 0.0))
    throw ConfigError("noise level and drive strength must be non-negative");
}

std::vector<int> communities_from_sizes(const std::vector<int>& sizes) {
  std::vector<int> labels;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    if (sizes[c] <= 0) throw ConfigError("community sizes must be positive");
    labels.insert(labels.end(), static_cast<std::size_t>(sizes[c]), static_cast<int>(c));
  }
  return labels;
}

Recording generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  // Distinct labels in order of first appearance; the first is the reference
  // community for anticorrelation.
  std::vector<int> labels;
  std::vector<Eigen::Index> slot(spec.community.size());
  for (std::size_t c = 0; c < spec.community.size(); ++c) {
    auto it = std::find(labels.begin(), labels.end(), spec.community[c]);
    if (it == labels.end()) {
      labels.push_back(spec.community[c]);
      it = labels.end() - 1;
    }
    slot[c] = it - labels.begin();
  }

  const Eigen::Index t = spec.n_samples;
  const auto n_comm = static_cast<Eigen::Index>(labels.size());
  Rng rng(derive_seed(seed, {0x5359ULL}));
  Eigen::MatrixXd latent(t, n_comm);
  for (Eigen::Index k = 0; k < n_comm; ++k)
    for (Eigen::Index s = 0; s < t; ++s) latent(s, k) = rng.normal();
  if (spec.anticorrelated_pairs && n_comm > 1) {
    const double kappa = spec.cross_coupling;
    const double keep = std::sqrt(1.0 - kappa * kappa);
    for (Eigen::Index k = 1; k < n_comm; ++k)
      latent.col(k) = -kappa * latent.col(0) + keep * latent.col(k);
  }
  Eigen::VectorXd drive(t);
  for (Eigen::Index s = 0; s < t; ++s) drive(s) = rng.normal();

  Eigen::MatrixXd data(t, spec.n_channels);
  for (Eigen::Index c = 0; c < spec.n_channels; ++c) {
    for (Eigen::Index s = 0; s < t; ++s)
      data(s, c) = spec.shared_signal_strength * latent(s, slot[c]) +
                   spec.drive_strength * drive(s) + spec.noise_level * rng.normal();
  }
  return Recording(spec.sample_rate, std::move(data));
}

}  // namespace sigcomm
