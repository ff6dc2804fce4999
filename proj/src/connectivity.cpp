#include "sigcomm/connectivity.hpp"

#include "sigcomm/error.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <numbers>

namespace sigcomm {

std::string to_string(MatrixKind k) {
  return k == MatrixKind::correlation ? "correlation" : "coherency";
}

MatrixKind parse_matrix_kind(const std::string& name) {
  if (name == "correlation") return MatrixKind::correlation;
  if (name == "coherency") return MatrixKind::coherency;
  throw ConfigError("unknown matrix kind '" + name + "' (expected correlation or coherency)");
}

std::string to_string(AnticorrelationMode m) {
  return m == AnticorrelationMode::weighted ? "weighted" : "count";
}

AnticorrelationMode parse_anticorrelation_mode(const std::string& name) {
  if (name == "weighted") return AnticorrelationMode::weighted;
  if (name == "count") return AnticorrelationMode::count;
  throw ConfigError("unknown anticorrelation mode '" + name + "' (expected weighted or count)");
}

ConnectivityMatrix correlation_matrix(const Eigen::Ref<const Eigen::MatrixXd>& window,
                                      std::size_t window_index) {
  if (window.rows() < 2) throw DataError("correlation needs a window of at least 2 samples");
  if (!window.allFinite()) throw DataError("window contains non-finite samples");
  const Eigen::Index n = window.cols();
  const Eigen::MatrixXd centered = window.rowwise() - window.colwise().mean();
  const Eigen::MatrixXd gram = centered.transpose() * centered;

  ConnectivityMatrix out;
  out.kind = MatrixKind::correlation;
  out.window_index = window_index;
  out.values = Eigen::MatrixXd::Identity(n, n);

  std::vector<bool> constant(static_cast<std::size_t>(n));
  for (Eigen::Index c = 0; c < n; ++c) {
    constant[c] = window.col(c).maxCoeff() == window.col(c).minCoeff();
    if (constant[c])
      out.warnings.push_back("channel " + std::to_string(c + 1) + " is constant in window " +
                             std::to_string(window_index) + "; its correlations are set to 0");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double r = 0.0;
      if (!constant[i] && !constant[j])
        r = std::clamp(gram(i, j) / std::sqrt(gram(i, i) * gram(j, j)), -1.0, 1.0);
      out.values(i, j) = r;
      out.values(j, i) = r;
    }
  }
  return out;
}

SpectralConfig SpectralConfig::resolved(Eigen::Index window_size, double sample_rate) const {
  SpectralConfig r = *this;
  if (r.segment_length == 0) r.segment_length = window_size / 8;
  if (r.segment_length < 2 || r.segment_length > window_size)
    throw ConfigError("segment length " + std::to_string(r.segment_length) +
                      " must lie in [2, window size " + std::to_string(window_size) + "]");
  if (!(r.overlap_fraction >= 0.0 && r.overlap_fraction < 1.0))
    throw ConfigError("overlap fraction must lie in [0, 1)");
  if (!(r.band_low > 0.0 && r.band_low < r.band_high && r.band_high <= sample_rate / 2.0))
    throw ConfigError("band must satisfy 0 < low < high <= sample_rate / 2");
  return r;
}

ConnectivityMatrix coherency_matrix(const Eigen::Ref<const Eigen::MatrixXd>& window,
                                    double sample_rate, const SpectralConfig& config,
                                    std::size_t window_index) {
  if (!window.allFinite()) throw DataError("window contains non-finite samples");
  const SpectralConfig cfg = config.resolved(window.rows(), sample_rate);
  const Eigen::Index len = cfg.segment_length;
  const auto step = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(std::floor(static_cast<double>(len) * (1.0 - cfg.overlap_fraction))));
  const Eigen::Index n_segments = 1 + (window.rows() - len) / step;
  if (n_segments < 2)
    throw DataError("coherency needs at least 2 segments per window, got " +
                    std::to_string(n_segments) + "; use a smaller segment length");

  // Bins inside the band.
  std::vector<Eigen::Index> bins;
  for (Eigen::Index k = 0; k <= len / 2; ++k) {
    const double f = static_cast<double>(k) * sample_rate / static_cast<double>(len);
    if (f >= cfg.band_low && f <= cfg.band_high) bins.push_back(k);
  }
  if (bins.empty())
    throw ConfigError("no frequency bins fall inside the coherency band; widen it or use longer segments");

  const Eigen::Index n = window.cols();
  const auto nb = static_cast<Eigen::Index>(bins.size());
  const Eigen::MatrixXd centered = window.rowwise() - window.colwise().mean();

  std::vector<double> taper(static_cast<std::size_t>(len));
  for (Eigen::Index t = 0; t < len; ++t)
    taper[t] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(t) /
                                    static_cast<double>(len));

  // Spectra of the current segment, one column per channel (band bins only).
  Eigen::MatrixXcd spectra(nb, n);
  // Accumulated cross spectra: auto[b, i] and cross[b, pair].
  Eigen::MatrixXd autos = Eigen::MatrixXd::Zero(nb, n);
  Eigen::MatrixXcd cross = Eigen::MatrixXcd::Zero(nb, n * (n - 1) / 2);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> buffer(static_cast<std::size_t>(len));
  std::vector<std::complex<double>> freq;
  for (Eigen::Index s = 0; s < n_segments; ++s) {
    const Eigen::Index start = s * step;
    for (Eigen::Index c = 0; c < n; ++c) {
      const double mean = centered.col(c).segment(start, len).mean();
      for (Eigen::Index t = 0; t < len; ++t)
        buffer[t] = (centered(start + t, c) - mean) * taper[t];
      fft.fwd(freq, buffer);
      for (Eigen::Index b = 0; b < nb; ++b) spectra(b, c) = freq[static_cast<std::size_t>(bins[b])];
    }
    autos += spectra.cwiseAbs2();
    Eigen::Index pair = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j, ++pair)
        cross.col(pair) += spectra.col(i).cwiseProduct(spectra.col(j).conjugate());
  }

  ConnectivityMatrix out;
  out.kind = MatrixKind::coherency;
  out.window_index = window_index;
  out.values = Eigen::MatrixXd::Identity(n, n);
  bool dead_bins = false;
  Eigen::Index pair = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j, ++pair) {
      double sum = 0.0;
      for (Eigen::Index b = 0; b < nb; ++b) {
        const double denom = autos(b, i) * autos(b, j);
        if (denom > 0.0)
          sum += std::min(1.0, std::norm(cross(b, pair)) / denom);
        else
          dead_bins = true;
      }
      const double v = std::clamp(sum / static_cast<double>(nb), 0.0, 1.0);
      out.values(i, j) = v;
      out.values(j, i) = v;
    }
  }
  if (dead_bins)
    out.warnings.push_back("window " + std::to_string(window_index) +
                           " has channels with zero in-band power; their coherence is set to 0");
  return out;
}

double anticorrelation_index(const ConnectivityMatrix& m, AnticorrelationMode mode) {
  if (m.kind != MatrixKind::correlation)
    throw ConfigError("anticorrelation index is defined for correlation matrices only");
  double negative = 0.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < m.n(); ++i) {
    for (Eigen::Index j = i + 1; j < m.n(); ++j) {
      const double v = m.values(i, j);
      if (v == 0.0) continue;
      const double mass = mode == AnticorrelationMode::weighted ? std::abs(v) : 1.0;
      total += mass;
      if (v < 0.0) negative += mass;
    }
  }
  return total > 0.0 ? negative / total : 0.0;
}

std::string to_csv(const ConnectivityMatrix& m) {
  std::string out;
  char buf[40];
  for (Eigen::Index i = 0; i < m.n(); ++i) {
    for (Eigen::Index j = 0; j < m.n(); ++j) {
      if (j) out.push_back(',');
      const auto res =
          std::to_chars(buf, buf + sizeof buf, m.values(i, j), std::chars_format::general, 17);
      out.append(buf, res.ptr);
    }
    out.push_back('\n');
  }
  return out;
}

nlohmann::json to_json(const ConnectivityMatrix& m) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(m.n() * m.n()));
  for (Eigen::Index i = 0; i < m.n(); ++i)
    for (Eigen::Index j = 0; j < m.n(); ++j) flat.push_back(m.values(i, j));
  return {{"kind", to_string(m.kind)},
          {"window_index", m.window_index},
          {"n", m.n()},
          {"values", flat}};
}

ConnectivityMatrix connectivity_from_json(const nlohmann::json& j) {
  ConnectivityMatrix m;
  m.kind = parse_matrix_kind(j.at("kind").get<std::string>());
  m.window_index = j.at("window_index").get<std::size_t>();
  const auto n = j.at("n").get<Eigen::Index>();
  const auto flat = j.at("values").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(flat.size()) != n * n)
    throw DataError("connectivity JSON: values has " + std::to_string(flat.size()) +
                    " entries, expected n*n");
  m.values.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k) m.values(i, k) = flat[static_cast<std::size_t>(i * n + k)];
  return m;
}

}  // namespace sigcomm
