#include "sigcomm/pipeline.hpp"

#include "sigcomm/error.hpp"
#include "sigcomm/fiedler.hpp"
#include "sigcomm/random.hpp"
#include "sigcomm/spectral_coords.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

namespace sigcomm {

namespace fs = std::filesystem;

void PipelineConfig::validate() const {
  if (methods.empty()) throw ConfigError("no methods selected");
  if (kinds.empty()) throw ConfigError("no matrix kinds selected");
  if (window_size < 2) throw ConfigError("window size must be at least 2 samples");
  if (!(threshold >= 0.0 && threshold < 1.0)) throw ConfigError("threshold must lie in [0, 1)");
  if (max_levels < 1) throw ConfigError("max levels must be positive");
  auto sorted_methods = methods;
  std::sort(sorted_methods.begin(), sorted_methods.end());
  if (std::adjacent_find(sorted_methods.begin(), sorted_methods.end()) != sorted_methods.end())
    throw ConfigError("a method is listed twice");
  auto sorted_kinds = kinds;
  std::sort(sorted_kinds.begin(), sorted_kinds.end());
  if (std::adjacent_find(sorted_kinds.begin(), sorted_kinds.end()) != sorted_kinds.end())
    throw ConfigError("a matrix kind is listed twice");
  if (std::count(methods.begin(), methods.end(), Method::D)) schedule.validate();
  if (!(spectral.overlap_fraction >= 0.0 && spectral.overlap_fraction < 1.0))
    throw ConfigError("overlap must lie in [0, 1)");
  if (!(spectral.band_low >= 0.0 && spectral.band_high > spectral.band_low))
    throw ConfigError("band must satisfy 0 <= low < high");
  if (spectral.segment_length < 0) throw ConfigError("segment length must be non-negative");
}

const MethodReport& WindowResult::report(Method m) const {
  for (const auto& r : reports)
    if (r.method == m) return r;
  throw ConfigError(std::string("method ") + to_char(m) + " was not run");
}

std::uint64_t window_seed(std::uint64_t master, std::size_t window_index, Method m) {
  return derive_seed(master, {static_cast<std::uint64_t>(window_index),
                              static_cast<std::uint64_t>(to_char(m))});
}

namespace {

enum class ErrorKind { config, data, numeric, other };

struct Failure {
  std::size_t task = 0;
  std::size_t window = 0;
  MatrixKind kind = MatrixKind::correlation;
  std::string stage;
  ErrorKind error = ErrorKind::other;
  std::string message;

  std::string describe() const {
    return "window " + std::to_string(window) + " (" + to_string(kind) + "), stage " + stage +
           ": " + message;
  }

  [[noreturn]] void raise() const {
    switch (error) {
      case ErrorKind::config: throw ConfigError(describe());
      case ErrorKind::data: throw DataError(describe());
      case ErrorKind::numeric: throw NumericError(describe());
      case ErrorKind::other: break;
    }
    throw std::runtime_error(describe());
  }
};

struct Analysis {
  std::vector<WindowResult> results;  // task order
  std::vector<char> done;
  std::optional<Failure> failure;
};

WindowResult analyze_window(const Recording& rec, const Window& w, MatrixKind kind,
                            const PipelineConfig& cfg, std::string& stage) {
  WindowResult out;
  out.window_index = w.index;
  out.kind = kind;
  stage = "matrix";
  const auto block = window_block(rec, w);
  ConnectivityMatrix m = kind == MatrixKind::correlation
                             ? correlation_matrix(block, w.index)
                             : coherency_matrix(block, rec.sample_rate(), cfg.spectral, w.index);
  out.warnings = m.warnings;
  if (kind == MatrixKind::correlation) {
    out.anticorrelation_weighted = anticorrelation_index(m, AnticorrelationMode::weighted);
    out.anticorrelation_count = anticorrelation_index(m, AnticorrelationMode::count);
  }
  stage = "graph";
  const SignedGraph g = from_connectivity(m, cfg.threshold);
  out.n = g.n();
  if (cfg.dump_matrices) out.matrix = std::move(m);

  for (Method method : cfg.methods) {
    stage = std::string("method ") + to_char(method);
    const std::uint64_t seed = window_seed(cfg.seed, w.index, method);
    switch (method) {
      case Method::A:
        out.reports.push_back(method_a(g));
        break;
      case Method::B:
        out.reports.push_back(method_b(g, seed, {.k_max = cfg.max_levels}));
        break;
      case Method::C: {
        auto run = girvan_newman(g, {.length = cfg.gn_length});
        out.reports.push_back(std::move(run.report));
        out.gn_removals = std::move(run.removals);
        break;
      }
      case Method::D: {
        auto run = hierarchical_annealing(
            g, seed, {.schedule = cfg.schedule, .max_clusters = cfg.max_levels});
        out.reports.push_back(std::move(run.report));
        out.annealing_traces = std::move(run.traces);
        break;
      }
    }
  }
  return out;
}

Analysis analyze(const Recording& rec, const PipelineConfig& cfg) {
  cfg.validate();
  const auto windows = window_recording(rec, {cfg.window_size});
  if (std::count(cfg.kinds.begin(), cfg.kinds.end(), MatrixKind::coherency))
    (void)cfg.spectral.resolved(cfg.window_size, rec.sample_rate());

  const std::size_t n_tasks = windows.size() * cfg.kinds.size();
  Analysis a;
  a.results.resize(n_tasks);
  a.done.assign(n_tasks, false);
  std::vector<std::optional<Failure>> failures(n_tasks);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};

  // Tasks are claimed in increasing order, so every task before the first
  // failure has been claimed and runs to completion.
  auto worker = [&] {
    for (;;) {
      if (abort.load()) return;
      const std::size_t t = next.fetch_add(1);
      if (t >= n_tasks) return;
      const MatrixKind kind = cfg.kinds[t / windows.size()];
      const Window& w = windows[t % windows.size()];
      std::string stage;
      Failure f{t, w.index, kind, "", ErrorKind::other, ""};
      try {
        a.results[t] = analyze_window(rec, w, kind, cfg, stage);
        a.done[t] = true;
        continue;
      } catch (const ConfigError& e) {
        f.error = ErrorKind::config;
        f.message = e.what();
      } catch (const DataError& e) {
        f.error = ErrorKind::data;
        f.message = e.what();
      } catch (const NumericError& e) {
        f.error = ErrorKind::numeric;
        f.message = e.what();
      } catch (const std::exception& e) {
        f.message = e.what();
      }
      f.stage = stage;
      failures[t] = std::move(f);
      abort.store(true);
    }
  };

  unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n_tasks, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }

  for (auto& f : failures)
    if (f) {
      a.failure = std::move(f);
      break;
    }
  return a;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string file_stem(MatrixKind kind, std::size_t window) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04zu", window);
  return to_string(kind) + "_" + buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory '" + dir.string() + "': " + ec.message());
}

nlohmann::json config_json(const PipelineConfig& cfg) {
  auto kinds = nlohmann::json::array();
  for (auto k : cfg.kinds) kinds.push_back(to_string(k));
  auto methods = nlohmann::json::array();
  for (auto m : cfg.methods) methods.push_back(std::string(1, to_char(m)));
  return {{"input", cfg.input.generic_string()},
          {"format", to_string(cfg.load.format)},
          {"sample_rate", cfg.load.sample_rate},
          {"window_size", cfg.window_size},
          {"kinds", kinds},
          {"methods", methods},
          {"threshold", cfg.threshold},
          {"seed", cfg.seed},
          {"max_levels", cfg.max_levels},
          {"gn_length", to_string(cfg.gn_length)},
          {"anticorr_mode", to_string(cfg.anticorrelation_mode)},
          {"annealing",
           {{"steps", cfg.schedule.temp_steps},
            {"samples", cfg.schedule.samples_per_temp},
            {"t_initial", cfg.schedule.t_initial},
            {"t_final", cfg.schedule.t_final}}},
          {"spectral",
           {{"segment_length", cfg.spectral.segment_length},
            {"overlap", cfg.spectral.overlap_fraction},
            {"band_low", cfg.spectral.band_low},
            {"band_high", cfg.spectral.band_high}}}};
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::vector<WindowResult> analyze_recording(const Recording& rec, const PipelineConfig& cfg) {
  Analysis a = analyze(rec, cfg);
  if (a.failure) a.failure->raise();
  return std::move(a.results);
}

std::vector<const WindowResult*> results_of_kind(const std::vector<WindowResult>& results,
                                                 MatrixKind kind) {
  std::vector<const WindowResult*> out;
  for (const auto& r : results)
    if (r.kind == kind) out.push_back(&r);
  std::stable_sort(out.begin(), out.end(), [](const WindowResult* x, const WindowResult* y) {
    return x->window_index < y->window_index;
  });
  return out;
}

std::string cluster_map_csv(const std::vector<const WindowResult*>& results, Method m) {
  if (results.empty()) throw DataError("no results to emit");
  const int n = results.front()->n;
  std::string out = "vertex";
  for (const auto* r : results) out += "," + std::to_string(r->window_index);
  out += "\n";
  for (int v = 0; v < n; ++v) {
    out += std::to_string(v + 1);
    for (const auto* r : results) out += "," + std::to_string(r->report(m).chosen()[v]);
    out += "\n";
  }
  return out;
}

std::string modularity_csv(const std::vector<const WindowResult*>& results,
                           const std::vector<Method>& methods) {
  if (results.empty()) throw DataError("no results to emit");
  std::string out = "window";
  for (Method m : methods) out += std::string(",") + to_char(m);
  out += "\n";
  for (const auto* r : results) {
    out += std::to_string(r->window_index);
    for (Method m : methods) out += "," + format_double(r->report(m).chosen_q_s());
    out += "\n";
  }
  return out;
}

std::string anticorrelation_csv(const std::vector<const WindowResult*>& results) {
  if (results.empty()) throw DataError("no results to emit");
  std::string out = "window,weighted,count\n";
  for (const auto* r : results) {
    if (!r->anticorrelation_weighted || !r->anticorrelation_count)
      throw DataError("anticorrelation is defined for correlation windows only");
    out += std::to_string(r->window_index) + "," + format_double(*r->anticorrelation_weighted) +
           "," + format_double(*r->anticorrelation_count) + "\n";
  }
  return out;
}

nlohmann::json dendrogram_json(const WindowResult& r, bool verbose) {
  nlohmann::json methods = nlohmann::json::object();
  for (const auto& rep : r.reports) methods[std::string(1, to_char(rep.method))] = to_json(rep);
  nlohmann::json j{{"window", r.window_index}, {"kind", to_string(r.kind)}, {"n", r.n},
                   {"methods", methods}};
  if (r.anticorrelation_weighted)
    j["anticorrelation"] = {{"weighted", *r.anticorrelation_weighted},
                            {"count", *r.anticorrelation_count}};
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  if (verbose) {
    if (!r.gn_removals.empty()) j["removals"] = to_json(r.gn_removals);
    if (!r.annealing_traces.empty()) j["annealing_traces"] = r.annealing_traces;
  }
  return j;
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string svg_header(int width, int height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string line_plot_svg(const std::string& title, const std::vector<std::string>& series_names,
                          const std::vector<std::vector<double>>& series) {
  const int width = 720, height = 360, left = 60, right = 120, top = 40, bottom = 40;
  double lo = 0.0, hi = 1.0;
  std::size_t points = 1;
  for (const auto& s : series)
    for (double v : s) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  for (const auto& s : series) points = std::max(points, s.size());
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  auto x_of = [&](std::size_t i) {
    return left + (points > 1 ? plot_w * static_cast<double>(i) / static_cast<double>(points - 1) : 0.0);
  };
  auto y_of = [&](double v) { return top + plot_h * (hi - v) / (hi - lo); };

  std::string svg = svg_header(width, height);
  svg += "<text x=\"" + std::to_string(left) + "\" y=\"24\">" + title + "</text>\n";
  svg += "<rect x=\"" + std::to_string(left) + "\" y=\"" + std::to_string(top) + "\" width=\"" +
         fixed(plot_w) + "\" height=\"" + fixed(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double tick : {lo, 0.0, hi}) {
    svg += "<text x=\"" + std::to_string(left - 6) + "\" y=\"" + fixed(y_of(tick) + 4) +
           "\" text-anchor=\"end\">" + fixed(tick) + "</text>\n";
  }
  svg += "<line x1=\"" + std::to_string(left) + "\" x2=\"" + fixed(left + plot_w) + "\" y1=\"" +
         fixed(y_of(0.0)) + "\" y2=\"" + fixed(y_of(0.0)) + "\" stroke=\"#bbbbbb\"/>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    std::string pts;
    for (std::size_t i = 0; i < series[s].size(); ++i)
      pts += fixed(x_of(i)) + "," + fixed(y_of(series[s][i])) + " ";
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" +
           pts + "\"/>\n";
    const double ly = top + 16.0 * static_cast<double>(s + 1);
    svg += "<text x=\"" + fixed(left + plot_w + 12) + "\" y=\"" + fixed(ly) + "\" fill=\"" + color +
           "\">" + (s < series_names.size() ? series_names[s] : "") + "</text>\n";
  }
  svg += "<text x=\"" + fixed(left + plot_w / 2) + "\" y=\"" + std::to_string(height - 10) +
         "\" text-anchor=\"middle\">window</text>\n</svg>\n";
  return svg;
}

std::string cluster_map_svg(const std::string& title, const std::vector<const WindowResult*>& results,
                            Method m) {
  if (results.empty()) throw DataError("no results to emit");
  const int n = results.front()->n;
  const int cols = static_cast<int>(results.size());
  const int cell_w = std::max(2, std::min(24, 640 / std::max(cols, 1)));
  const int cell_h = 16, left = 40, top = 40;
  std::string svg = svg_header(left + cols * cell_w + 20, top + n * cell_h + 20);
  svg += "<text x=\"" + std::to_string(left) + "\" y=\"24\">" + title + "</text>\n";
  for (int v = 0; v < n; ++v) {
    svg += "<text x=\"" + std::to_string(left - 6) + "\" y=\"" +
           std::to_string(top + v * cell_h + cell_h - 4) + "\" text-anchor=\"end\">" +
           std::to_string(v + 1) + "</text>\n";
    for (int c = 0; c < cols; ++c) {
      const int id = results[static_cast<std::size_t>(c)]->report(m).chosen()[v];
      svg += "<rect x=\"" + std::to_string(left + c * cell_w) + "\" y=\"" +
             std::to_string(top + v * cell_h) + "\" width=\"" + std::to_string(cell_w) +
             "\" height=\"" + std::to_string(cell_h) + "\" fill=\"" +
             kPalette[static_cast<std::size_t>(id - 1) % std::size(kPalette)] + "\"/>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<std::string> write_outputs(const std::vector<WindowResult>& results,
                                       const PipelineConfig& cfg, const Recording& rec) {
  if (results.empty()) throw DataError("no results to emit");
  const fs::path& out = cfg.out_dir;
  make_dir(out);
  std::vector<std::string> files;
  auto emit = [&](const std::string& rel, const std::string& text) {
    write_text(out / rel, text);
    files.push_back(rel);
  };

  make_dir(out / "dendrograms");
  if (cfg.plots) make_dir(out / "plots");
  if (cfg.dump_matrices) make_dir(out / "matrices");
  nlohmann::json warnings = nlohmann::json::array();

  for (MatrixKind kind : cfg.kinds) {
    const auto rs = results_of_kind(results, kind);
    const std::string k = to_string(kind);
    for (Method m : cfg.methods) {
      const std::string name = "cluster_map_" + k + "_" + to_char(m);
      emit(name + ".csv", cluster_map_csv(rs, m));
      if (cfg.plots) emit("plots/" + name + ".svg", cluster_map_svg(name, rs, m));
    }
    emit("modularity_" + k + ".csv", modularity_csv(rs, cfg.methods));
    if (cfg.plots) {
      std::vector<std::string> names;
      std::vector<std::vector<double>> series;
      for (Method m : cfg.methods) {
        names.emplace_back(1, to_char(m));
        auto& s = series.emplace_back();
        for (const auto* r : rs) s.push_back(r->report(m).chosen_q_s());
      }
      emit("plots/modularity_" + k + ".svg", line_plot_svg("signed modularity (" + k + ")", names, series));
    }
    if (kind == MatrixKind::correlation) {
      emit("anticorrelation.csv", anticorrelation_csv(rs));
      if (cfg.plots) {
        std::vector<std::vector<double>> series(2);
        for (const auto* r : rs) {
          series[0].push_back(*r->anticorrelation_weighted);
          series[1].push_back(*r->anticorrelation_count);
        }
        emit("plots/anticorrelation.svg",
             line_plot_svg("anticorrelation index", {"weighted", "count"}, series));
      }
    }
    for (const auto* r : rs) {
      const std::string stem = file_stem(kind, r->window_index);
      emit("dendrograms/" + stem + ".json", json_text(dendrogram_json(*r, cfg.verbose_traces)));
      if (cfg.dump_matrices && r->matrix) emit("matrices/" + stem + ".csv", to_csv(*r->matrix));
      for (const auto& w : r->warnings) warnings.push_back(stem + ": " + w);
    }
  }

  std::sort(files.begin(), files.end());
  const auto by_kind = results_of_kind(results, cfg.kinds.front());
  nlohmann::json manifest{{"status", "ok"},
                          {"config", config_json(cfg)},
                          {"channels", rec.n_channels()},
                          {"samples", rec.n_samples()},
                          {"windows", by_kind.size()},
                          {"files", files},
                          {"warnings", warnings}};
  write_text(out / "manifest.json", json_text(manifest));
  return files;
}

PipelineOutput run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  if (cfg.out_dir.empty()) throw ConfigError("no output directory given");
  make_dir(cfg.out_dir);

  auto fail_manifest = [&](const std::string& stage, const std::string& message,
                           const nlohmann::json& extra) {
    nlohmann::json j{{"status", "failed"},
                     {"config", config_json(cfg)},
                     {"error", {{"stage", stage}, {"message", message}}}};
    j.update(extra);
    write_text(cfg.out_dir / "manifest.json", json_text(j));
  };

  std::optional<Recording> rec;
  try {
    rec.emplace(load_recording(cfg.input, cfg.load));
  } catch (const std::exception& e) {
    fail_manifest("load", e.what(), nlohmann::json::object());
    throw;
  }

  Analysis a;
  try {
    a = analyze(*rec, cfg);
  } catch (const std::exception& e) {
    fail_manifest("setup", e.what(), nlohmann::json::object());
    throw;
  }
  if (a.failure) {
    const Failure& f = *a.failure;
    nlohmann::json completed = nlohmann::json::array();
    for (std::size_t t = 0; t < f.task; ++t)
      if (a.done[t])
        completed.push_back({{"kind", to_string(a.results[t].kind)},
                             {"window", a.results[t].window_index},
                             {"chosen_q_s", [&] {
                                nlohmann::json q = nlohmann::json::object();
                                for (const auto& r : a.results[t].reports)
                                  q[std::string(1, to_char(r.method))] = r.chosen_q_s();
                                return q;
                              }()}});
    fail_manifest(f.stage, f.describe(),
                  {{"failed_window", f.window}, {"failed_kind", to_string(f.kind)},
                   {"completed", completed}});
    f.raise();
  }

  PipelineOutput out;
  out.results = std::move(a.results);
  try {
    out.files = write_outputs(out.results, cfg, *rec);
  } catch (const std::exception& e) {
    fail_manifest("emit", e.what(), nlohmann::json::object());
    throw;
  }
  return out;
}

}  // namespace sigcomm
