#include "sigcomm/error.hpp"
#include "sigcomm/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

using namespace sigcomm;

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<MatrixKind> parse_kinds(const std::string& text) {
  if (text == "both") return {MatrixKind::correlation, MatrixKind::coherency};
  std::vector<MatrixKind> kinds;
  for (const auto& k : split_list(text, ',')) kinds.push_back(parse_matrix_kind(k));
  return kinds;
}

std::vector<Method> parse_methods(const std::string& text) {
  std::vector<Method> methods;
  for (const auto& m : split_list(text, ',')) {
    if (m.size() != 1) throw ConfigError("unknown method '" + m + "' (expected A, B, C or D)");
    methods.push_back(parse_method(m[0]));
  }
  return methods;
}

std::pair<double, double> parse_band(const std::string& text) {
  const auto parts = split_list(text, ':');
  if (parts.size() != 2) throw ConfigError("band must look like LOW:HIGH, got '" + text + "'");
  try {
    return {std::stod(parts[0]), std::stod(parts[1])};
  } catch (const std::exception&) {
    throw ConfigError("band must look like LOW:HIGH, got '" + text + "'");
  }
}

struct AnalyzeArgs {
  std::string input, format = "csv", kinds = "correlation", methods = "A,B,C,D";
  std::string out, anticorr = "weighted", band = "1:100", gn_length = "hops";
  long channels = 0, window_size = 0, segment_len = 0;
  bool header = false, plots = false, dump = false, verbose = false;
  double sample_rate = 1000.0, threshold = 0.0, overlap = 0.5;
  std::uint64_t seed = 0;
  int sa_steps = 400, sa_samples = 500, max_levels = 8;
  double sa_t0 = 1.0, sa_tf = 1e-3;
  unsigned workers = 1;

  PipelineConfig config() const {
    PipelineConfig cfg;
    cfg.input = input;
    cfg.load.format = parse_input_format(format);
    cfg.load.csv_header = header;
    cfg.load.channels = channels;
    cfg.load.sample_rate = sample_rate;
    cfg.window_size = window_size;
    cfg.kinds = parse_kinds(kinds);
    cfg.methods = parse_methods(methods);
    cfg.threshold = threshold;
    cfg.seed = seed;
    cfg.out_dir = out;
    cfg.plots = plots;
    cfg.dump_matrices = dump;
    cfg.verbose_traces = verbose;
    cfg.anticorrelation_mode = parse_anticorrelation_mode(anticorr);
    cfg.schedule = {sa_steps, sa_samples, sa_t0, sa_tf};
    cfg.max_levels = max_levels;
    cfg.gn_length = parse_path_length(gn_length);
    std::tie(cfg.spectral.band_low, cfg.spectral.band_high) = parse_band(band);
    cfg.spectral.segment_length = segment_len;
    cfg.spectral.overlap_fraction = overlap;
    cfg.workers = workers;
    return cfg;
  }
};

struct SynthArgs {
  long channels = 16, samples = 1000000;
  std::string communities = "9,7", out, format;
  double strength = 0.9, noise = 0.3, coupling = 0.5, drive = 0.0, sample_rate = 1000.0;
  bool anticorrelated = false;
  std::uint64_t seed = 0;
};

int run_analyze(const AnalyzeArgs& args) {
  const PipelineConfig cfg = args.config();
  const PipelineOutput out = run_pipeline(cfg);
  for (MatrixKind kind : cfg.kinds) {
    const auto rs = results_of_kind(out.results, kind);
    std::cout << to_string(kind) << ": " << rs.size() << " windows";
    for (Method m : cfg.methods) {
      double sum = 0.0;
      for (const auto* r : rs) sum += r->report(m).chosen_q_s();
      std::cout << ", mean q_s " << to_char(m) << " = " << sum / static_cast<double>(rs.size());
    }
    std::cout << "\n";
  }
  std::cout << "wrote " << out.files.size() + 1 << " files to " << cfg.out_dir.string() << "\n";
  return 0;
}

int run_synth(const SynthArgs& args) {
  SyntheticSpec spec;
  spec.n_channels = args.channels;
  spec.n_samples = args.samples;
  spec.sample_rate = args.sample_rate;
  std::vector<int> sizes;
  for (const auto& s : split_list(args.communities, ',')) {
    try {
      sizes.push_back(std::stoi(s));
    } catch (const std::exception&) {
      throw ConfigError("community sizes must be integers, got '" + s + "'");
    }
  }
  spec.community = communities_from_sizes(sizes);
  spec.shared_signal_strength = args.strength;
  spec.anticorrelated_pairs = args.anticorrelated;
  spec.cross_coupling = args.coupling;
  spec.noise_level = args.noise;
  spec.drive_strength = args.drive;
  spec.validate();

  std::string format = args.format;
  if (format.empty()) {
    const auto ext = std::filesystem::path(args.out).extension().string();
    format = (ext == ".f32" || ext == ".bin" || ext == ".raw") ? "raw-f32" : "csv";
  }
  const InputFormat f = parse_input_format(format);
  const Recording rec = generate_synthetic(spec, args.seed);
  if (f == InputFormat::csv)
    write_csv(rec, args.out);
  else
    write_raw_f32(rec, args.out);
  std::cout << "wrote " << rec.n_samples() << " samples x " << rec.n_channels() << " channels to "
            << args.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Community detection on signed functional-connectivity graphs"};
  app.require_subcommand(1);

  AnalyzeArgs a;
  auto* analyze = app.add_subcommand("analyze", "Cluster windowed connectivity matrices of a recording");
  // config files are only read by the top-level app; keys go under [analyze]
  app.set_config("--config", "", "INI/TOML file with the analyze flags under an [analyze] section");
  analyze->configurable();
  analyze->fallthrough();
  analyze->add_option("--input", a.input, "Recording (rows = samples, columns = channels)")->required();
  analyze->add_option("--format", a.format, "csv or raw-f32")->capture_default_str();
  analyze->add_option("--channels", a.channels, "Channel count (raw-f32 only)");
  analyze->add_flag("--header", a.header, "Skip the first CSV line");
  analyze->add_option("--sample-rate", a.sample_rate, "Sampling rate in Hz")->capture_default_str();
  analyze->add_option("--window-size", a.window_size, "Samples per window")->required();
  analyze->add_option("--kinds", a.kinds, "correlation, coherency or both (comma list)")->capture_default_str();
  analyze->add_option("--methods", a.methods, "Comma list of A, B, C, D")->capture_default_str();
  analyze->add_option("--threshold", a.threshold, "Drop edges with |value| <= threshold")->capture_default_str();
  analyze->add_option("--seed", a.seed, "Master seed")->capture_default_str();
  analyze->add_option("--out", a.out, "Output directory")->required();
  analyze->add_flag("--plots", a.plots, "Write SVG plots");
  analyze->add_flag("--dump-matrices", a.dump, "Write every connectivity matrix as CSV");
  analyze->add_flag("--verbose", a.verbose, "Add removal sequences and annealing traces to dendrograms");
  analyze->add_option("--anticorr-mode", a.anticorr, "weighted or count")->capture_default_str();
  analyze->add_option("--sa-steps", a.sa_steps, "Annealing temperature levels")->capture_default_str();
  analyze->add_option("--sa-samples", a.sa_samples, "Proposals per temperature")->capture_default_str();
  analyze->add_option("--sa-t0", a.sa_t0, "Initial temperature")->capture_default_str();
  analyze->add_option("--sa-tf", a.sa_tf, "Final temperature")->capture_default_str();
  analyze->add_option("--max-levels", a.max_levels, "Levels for methods B and D")->capture_default_str();
  analyze->add_option("--gn-length", a.gn_length, "Path length for method C: hops or inverse-weight")
      ->capture_default_str();
  analyze->add_option("--band", a.band, "Coherence band LOW:HIGH in Hz")->capture_default_str();
  analyze->add_option("--segment-len", a.segment_len, "Welch segment length (0 = window / 8)")
      ->capture_default_str();
  analyze->add_option("--overlap", a.overlap, "Welch segment overlap fraction")->capture_default_str();
  analyze->add_option("--workers", a.workers, "Worker threads (0 = all cores)")->capture_default_str();

  SynthArgs s;
  auto* synth = app.add_subcommand("synth", "Write a synthetic recording with planted communities");
  synth->add_option("--channels", s.channels)->capture_default_str();
  synth->add_option("--samples", s.samples)->capture_default_str();
  synth->add_option("--communities", s.communities, "Comma list of community sizes")->capture_default_str();
  synth->add_option("--strength", s.strength, "Weight of the community signal")->capture_default_str();
  synth->add_option("--noise", s.noise, "Weight of the private noise")->capture_default_str();
  synth->add_flag("--anticorrelated", s.anticorrelated, "Anticorrelate the communities");
  synth->add_option("--coupling", s.coupling, "Cross-community coupling when anticorrelated")
      ->capture_default_str();
  synth->add_option("--drive", s.drive, "Weight of a drive shared by all channels")->capture_default_str();
  synth->add_option("--sample-rate", s.sample_rate)->capture_default_str();
  synth->add_option("--seed", s.seed)->capture_default_str();
  synth->add_option("--format", s.format, "csv or raw-f32 (default from the extension)");
  synth->add_option("--out", s.out, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*analyze) return run_analyze(a);
    return run_synth(s);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
