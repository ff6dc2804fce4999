#include "sigcomm/error.hpp"
#include "sigcomm/pipeline.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace sigcomm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sigcomm_pipeline_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Recording small_recording(std::uint64_t seed, Eigen::Index samples = 6000) {
  SyntheticSpec spec;
  spec.n_channels = 8;
  spec.n_samples = samples;
  spec.community = communities_from_sizes({5, 3});
  spec.anticorrelated_pairs = true;
  spec.noise_level = 0.4;
  return generate_synthetic(spec, seed);
}

PipelineConfig quick_config() {
  PipelineConfig cfg;
  cfg.window_size = 2000;
  cfg.schedule.temp_steps = 60;
  cfg.schedule.samples_per_temp = 100;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("configuration validation") {
  PipelineConfig cfg = quick_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.methods.clear();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = quick_config();
  cfg.kinds.clear();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = quick_config();
  cfg.window_size = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = quick_config();
  cfg.methods = {Method::A, Method::A};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = quick_config();
  cfg.threshold = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("window seeds differ by window and method") {
  CHECK(window_seed(1, 0, Method::B) != window_seed(1, 1, Method::B));
  CHECK(window_seed(1, 0, Method::B) != window_seed(1, 0, Method::D));
  CHECK(window_seed(1, 0, Method::B) == window_seed(1, 0, Method::B));
}

TEST_CASE("analysis recovers the planted split") {
  const Recording rec = small_recording(1);
  PipelineConfig cfg = quick_config();
  cfg.kinds = {MatrixKind::correlation, MatrixKind::coherency};
  const auto results = analyze_recording(rec, cfg);
  REQUIRE(results.size() == 6);
  const Clustering planted(std::vector<int>{0, 0, 0, 0, 0, 1, 1, 1});
  for (const auto* r : results_of_kind(results, MatrixKind::correlation)) {
    CHECK(r->n == 8);
    CHECK(r->reports.size() == 4);
    CHECK(r->anticorrelation_weighted);
    for (Method m : {Method::A, Method::B, Method::D}) CHECK(r->report(m).chosen() == planted);
  }
  for (const auto* r : results_of_kind(results, MatrixKind::coherency)) CHECK(!r->anticorrelation_count);
}

TEST_CASE("emitted table shapes") {
  const Recording rec = small_recording(2);
  PipelineConfig cfg = quick_config();
  cfg.methods = {Method::A, Method::C};
  const auto results = analyze_recording(rec, cfg);
  const auto rs = results_of_kind(results, MatrixKind::correlation);
  REQUIRE(rs.size() == 3);

  const std::string mod = modularity_csv(rs, cfg.methods);
  CHECK(mod.rfind("window,A,C\n", 0) == 0);
  CHECK(std::count(mod.begin(), mod.end(), '\n') == 4);
  CHECK(std::count(mod.begin(), mod.end(), ',') == 2 * 4);

  const std::string map = cluster_map_csv(rs, Method::A);
  CHECK(map.rfind("vertex,0,1,2\n", 0) == 0);
  CHECK(std::count(map.begin(), map.end(), '\n') == 9);
  CHECK_THROWS_AS((void)cluster_map_csv(rs, Method::D), ConfigError);
  CHECK_THROWS_AS((void)modularity_csv({}, cfg.methods), DataError);
}

TEST_CASE("single-cluster results and positive windows") {
  WindowResult r;
  r.n = 3;
  r.window_index = 0;
  r.anticorrelation_weighted = 0.0;
  r.anticorrelation_count = 0.0;
  MethodReport rep;
  rep.method = Method::D;
  rep.levels.push_back({Clustering::single(3), std::nullopt, 0.0});
  r.reports.push_back(rep);
  WindowResult r2 = r;
  r2.window_index = 1;
  const std::vector<const WindowResult*> rs{&r, &r2};
  CHECK(cluster_map_csv(rs, Method::D) == "vertex,0,1\n1,1,1\n2,1,1\n3,1,1\n");
  CHECK(anticorrelation_csv(rs) == "window,weighted,count\n0,0,0\n1,0,0\n");
}

TEST_CASE("outputs are identical across runs and worker counts") {
  const fs::path dir = scratch("determinism");
  const Recording rec = small_recording(3, 8000);
  write_raw_f32(rec, dir / "rec.f32");

  PipelineConfig cfg = quick_config();
  cfg.input = dir / "rec.f32";
  cfg.load = {.format = InputFormat::raw_f32, .channels = 8, .sample_rate = 1000.0};
  cfg.kinds = {MatrixKind::correlation, MatrixKind::coherency};
  cfg.plots = true;
  cfg.dump_matrices = true;
  cfg.verbose_traces = true;

  std::vector<std::vector<std::string>> listings;
  std::vector<fs::path> outs;
  for (unsigned workers : {1u, 3u, 1u}) {
    cfg.workers = workers;
    cfg.out_dir = dir / ("out" + std::to_string(outs.size()));
    outs.push_back(cfg.out_dir);
    listings.push_back(run_pipeline(cfg).files);
  }
  CHECK(listings[0] == listings[1]);
  CHECK(listings[0] == listings[2]);
  listings[0].push_back("manifest.json");
  for (const auto& f : listings[0]) {
    CHECK(slurp(outs[0] / f) == slurp(outs[1] / f));
    CHECK(slurp(outs[0] / f) == slurp(outs[2] / f));
  }
  CHECK(fs::exists(outs[0] / "anticorrelation.csv"));
  CHECK(fs::exists(outs[0] / "plots" / "modularity_coherency.svg"));
  CHECK(fs::exists(outs[0] / "dendrograms" / "correlation_0003.json"));
  CHECK(fs::exists(outs[0] / "matrices" / "coherency_0000.csv"));
  const auto manifest = nlohmann::json::parse(slurp(outs[0] / "manifest.json"));
  CHECK(manifest["status"] == "ok");
  CHECK(manifest["windows"] == 4);
  const auto dendro = nlohmann::json::parse(slurp(outs[0] / "dendrograms" / "correlation_0000.json"));
  CHECK(dendro["methods"]["D"]["levels"].size() == 8);
  CHECK(dendro.contains("annealing_traces"));
}

TEST_CASE("failures leave a manifest") {
  const fs::path dir = scratch("failures");
  {
    std::ofstream(dir / "bad.csv") << "1,2\n3,nan\n";
  }
  PipelineConfig cfg = quick_config();
  cfg.input = dir / "bad.csv";
  cfg.out_dir = dir / "load";
  CHECK_THROWS_AS((void)run_pipeline(cfg), DataError);
  auto manifest = nlohmann::json::parse(slurp(cfg.out_dir / "manifest.json"));
  CHECK(manifest["status"] == "failed");
  CHECK(manifest["error"]["stage"] == "load");

  write_csv(small_recording(4), dir / "good.csv");
  cfg.input = dir / "good.csv";
  cfg.out_dir = dir / "window";
  cfg.kinds = {MatrixKind::correlation, MatrixKind::coherency};
  cfg.spectral.segment_length = 2000;
  try {
    (void)run_pipeline(cfg);
    FAIL("expected a data error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("window 0 (coherency), stage matrix") != std::string::npos);
  }
  manifest = nlohmann::json::parse(slurp(cfg.out_dir / "manifest.json"));
  CHECK(manifest["status"] == "failed");
  CHECK(manifest["failed_window"] == 0);
  CHECK(manifest["failed_kind"] == "coherency");
  CHECK(manifest["completed"].size() == 3);
  CHECK(!fs::exists(cfg.out_dir / "modularity_correlation.csv"));
}

TEST_CASE("svg rendering") {
  const std::string svg = line_plot_svg("q", {"A"}, {{0.1, 0.5, 0.3}});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
}

}
