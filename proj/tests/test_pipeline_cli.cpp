#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "oracles.hpp"
#include "radarpr/eval.hpp"
#include "radarpr/pipeline.hpp"
#include "radarpr/synth.hpp"

#include "../tools/commands.hpp"

using namespace radarpr;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* tag) {
  fs::path p = fs::temp_directory_path() / (std::string("radarpr_e2e_") + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int count_lines(const fs::path& file) {
  std::ifstream in(file);
  int n = 0;
  std::string line;
  while (std::getline(in, line)) n += !line.empty();
  return n;
}

// Out-and-back straight line with islands abeam: every outbound frame is
// revisited on the return leg at the same pose, giving the evaluation
// genuine positives.
void write_tiny_dataset(const fs::path& dir) {
  Scene s;
  s.bounds = {-500.0, -500.0, 800.0, 500.0};
  const double spots[3][2] = {{60.0, 80.0}, {140.0, -70.0}, {200.0, 60.0}};
  for (const auto& sp : spots) {
    StaticBlob b;
    b.cx = sp[0];
    b.cy = sp[1];
    b.cov_xx = 400.0;
    b.cov_yy = 225.0;
    s.blobs.push_back(b);
  }
  save_scene(dir / "scene.json", s);

  Trajectory t;
  for (int i = 0; i <= 22; ++i) {
    const double x = 20.0 * (i <= 11 ? i : 22 - i);
    t.points.push_back(
        {2.5 * i, Pose{x, 0.0}, i <= 11 ? 0.0 : M_PI, 0});
  }
  save_trajectory(dir / "trajectory.json", t);
}

}  // namespace

// The default RunConfig is the operating point every acceptance number is
// quoted at; a silent change to any default shifts them all.
TEST_CASE("run config defaults and JSON round trip") {
  const RunConfig cfg;
  CHECK(cfg.descriptor_size == 100);
  CHECK(cfg.max_range <= 0.0);
  CHECK(cfg.cluster_threshold == 10);
  CHECK(cfg.verify_threshold == doctest::Approx(0.2));
  CHECK(cfg.revisit_distance == doctest::Approx(100.0));
  CHECK(cfg.frame_stride == 5);
  CHECK(cfg.binarize_threshold == 0);
  CHECK(cfg.min_cluster_area == 1);
  CHECK(cfg.samples_per_ellipse == 128);
  CHECK(cfg.exclusion_window == 50);
  CHECK(cfg.resolved_max_range(512, 512) ==
        doctest::Approx(0.5 * std::hypot(512.0, 512.0)));

  RunConfig edited = cfg;
  edited.descriptor_size = 40;
  edited.max_range = 250.0;
  edited.session_dir = "somewhere/s0";
  const RunConfig back = run_config_from_json(run_config_to_json(edited));
  CHECK(back.descriptor_size == 40);
  CHECK(back.max_range == doctest::Approx(250.0));
  CHECK(back.session_dir == "somewhere/s0");
  CHECK(back.cluster_threshold == cfg.cluster_threshold);

  // Partial documents patch the base; unknown keys are typos, not noise.
  const RunConfig patched =
      run_config_from_json(nlohmann::json{{"frame_stride", 2}}, edited);
  CHECK(patched.frame_stride == 2);
  CHECK(patched.descriptor_size == 40);
  CHECK_THROWS(run_config_from_json(nlohmann::json{{"descriptor_sz", 40}}));
}

TEST_CASE("analyze_frame keeps consistent intermediates") {
  const RadarFrame f = oracle::frame_from_art({
      "........",
      ".##.....",
      ".##...#.",
      "......#.",
      "........",
  });
  RunConfig cfg;
  cfg.descriptor_size = 4;
  cfg.max_range = 8.0;

  const FrameAnalysis a = analyze_frame(f, cfg);
  CHECK(a.labels.cluster_count == 2);
  REQUIRE(a.ellipses.size() == 2);
  CHECK(a.descriptor.cluster_count == 2);
  REQUIRE(a.descriptor.v.size() == 4);

  double total = 0.0;
  for (double x : a.descriptor.v) total += x;
  CHECK(total == static_cast<double>(a.polar.size()));  // all within range

  const EssDescriptor d = describe_frame(f, cfg);
  CHECK(d.v == a.descriptor.v);
  CHECK(d.cluster_count == 2);
}

TEST_CASE("analyze_frame honors threshold and min area") {
  RadarFrame f = oracle::frame_from_art({
      "##......",
      "##......",
      "......#.",
  });
  f.intensities[6 + 2 * 8] = 40;  // the lone pixel, dimmer than the block
  RunConfig cfg;
  cfg.max_range = 10.0;
  cfg.descriptor_size = 5;

  cfg.binarize_threshold = 100;  // drops the dim pixel
  CHECK(analyze_frame(f, cfg).labels.cluster_count == 1);

  cfg.binarize_threshold = 0;
  cfg.min_cluster_area = 2;  // drops it again by area
  CHECK(analyze_frame(f, cfg).labels.cluster_count == 1);

  cfg.min_cluster_area = 1;
  CHECK(analyze_frame(f, cfg).labels.cluster_count == 2);
}

TEST_CASE("index_session strides and tags descriptors") {
  const fs::path dir = fresh_dir("index") / "walk_a";
  const Scene s = [] {
    Scene sc;
    sc.bounds = {-500, -500, 500, 500};
    StaticBlob b;
    b.cx = 100.0;
    b.cy = 0.0;
    b.cov_xx = 400.0;
    b.cov_yy = 400.0;
    sc.blobs.push_back(b);
    return sc;
  }();
  RenderConfig rc;
  rc.width = 96;
  rc.height = 96;
  rc.resolution = 4.0;
  Trajectory t;
  for (int i = 0; i < 5; ++i)
    t.points.push_back({2.5 * i, Pose{10.0 * i, 0.0}, 0.0, 0});
  write_session(dir, make_loop_sequence(s, t, rc, 3));

  RunConfig cfg;
  cfg.frame_stride = 2;
  cfg.descriptor_size = 20;
  const IndexResult res = index_session(load_session(dir), cfg);
  REQUIRE(res.descriptors.size() == 3);  // frames 0, 2, 4
  CHECK(res.descriptors[0].session_id == "walk_a");
  CHECK(res.descriptors[1].frame_id == 2);
  CHECK(res.descriptors[2].frame_id == 4);
  CHECK(res.describe_ms_total >= 0.0);
}

TEST_CASE("pipeline command round trip over a synthetic dataset") {
  const fs::path dir = fresh_dir("cli");
  write_tiny_dataset(dir);

  // synth from explicit scene and trajectory files
  cli::SynthOptions synth;
  synth.scene_file = dir / "scene.json";
  synth.trajectory_files = {dir / "trajectory.json"};
  synth.out_dir = dir / "out";
  synth.seed = 5;
  synth.width = 128;
  synth.height = 128;
  synth.resolution = 4.0;
  REQUIRE(cli::cmd_synth(synth) == 0);
  REQUIRE(fs::exists(dir / "out" / "s0" / "metadata.csv"));
  CHECK(fs::exists(dir / "out" / "manifest.json"));

  // index it
  cli::ConfigPatch patch = {{"frame_stride", 1},
                            {"exclusion_window", 1},
                            {"revisit_distance", 50.0},
                            {"descriptor_size", 40}};
  const fs::path db = dir / "db.jsonl";
  REQUIRE(cli::cmd_index(dir / "out" / "s0", db, patch) == 0);
  REQUIRE(fs::exists(db));
  REQUIRE(fs::exists(DescriptorDb::sidecar_path(db)));
  CHECK(count_lines(db) == 23);

  // query one frame of the same session back
  REQUIRE(cli::cmd_query(db, std::nullopt, dir / "out" / "s0", 3,
                         cli::ConfigPatch::object()) == 0);

  // full evaluation with a self-asserted floor
  cli::EvalOptions eval;
  eval.mode = "intra";
  eval.methods = {"ess", "ringkey"};
  eval.asserts = "recall_at_1>=0.6";
  eval.out_dir = dir / "eval";
  REQUIRE(cli::cmd_eval(db, dir / "out" / "s0", eval,
                        cli::ConfigPatch::object()) == 0);
  REQUIRE(fs::exists(dir / "eval" / "summary.csv"));
  CHECK(count_lines(dir / "eval" / "summary.csv") == 3);  // header + 2 rows
  CHECK(fs::exists(dir / "eval" / "manifest.json"));
  int curves = 0;
  for (const auto& e : fs::directory_iterator(dir / "eval"))
    curves += e.path().filename().string().rfind("curve_", 0) == 0;
  CHECK(curves == 2);

  // an impossible assertion fails the run
  cli::EvalOptions bad = eval;
  bad.asserts = "pr_auc>=1.5";
  bad.out_dir = dir / "eval_bad";
  CHECK(cli::cmd_eval(db, dir / "out" / "s0", bad,
                      cli::ConfigPatch::object()) == 1);

  // parameter sweep: one row per axis value per method
  cli::SweepOptions sweep;
  sweep.axes = {"cluster_threshold=1,10"};
  sweep.eval.mode = "intra";
  sweep.eval.methods = {"ess"};
  sweep.eval.out_dir = dir / "sweep";
  REQUIRE(cli::cmd_sweep(db, dir / "out" / "s0", sweep,
                         cli::ConfigPatch::object()) == 0);
  CHECK(count_lines(dir / "sweep" / "summary.csv") == 3);
}

TEST_CASE("eval recomputes descriptors when the patch changes the pipeline") {
  const fs::path dir = fresh_dir("repatch");
  write_tiny_dataset(dir);
  cli::SynthOptions synth;
  synth.scene_file = dir / "scene.json";
  synth.trajectory_files = {dir / "trajectory.json"};
  synth.out_dir = dir / "out";
  synth.seed = 6;
  synth.width = 128;
  synth.height = 128;
  synth.resolution = 4.0;
  REQUIRE(cli::cmd_synth(synth) == 0);

  const fs::path db = dir / "db.jsonl";
  cli::ConfigPatch patch = {{"frame_stride", 1},
                            {"exclusion_window", 1},
                            {"revisit_distance", 50.0},
                            {"descriptor_size", 40}};
  REQUIRE(cli::cmd_index(dir / "out" / "s0", db, patch) == 0);

  // a different descriptor size cannot be served by the stored vectors;
  // eval must rebuild from the session images and still succeed
  cli::EvalOptions eval;
  eval.mode = "intra";
  eval.out_dir = dir / "eval_resized";
  REQUIRE(cli::cmd_eval(db, dir / "out" / "s0", eval,
                        cli::ConfigPatch{{"descriptor_size", 16}}) == 0);
  REQUIRE(fs::exists(dir / "eval_resized" / "summary.csv"));
}
