#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "commands.hpp"

namespace {

using radarpr::cli::ConfigPatch;

/// Collects config-file keys and explicit flag values into one JSON patch;
/// flags win over the file, the file wins over built-in defaults.
struct ConfigFlags {
  std::string config_file;
  std::optional<int> descriptor_size;
  std::optional<double> max_range;
  std::optional<int> cluster_threshold;
  std::optional<double> verify_threshold;
  std::optional<double> revisit_distance;
  std::optional<int> frame_stride;
  std::optional<int> binarize_threshold;
  std::optional<int> min_cluster_area;
  std::optional<int> samples_per_ellipse;
  std::optional<int> exclusion_window;

  void attach(CLI::App& app) {
    app.add_option("--config", config_file,
                   "JSON config file; flags override its keys");
    app.add_option("-D,--descriptor-size", descriptor_size,
                   "range histogram bins");
    app.add_option("--max-range", max_range,
                   "descriptor range cap in pixels (<=0: half diagonal)");
    app.add_option("-p,--cluster-threshold", cluster_threshold,
                   "cluster-count prefilter slack");
    app.add_option("--verify-threshold", verify_threshold,
                   "cosine distance acceptance bound");
    app.add_option("--revisit-distance", revisit_distance,
                   "ground-truth revisit radius, meters");
    app.add_option("--stride", frame_stride, "keep every Nth frame");
    app.add_option("--binarize-threshold", binarize_threshold,
                   "detection mask threshold, native intensity");
    app.add_option("--min-cluster-area", min_cluster_area,
                   "drop regions smaller than this many pixels");
    app.add_option("--samples", samples_per_ellipse,
                   "boundary samples per ellipse (minimum)");
    app.add_option("--exclusion-window", exclusion_window,
                   "intra-session exclusion span in frame ids (<0: off)");
  }

  ConfigPatch patch() const {
    ConfigPatch j = nlohmann::json::object();
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw std::runtime_error("cannot open " + config_file);
      in >> j;
      if (!j.is_object()) {
        throw std::runtime_error("config file must hold a JSON object");
      }
    }
    if (descriptor_size) j["descriptor_size"] = *descriptor_size;
    if (max_range) j["max_range"] = *max_range;
    if (cluster_threshold) j["cluster_threshold"] = *cluster_threshold;
    if (verify_threshold) j["verify_threshold"] = *verify_threshold;
    if (revisit_distance) j["revisit_distance"] = *revisit_distance;
    if (frame_stride) j["frame_stride"] = *frame_stride;
    if (binarize_threshold) j["binarize_threshold"] = *binarize_threshold;
    if (min_cluster_area) j["min_cluster_area"] = *min_cluster_area;
    if (samples_per_ellipse) j["samples_per_ellipse"] = *samples_per_ellipse;
    if (exclusion_window) j["exclusion_window"] = *exclusion_window;
    return j;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maritime radar place recognition"};
  app.require_subcommand(1);

  // index
  auto* index = app.add_subcommand(
      "index", "Describe a session's frames into a descriptor database");
  std::string index_session_dir, index_out;
  ConfigFlags index_cfg;
  index->add_option("session", index_session_dir, "session directory")
      ->required();
  index->add_option("-o,--out", index_out, "output database path")->required();
  index_cfg.attach(*index);

  // query
  auto* query = app.add_subcommand(
      "query", "Match one frame against a descriptor database");
  std::string query_db, query_image, query_session;
  std::int64_t query_frame = -1;
  ConfigFlags query_cfg;
  query->add_option("db", query_db, "descriptor database path")->required();
  query->add_option("--image", query_image, "frame image file");
  query->add_option("--session", query_session, "session directory");
  query->add_option("--frame", query_frame, "frame id within --session");
  query_cfg.attach(*query);

  // eval
  auto* eval = app.add_subcommand(
      "eval", "Evaluate a query session against a descriptor database");
  std::string eval_db, eval_session;
  radarpr::cli::EvalOptions eval_opts;
  std::string eval_methods = "ess";
  std::string eval_out = "eval-out";
  ConfigFlags eval_cfg;
  eval->add_option("db", eval_db, "descriptor database path")->required();
  eval->add_option("query_session", eval_session, "query session directory")
      ->required();
  eval->add_option("--mode", eval_opts.mode, "intra | inter | auto");
  eval->add_option("--method", eval_methods,
                   "comma-separated methods: ess, ringkey");
  eval->add_option("--grid", eval_opts.grid,
                   "one ablation axis, e.g. cluster_threshold=1,10,100");
  eval->add_option("--assert", eval_opts.asserts,
                   "bounds such as pr_auc>=0.95,roc_auc>=0.95; nonzero exit "
                   "on violation");
  eval->add_option("-o,--out", eval_out, "output directory for CSVs");
  eval_cfg.attach(*eval);

  // synth
  auto* synth = app.add_subcommand(
      "synth", "Render synthetic radar sessions with known poses");
  radarpr::cli::SynthOptions synth_opts;
  std::string synth_scene, synth_out;
  std::vector<std::string> synth_trajectories;
  synth->add_option("--preset", synth_opts.preset,
                    "single-island | anchorage-loop");
  synth->add_option("--scene", synth_scene, "scene JSON file");
  synth->add_option("--trajectory", synth_trajectories,
                    "trajectory JSON file (repeatable, one session each)");
  synth->add_option("-o,--out", synth_out, "output dataset directory")
      ->required();
  synth->add_option("--seed", synth_opts.seed, "render seed (0: default)");
  synth->add_option("--width", synth_opts.width, "frame width, pixels");
  synth->add_option("--height", synth_opts.height, "frame height, pixels");
  synth->add_option("--resolution", synth_opts.resolution, "meters per pixel");

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "Evaluate over the cartesian product of ablation axes");
  std::string sweep_db, sweep_session;
  radarpr::cli::SweepOptions sweep_opts;
  std::string sweep_methods = "ess";
  std::string sweep_out = "sweep-out";
  ConfigFlags sweep_cfg;
  sweep->add_option("db", sweep_db, "descriptor database path")->required();
  sweep->add_option("query_session", sweep_session, "query session directory")
      ->required();
  sweep->add_option("--axis", sweep_opts.axes,
                    "ablation axis name=v1,v2,... (repeatable)")
      ->required();
  sweep->add_option("--mode", sweep_opts.eval.mode, "intra | inter | auto");
  sweep->add_option("--method", sweep_methods,
                    "comma-separated methods: ess, ringkey");
  sweep->add_option("--assert", sweep_opts.eval.asserts,
                    "bounds applied to every row");
  sweep->add_option("-o,--out", sweep_out, "output directory for CSVs");
  sweep_cfg.attach(*sweep);

  CLI11_PARSE(app, argc, argv);

  auto split_methods = [](const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
      std::size_t end = s.find(',', pos);
      if (end == std::string::npos) end = s.size();
      if (end > pos) out.push_back(s.substr(pos, end - pos));
      pos = end + 1;
    }
    return out;
  };

  try {
    if (index->parsed()) {
      return radarpr::cli::cmd_index(index_session_dir, index_out,
                                     index_cfg.patch());
    }
    if (query->parsed()) {
      std::optional<std::filesystem::path> image, session;
      std::optional<std::int64_t> frame;
      if (!query_image.empty()) image = query_image;
      if (!query_session.empty()) session = query_session;
      if (query_frame >= 0) frame = query_frame;
      return radarpr::cli::cmd_query(query_db, image, session, frame,
                                     query_cfg.patch());
    }
    if (eval->parsed()) {
      eval_opts.methods = split_methods(eval_methods);
      eval_opts.out_dir = eval_out;
      return radarpr::cli::cmd_eval(eval_db, eval_session, eval_opts,
                                    eval_cfg.patch());
    }
    if (synth->parsed()) {
      if (!synth_scene.empty()) synth_opts.scene_file = synth_scene;
      for (const auto& t : synth_trajectories) {
        synth_opts.trajectory_files.emplace_back(t);
      }
      synth_opts.out_dir = synth_out;
      return radarpr::cli::cmd_synth(synth_opts);
    }
    if (sweep->parsed()) {
      sweep_opts.eval.methods = split_methods(sweep_methods);
      sweep_opts.eval.out_dir = sweep_out;
      return radarpr::cli::cmd_sweep(sweep_db, sweep_session, sweep_opts,
                                     sweep_cfg.patch());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
