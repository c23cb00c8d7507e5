#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace radarpr {

/// Resolved pipeline and retrieval parameters. Serialized as one flat JSON
/// document (the CLI config file and the descriptor database sidecar).
struct RunConfig {
  int descriptor_size = 100;      // D, range histogram bins
  double max_range = 0.0;         // pixels; <= 0 means half the image diagonal
  int cluster_threshold = 10;     // p, cluster-count prefilter slack
  double verify_threshold = 0.2;  // cosine distance acceptance bound
  double revisit_distance = 100.0;  // meters, ground-truth revisit radius
  int frame_stride = 5;             // keep every Nth frame when indexing
  int binarize_threshold = 0;       // intensity, native depth
  int min_cluster_area = 1;         // pixels; 1 keeps everything
  int samples_per_ellipse = 128;
  int exclusion_window = 50;  // intra-session, in frame ids; < 0 disables
  std::string session_dir;    // source session of an indexed database

  double resolved_max_range(int width, int height) const;
};

nlohmann::json run_config_to_json(const RunConfig& cfg);

/// Reads any subset of keys over `base`; unknown keys are rejected.
RunConfig run_config_from_json(const nlohmann::json& j,
                               RunConfig base = RunConfig{});

RunConfig load_run_config(const std::string& path, RunConfig base = RunConfig{});

}  // namespace radarpr
