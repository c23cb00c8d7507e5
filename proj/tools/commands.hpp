#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "radarpr/config.hpp"

namespace radarpr::cli {

/// Config keys set explicitly by the user (config file merged with
/// command-line flags). Commands layer these over their base config: the
/// defaults for index and synth, the database sidecar for query and eval.
using ConfigPatch = nlohmann::json;

/// Describes every stride-th frame of a session and writes the JSON-lines
/// descriptor database plus its config sidecar. Returns the process exit
/// code.
int cmd_index(const std::filesystem::path& session_dir,
              const std::filesystem::path& out_db, const ConfigPatch& patch);

/// Queries a database with one frame, given either an image file or a
/// session directory plus frame id. Prints the match decision.
int cmd_query(const std::filesystem::path& db_path,
              const std::optional<std::filesystem::path>& image,
              const std::optional<std::filesystem::path>& session_dir,
              std::optional<std::int64_t> frame_id, const ConfigPatch& patch);

struct EvalOptions {
  std::string mode = "auto";                   // intra | inter | auto
  std::vector<std::string> methods = {"ess"};  // ess, ringkey
  std::string grid;     // e.g. "cluster_threshold=1,10,100"
  std::string asserts;  // e.g. "pr_auc>=0.95,roc_auc>=0.95"
  std::filesystem::path out_dir = ".";
};

/// Evaluates a query session against an indexed database: builds pose
/// ground truth, sweeps the verification threshold, and writes curve and
/// summary CSVs. Returns nonzero when an --assert bound fails.
int cmd_eval(const std::filesystem::path& db_path,
             const std::filesystem::path& query_session_dir,
             const EvalOptions& opts, const ConfigPatch& patch);

struct SynthOptions {
  std::string preset;  // empty when scene/trajectory files are given
  std::optional<std::filesystem::path> scene_file;
  std::vector<std::filesystem::path> trajectory_files;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  int width = 0;  // 0 keeps the preset/default geometry
  int height = 0;
  double resolution = 0.0;
};

/// Renders synthetic sessions (one per trajectory) under out_dir/s<k>,
/// writing scene, trajectories, and a manifest alongside.
int cmd_synth(const SynthOptions& opts);

struct SweepOptions {
  std::vector<std::string> axes;  // each "name=v1,v2,..."
  EvalOptions eval;
};

/// Ablation driver: evaluates the cartesian product of the axis values,
/// appending one summary row per combination per method.
int cmd_sweep(const std::filesystem::path& db_path,
              const std::filesystem::path& query_session_dir,
              const SweepOptions& opts, const ConfigPatch& patch);

}  // namespace radarpr::cli
