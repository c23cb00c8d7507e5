#include "radarpr/config.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace radarpr {

double RunConfig::resolved_max_range(int width, int height) const {
  if (max_range > 0.0) return max_range;
  return std::sqrt(static_cast<double>(width) * width +
                   static_cast<double>(height) * height) /
         2.0;
}

nlohmann::json run_config_to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["descriptor_size"] = cfg.descriptor_size;
  j["max_range"] = cfg.max_range;
  j["cluster_threshold"] = cfg.cluster_threshold;
  j["verify_threshold"] = cfg.verify_threshold;
  j["revisit_distance"] = cfg.revisit_distance;
  j["frame_stride"] = cfg.frame_stride;
  j["binarize_threshold"] = cfg.binarize_threshold;
  j["min_cluster_area"] = cfg.min_cluster_area;
  j["samples_per_ellipse"] = cfg.samples_per_ellipse;
  j["exclusion_window"] = cfg.exclusion_window;
  if (!cfg.session_dir.empty()) j["session_dir"] = cfg.session_dir;
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base) {
  for (const auto& [key, value] : j.items()) {
    if (key == "descriptor_size") base.descriptor_size = value.get<int>();
    else if (key == "max_range") base.max_range = value.get<double>();
    else if (key == "cluster_threshold") base.cluster_threshold = value.get<int>();
    else if (key == "verify_threshold") base.verify_threshold = value.get<double>();
    else if (key == "revisit_distance") base.revisit_distance = value.get<double>();
    else if (key == "frame_stride") base.frame_stride = value.get<int>();
    else if (key == "binarize_threshold") base.binarize_threshold = value.get<int>();
    else if (key == "min_cluster_area") base.min_cluster_area = value.get<int>();
    else if (key == "samples_per_ellipse") base.samples_per_ellipse = value.get<int>();
    else if (key == "exclusion_window") base.exclusion_window = value.get<int>();
    else if (key == "session_dir") base.session_dir = value.get<std::string>();
    else throw std::invalid_argument("unknown config key: " + key);
  }
  if (base.descriptor_size < 1)
    throw std::invalid_argument("descriptor_size must be >= 1");
  if (base.frame_stride < 1)
    throw std::invalid_argument("frame_stride must be >= 1");
  if (base.cluster_threshold < 0)
    throw std::invalid_argument("cluster_threshold must be >= 0");
  if (base.samples_per_ellipse < 8)
    throw std::invalid_argument("samples_per_ellipse must be >= 8");
  if (base.revisit_distance <= 0.0)
    throw std::invalid_argument("revisit_distance must be > 0");
  return base;
}

RunConfig load_run_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return run_config_from_json(j, base);
}

}  // namespace radarpr
