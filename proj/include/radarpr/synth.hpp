#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "radarpr/types.hpp"

#include "json.hpp"

namespace radarpr {

/// Static landmass, rendered as the level set of a 2D Gaussian: the filled
/// ellipse (w-c)' Sigma^-1 (w-c) <= level^2. Units: meters, meters^2.
struct StaticBlob {
  double cx = 0.0;
  double cy = 0.0;
  double cov_xx = 1.0;
  double cov_xy = 0.0;
  double cov_yy = 1.0;
  double intensity = 220.0;
};

/// Circular zone holding `vessel_count` vessels at uniform positions that
/// are resampled between passes while the count stays fixed.
struct Anchorage {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 100.0;
  int vessel_count = 0;
  double vessel_length = 40.0;  // full extent, meters
  double vessel_width = 16.0;
  double intensity = 220.0;
};

struct WorldBounds {
  double xmin = -1000.0, ymin = -1000.0, xmax = 1000.0, ymax = 1000.0;
  bool contains(double x, double y) const {
    return x >= xmin && x <= xmax && y >= ymin && y <= ymax;
  }
};

struct Scene {
  WorldBounds bounds;
  std::vector<StaticBlob> blobs;
  std::vector<Anchorage> anchorages;
};

struct RenderConfig {
  int width = 2048;
  int height = 2048;
  double resolution = 3.25;     // meters per pixel
  double min_range = 75.0;      // blind disc, meters
  double max_range = 0.0;       // meters; <= 0 selects half the image width
  double fluctuation_px = 1.5;  // per-blob boundary dilation/erosion bound
  double blob_level = 2.0;      // Gaussian level-set radius, in sigmas
  int bit_depth = 8;

  double resolved_max_range() const {
    if (max_range > 0.0) return max_range;
    return 0.5 * static_cast<double>(std::min(width, height)) * resolution;
  }
};

struct TrajectoryPoint {
  double t = 0.0;
  Pose pose;
  double heading = 0.0;  // radians, world frame
  int epoch = 0;         // pass index; anchorage layouts resample per epoch
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
};

/// Renders the scene into a vehicle-centered Cartesian grid rotated by
/// `heading`. Each blob's boundary is dilated or eroded by a per-frame
/// uniform draw in [-fluctuation_px, fluctuation_px] from
/// `fluctuation_seed`; anchorage vessel positions derive only from
/// `anchorage_seed`, so a fixed seed pins the layout across frames.
/// Pixels outside [min_range, max_range) are dark. Deterministic.
RadarFrame render_frame(const Scene& scene, const Pose& pose, double heading,
                        const RenderConfig& cfg,
                        std::uint64_t fluctuation_seed,
                        std::uint64_t anchorage_seed);

/// Renders one frame per trajectory point with pose and timestamp embedded
/// and frame_id set to the point index. Fluctuation reseeds per frame;
/// anchorage layouts reseed per epoch. Throws when timestamps are not
/// strictly increasing or a pose leaves the world bounds.
std::vector<RadarFrame> make_loop_sequence(const Scene& scene,
                                           const Trajectory& trajectory,
                                           const RenderConfig& cfg,
                                           std::uint64_t seed);

/// Writes frames as PGM in their native depth plus the metadata CSV,
/// creating `dir`.
void write_session(const std::filesystem::path& dir,
                   const std::vector<RadarFrame>& frames);

nlohmann::json scene_to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& j);
Scene load_scene(const std::filesystem::path& path);
void save_scene(const std::filesystem::path& path, const Scene& scene);

nlohmann::json trajectory_to_json(const Trajectory& t);
Trajectory trajectory_from_json(const nlohmann::json& j);
Trajectory load_trajectory(const std::filesystem::path& path);
void save_trajectory(const std::filesystem::path& path, const Trajectory& t);

/// Everything needed to synthesize one benchmark dataset: a scene, one
/// trajectory per session, and the frame geometry.
struct SynthPreset {
  Scene scene;
  std::vector<Trajectory> trajectories;
  RenderConfig render;
};

/// Named built-in datasets:
///   "single-island":   one 200-frame session over a coastal route whose
///                      middle leg is retraced 30 m abeam, for
///                      intra-session evaluation.
///   "anchorage-loop":  two sessions over the same 8-stop harbor loop;
///                      anchorage traffic resamples between sessions, for
///                      inter-session evaluation against a baseline.
/// Throws on an unknown name.
SynthPreset make_preset(const std::string& name);

constexpr std::uint64_t kDefaultSynthSeed = 20240917ULL;

}  // namespace radarpr
