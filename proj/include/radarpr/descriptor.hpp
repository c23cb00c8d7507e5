#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "radarpr/ellipse.hpp"

namespace radarpr {

/// One ellipse boundary sample in polar coordinates about the image center.
struct PolarPoint {
  double r = 0.0;    // pixels, >= 0
  double phi = 0.0;  // radians, (-pi, pi]; 0 at the origin by convention
};

using PolarPointSet = std::vector<PolarPoint>;

/// Rotation-invariant range histogram of ellipse boundary samples, plus the
/// cluster count used by the retrieval prefilter.
struct EssDescriptor {
  std::vector<double> v;  // length D, non-negative counts
  int cluster_count = 0;
  std::int64_t frame_id = 0;
  std::string session_id;
};

/// Polar transform of continuous ellipse boundary samples about (cx0, cy0).
/// Sampling follows the same effective-count rule as rasterize; a point
/// ellipse (a == b == 0) collapses to the single entry (r, phi) of its
/// center since every sample coincides.
PolarPointSet to_polar(std::span<const Ellipse> ellipses, double cx0,
                       double cy0, int samples_per_ellipse = 128);

/// Range histogram over [0, max_range) with D uniform bins; points at or
/// beyond max_range are dropped. Throws on D < 1 or max_range <= 0.
EssDescriptor make_descriptor(const PolarPointSet& points, double max_range,
                              int D, int cluster_count);

/// 1 - u.w / (|u| |w|), clamped to [0, 1] for non-negative vectors.
/// Throws std::invalid_argument when either vector has zero norm.
double cosine_distance(std::span<const double> u, std::span<const double> w);
double cosine_distance(const EssDescriptor& u, const EssDescriptor& w);

// ---- JSON-lines serialization ----
// One object per line: {"session_id": ..., "frame_id": ...,
//                       "cluster_count": ..., "v": [...]}

std::string descriptor_to_json_line(const EssDescriptor& d);
EssDescriptor descriptor_from_json_line(const std::string& line);

void save_descriptors(const std::filesystem::path& path,
                      std::span<const EssDescriptor> descriptors);
std::vector<EssDescriptor> load_descriptors(const std::filesystem::path& path);

}  // namespace radarpr
