#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "radarpr/types.hpp"

namespace radarpr {

/// Per-frame record from a session metadata CSV.
struct FrameMeta {
  std::int64_t frame_id = 0;
  double timestamp = 0.0;
  std::optional<Pose> pose;
  double resolution = 1.0;  // meters per pixel
};

/// A session directory: metadata.csv plus one grayscale image per frame.
struct Session {
  std::string session_id;
  std::filesystem::path dir;
  std::vector<FrameMeta> frames;
};

// ---- grayscale image files (PGM P5 and single-channel PNG) ----

struct GrayImage {
  int width = 0;
  int height = 0;
  int bit_depth = 8;  // 8 or 16
  std::vector<std::uint16_t> pixels;
};

GrayImage read_gray_image(const std::filesystem::path& path);
void write_gray_image(const std::filesystem::path& path, const GrayImage& img);

// ---- frame load/save ----

/// Loads a single-channel image and populates a frame from `meta`.
/// Pixel values are preserved bit-exactly in native depth.
/// Throws on missing file, multi-channel image, or (when `expected_width`
/// and `expected_height` are given) a dimension mismatch.
RadarFrame load_frame(const std::filesystem::path& path, const FrameMeta& meta,
                      int expected_width = -1, int expected_height = -1);

void save_frame(const std::filesystem::path& path, const RadarFrame& frame);

/// Threshold a frame into a detection mask: mask = intensity > threshold.
BinaryImage binarize(const RadarFrame& frame, std::uint16_t threshold = 0);

// ---- session metadata CSV ----
// Header: frame_id,timestamp,x,y,resolution
// The x and y columns (or their values) may be missing for unlabeled
// sessions; such frames carry no pose.

std::vector<FrameMeta> read_metadata_csv(const std::filesystem::path& path);
void write_metadata_csv(const std::filesystem::path& path,
                        const std::vector<FrameMeta>& frames);

/// Reads `dir`/metadata.csv. session_id is the directory name.
Session load_session(const std::filesystem::path& dir);

/// Resolves the image file for a frame id within a session directory.
/// Tries zero-padded and plain stems with .pgm and .png extensions.
std::filesystem::path frame_image_path(const std::filesystem::path& dir,
                                       std::int64_t frame_id);

/// Canonical on-disk name used when writing frames (zero-padded PGM).
std::string frame_image_name(std::int64_t frame_id);

RadarFrame load_session_frame(const Session& session, std::size_t index);

}  // namespace radarpr
