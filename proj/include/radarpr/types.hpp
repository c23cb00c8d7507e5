#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace radarpr {

/// Planar position in a session-global frame, meters.
struct Pose {
  double x = 0.0;
  double y = 0.0;
};

struct PixelCoord {
  int x = 0;
  int y = 0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// One Cartesian radar intensity image plus acquisition metadata.
/// Pixel values are kept in native depth (8- or 16-bit) without rescaling.
struct RadarFrame {
  std::int64_t frame_id = 0;
  double timestamp = 0.0;  // seconds
  int width = 0;
  int height = 0;
  double resolution = 1.0;  // meters per pixel
  int bit_depth = 8;        // 8 or 16
  std::vector<std::uint16_t> intensities;  // row-major, width*height
  std::optional<Pose> pose;

  std::uint16_t at(int x, int y) const {
    return intensities[static_cast<std::size_t>(y) * width + x];
  }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * height;
  }
};

/// Detection mask produced by thresholding a frame. Row-major, 0 or 1.
struct BinaryImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> mask;

  bool at(int x, int y) const {
    return mask[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool v) {
    mask[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  std::size_t count_true() const {
    std::size_t n = 0;
    for (std::uint8_t m : mask) n += m;
    return n;
  }
};

inline BinaryImage make_binary_image(int width, int height) {
  return BinaryImage{width, height,
                     std::vector<std::uint8_t>(
                         static_cast<std::size_t>(width) * height, 0)};
}

/// Center of the pixel grid; descriptors and synthetic rendering share it.
inline double image_center_x(int width) { return (width - 1) / 2.0; }
inline double image_center_y(int height) { return (height - 1) / 2.0; }

}  // namespace radarpr
