#pragma once

#include <cmath>
#include <filesystem>
#include <span>
#include <vector>

#include "radarpr/types.hpp"

namespace radarpr {

/// Parametric abstraction of one cluster: center, semi-major/minor axes
/// (pixels) and major-axis orientation in (-pi/2, pi/2].
struct Ellipse {
  double cx = 0.0;
  double cy = 0.0;
  double a = 0.0;  // semi-major, a >= b >= 0
  double b = 0.0;  // semi-minor
  double theta = 0.0;
};

/// Rasterized union of ellipse outlines (boolean grid).
struct EllipseImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> mask;

  bool at(int x, int y) const {
    return mask[static_cast<std::size_t>(y) * width + x] != 0;
  }
};

/// Best-fit ellipse of a pixel cluster from its coordinate moments:
/// centroid = mean, covariance with 1/N normalization, closed-form 2x2
/// eigenvalues, axes a = 2*sqrt(lambda1), b = 2*sqrt(lambda2), and
/// orientation theta = atan2(2*C12, C11 - C22) / 2. Isotropic clusters
/// (C11 == C22, C12 == 0) take theta = 0.
/// Throws std::invalid_argument on an empty cluster.
Ellipse fit_ellipse(std::span<const PixelCoord> cluster);

/// Boundary point of an ellipse at parameter t.
inline void ellipse_point(const Ellipse& e, double t, double& x, double& y) {
  const double ct = std::cos(t), st = std::sin(t);
  const double cth = std::cos(e.theta), sth = std::sin(e.theta);
  x = e.cx + e.a * ct * cth - e.b * st * sth;
  y = e.cy + e.a * ct * sth + e.b * st * cth;
}

/// Boundary sample count for one ellipse: the requested count, raised to
/// ceil(2*pi*a) for large ellipses so outlines stay gap-free, and rounded
/// up to even so the sample set is closed under t -> t + pi.
int effective_samples(const Ellipse& e, int requested);

/// Rasterizes ellipse outlines into a boolean image: samples t uniformly in
/// [0, 2*pi), rounds to the nearest pixel, and unions over ellipses.
/// Out-of-bounds points are clipped. Requires samples_per_ellipse >= 8.
EllipseImage rasterize(std::span<const Ellipse> ellipses, int width, int height,
                       int samples_per_ellipse = 128);

/// Debug dump of an ellipse image as an 8-bit PGM.
void write_ellipse_image_pgm(const std::filesystem::path& path,
                             const EllipseImage& img);

}  // namespace radarpr
