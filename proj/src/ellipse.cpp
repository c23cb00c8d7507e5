#include "radarpr/ellipse.hpp"

#include <cmath>
#include <stdexcept>

#include "radarpr/frame_io.hpp"

namespace radarpr {

Ellipse fit_ellipse(std::span<const PixelCoord> cluster) {
  if (cluster.empty())
    throw std::invalid_argument("fit_ellipse: empty cluster");

  const double n = static_cast<double>(cluster.size());
  double sx = 0.0, sy = 0.0;
  for (const PixelCoord& p : cluster) {
    sx += p.x;
    sy += p.y;
  }
  const double cx = sx / n;
  const double cy = sy / n;

  double c11 = 0.0, c22 = 0.0, c12 = 0.0;
  for (const PixelCoord& p : cluster) {
    const double dx = p.x - cx;
    const double dy = p.y - cy;
    c11 += dx * dx;
    c22 += dy * dy;
    c12 += dx * dy;
  }
  c11 /= n;
  c22 /= n;
  c12 /= n;

  const double disc = std::sqrt((c11 - c22) * (c11 - c22) + 4.0 * c12 * c12);
  const double l1 = 0.5 * ((c11 + c22) + disc);
  double l2 = 0.5 * ((c11 + c22) - disc);
  if (l2 < 0.0) l2 = 0.0;  // clamp rounding noise; covariance is PSD

  Ellipse e;
  e.cx = cx;
  e.cy = cy;
  e.a = 2.0 * std::sqrt(l1);
  e.b = 2.0 * std::sqrt(l2);
  if (c12 == 0.0 && c11 == c22) {
    e.theta = 0.0;  // isotropic: any orientation gives the same ellipse
  } else {
    e.theta = 0.5 * std::atan2(2.0 * c12, c11 - c22);
    if (e.theta <= -M_PI / 2.0) e.theta += M_PI;
  }
  return e;
}

int effective_samples(const Ellipse& e, int requested) {
  const double circumference_bound = 2.0 * M_PI * e.a;
  int s = requested;
  if (circumference_bound > s) s = static_cast<int>(std::ceil(circumference_bound));
  if (s % 2 != 0) ++s;
  return s;
}

EllipseImage rasterize(std::span<const Ellipse> ellipses, int width, int height,
                       int samples_per_ellipse) {
  if (samples_per_ellipse < 8)
    throw std::invalid_argument("rasterize: samples_per_ellipse must be >= 8");
  EllipseImage img;
  img.width = width;
  img.height = height;
  img.mask.assign(static_cast<std::size_t>(width) * height, 0);

  for (const Ellipse& e : ellipses) {
    const int s = effective_samples(e, samples_per_ellipse);
    for (int k = 0; k < s; ++k) {
      const double t = 2.0 * M_PI * k / s;
      double x, y;
      ellipse_point(e, t, x, y);
      const long px = std::lround(x);
      const long py = std::lround(y);
      if (px < 0 || py < 0 || px >= width || py >= height) continue;
      img.mask[static_cast<std::size_t>(py) * width + px] = 1;
    }
  }
  return img;
}

void write_ellipse_image_pgm(const std::filesystem::path& path,
                             const EllipseImage& img) {
  GrayImage g;
  g.width = img.width;
  g.height = img.height;
  g.bit_depth = 8;
  g.pixels.resize(img.mask.size());
  for (std::size_t i = 0; i < img.mask.size(); ++i)
    g.pixels[i] = img.mask[i] ? 255 : 0;
  write_gray_image(path, g);
}

}  // namespace radarpr
