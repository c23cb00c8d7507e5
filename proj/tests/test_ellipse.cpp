#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "radarpr/ellipse.hpp"

using namespace radarpr;

namespace {

std::vector<PixelCoord> random_cluster(std::mt19937_64& rng, int max_extent) {
  std::uniform_int_distribution<int> size_dist(1, 60);
  std::uniform_int_distribution<int> coord(0, max_extent);
  const int n = size_dist(rng);
  std::vector<PixelCoord> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pts.push_back({coord(rng), coord(rng)});
  return pts;
}

}  // namespace

TEST_CASE("single pixel gives a degenerate point ellipse") {
  const Ellipse e = fit_ellipse(std::vector<PixelCoord>{{5, 5}});
  CHECK(e.cx == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(e.cy == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(e.a == 0.0);
  CHECK(e.b == 0.0);
  CHECK(e.theta == 0.0);
}

TEST_CASE("three collinear pixels give a segment along x") {
  const Ellipse e =
      fit_ellipse(std::vector<PixelCoord>{{0, 0}, {1, 0}, {2, 0}});
  CHECK(std::abs(e.cx - 1.0) < 1e-9);
  CHECK(std::abs(e.cy - 0.0) < 1e-9);
  CHECK(std::abs(e.a - 2.0 * std::sqrt(2.0 / 3.0)) < 1e-9);
  CHECK(std::abs(e.b - 0.0) < 1e-9);
  CHECK(e.theta == 0.0);
}

TEST_CASE("2x2 block is isotropic with unit axes and zero orientation") {
  const Ellipse e =
      fit_ellipse(std::vector<PixelCoord>{{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  CHECK(std::abs(e.cx - 0.5) < 1e-9);
  CHECK(std::abs(e.cy - 0.5) < 1e-9);
  CHECK(std::abs(e.a - 1.0) < 1e-9);
  CHECK(std::abs(e.b - 1.0) < 1e-9);
  CHECK(e.theta == 0.0);
}

TEST_CASE("empty cluster is rejected") {
  CHECK_THROWS(fit_ellipse(std::vector<PixelCoord>{}));
}

TEST_CASE("major axis follows the elongation direction") {
  // Points spread along y: the major axis must pick up theta = pi/2,
  // which a plain halved arctan of the ratio would miss.
  const Ellipse e = fit_ellipse(
      std::vector<PixelCoord>{{3, 0}, {3, 2}, {3, 4}, {4, 0}, {4, 2}, {4, 4}});
  CHECK(std::abs(e.theta - M_PI / 2.0) < 1e-9);
  CHECK(e.a > e.b);
}

TEST_CASE("90 degree rotation about the centroid swaps the orientation") {
  std::mt19937_64 rng(20240910);
  for (int trial = 0; trial < 50; ++trial) {
    auto pts = random_cluster(rng, 30);
    // rotate 90 degrees about an integer pivot so coordinates stay integral
    std::vector<PixelCoord> rot;
    rot.reserve(pts.size());
    for (const auto& p : pts) rot.push_back({-p.y, p.x});
    const Ellipse e0 = fit_ellipse(pts);
    const Ellipse e1 = fit_ellipse(rot);
    CHECK(std::abs(e0.a - e1.a) < 1e-9);
    CHECK(std::abs(e0.b - e1.b) < 1e-9);
    if (e0.a - e0.b > 1e-9) {
      double expect = e0.theta + M_PI / 2.0;
      if (expect > M_PI / 2.0) expect -= M_PI;
      CHECK(std::abs(e1.theta - expect) < 1e-9);
    }
  }
}

TEST_CASE("translation equivariance and trace preservation") {
  std::mt19937_64 rng(20240911);
  std::uniform_int_distribution<int> shift(-40, 40);
  for (int trial = 0; trial < 200; ++trial) {
    auto pts = random_cluster(rng, 50);
    const int dx = shift(rng), dy = shift(rng);
    std::vector<PixelCoord> moved;
    moved.reserve(pts.size());
    for (const auto& p : pts) moved.push_back({p.x + dx, p.y + dy});

    const Ellipse e0 = fit_ellipse(pts);
    const Ellipse e1 = fit_ellipse(moved);
    CHECK(std::abs(e1.cx - e0.cx - dx) < 1e-9);
    CHECK(std::abs(e1.cy - e0.cy - dy) < 1e-9);
    CHECK(std::abs(e1.a - e0.a) < 1e-9);
    CHECK(std::abs(e1.b - e0.b) < 1e-9);
    CHECK(std::abs(e1.theta - e0.theta) < 1e-9);

    // lambda1 + lambda2 == C11 + C22, recomputed directly
    double cx = 0.0, cy = 0.0;
    for (const auto& p : pts) {
      cx += p.x;
      cy += p.y;
    }
    cx /= static_cast<double>(pts.size());
    cy /= static_cast<double>(pts.size());
    double c11 = 0.0, c22 = 0.0;
    for (const auto& p : pts) {
      c11 += (p.x - cx) * (p.x - cx);
      c22 += (p.y - cy) * (p.y - cy);
    }
    c11 /= static_cast<double>(pts.size());
    c22 /= static_cast<double>(pts.size());
    const double l1 = e0.a * e0.a / 4.0;
    const double l2 = e0.b * e0.b / 4.0;
    CHECK(std::abs((l1 + l2) - (c11 + c22)) < 1e-9);
    CHECK(l2 >= -1e-9);
    CHECK(l1 >= l2);
  }
}

TEST_CASE("orientation stays in the half-open principal range") {
  std::mt19937_64 rng(20240912);
  for (int trial = 0; trial < 200; ++trial) {
    const Ellipse e = fit_ellipse(random_cluster(rng, 40));
    CHECK(e.theta > -M_PI / 2.0);
    CHECK(e.theta <= M_PI / 2.0);
  }
}

TEST_CASE("rasterized circle points sit on the ring") {
  Ellipse c;
  c.cx = 32.0;
  c.cy = 32.0;
  c.a = 10.0;
  c.b = 10.0;
  c.theta = 0.0;
  const EllipseImage img = rasterize(std::vector<Ellipse>{c}, 65, 65);
  int found = 0;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (!img.mask[static_cast<std::size_t>(y) * img.width + x]) continue;
      ++found;
      const double r = std::hypot(x - 32.0, y - 32.0);
      CHECK(std::abs(r - 10.0) <= 0.71);  // half-pixel rounding in x and y
    }
  }
  CHECK(found > 30);
}

TEST_CASE("rasterize clips out-of-bounds samples without throwing") {
  Ellipse e;
  e.cx = 2.0;
  e.cy = 2.0;
  e.a = 50.0;
  e.b = 10.0;
  e.theta = 0.7;
  const EllipseImage img = rasterize(std::vector<Ellipse>{e}, 16, 16);
  CHECK(img.width == 16);
  std::size_t on = 0;
  for (auto v : img.mask) on += v != 0;
  CHECK(on > 0);
}

TEST_CASE("empty ellipse list rasterizes to an all-false image") {
  const EllipseImage img = rasterize(std::vector<Ellipse>{}, 9, 9);
  for (auto v : img.mask) CHECK(v == 0);
}

TEST_CASE("rasterize rejects tiny sample counts") {
  CHECK_THROWS(rasterize(std::vector<Ellipse>{}, 8, 8, 4));
}

TEST_CASE("point count never exceeds samples times ellipse count") {
  std::mt19937_64 rng(20240913);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Ellipse> es;
    for (int i = 0; i < 5; ++i) {
      Ellipse e;
      e.cx = 10.0 + 40.0 * u(rng);
      e.cy = 10.0 + 40.0 * u(rng);
      e.a = 8.0 * u(rng);
      e.b = e.a * u(rng);
      e.theta = (u(rng) - 0.5) * M_PI * 0.99;
      es.push_back(e);
    }
    const EllipseImage img = rasterize(es, 64, 64, 64);
    std::size_t on = 0;
    for (auto v : img.mask) on += v != 0;
    // a <= 8 keeps ceil(2*pi*a) below the requested 64, so no scale-up
    CHECK(on <= 64u * es.size());
  }
}
