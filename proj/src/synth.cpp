#include "radarpr/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

#include "radarpr/frame_io.hpp"

namespace radarpr {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b));
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix(mix(a, b), c);
}

// Uniform in [0, 1) from the engine's raw 64-bit output; avoids
// distribution objects so streams are identical across library versions.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

struct EllipseAxes {
  double s1 = 0.0;  // major std dev, meters
  double s2 = 0.0;
  double angle = 0.0;  // world frame
};

// Principal axes of a 2x2 covariance; mirrors the cluster-fit convention.
EllipseAxes covariance_axes(double cxx, double cxy, double cyy) {
  EllipseAxes ax;
  const double tr = cxx + cyy;
  const double disc = std::sqrt((cxx - cyy) * (cxx - cyy) + 4.0 * cxy * cxy);
  const double l1 = 0.5 * (tr + disc);
  double l2 = 0.5 * (tr - disc);
  if (l2 < 0.0) l2 = 0.0;
  ax.s1 = std::sqrt(l1);
  ax.s2 = std::sqrt(l2);
  if (cxy == 0.0 && cxx == cyy) {
    ax.angle = 0.0;
  } else {
    ax.angle = 0.5 * std::atan2(2.0 * cxy, cxx - cyy);
  }
  return ax;
}

struct Canvas {
  RadarFrame* frame;
  double cx0, cy0;
};

// Fills a rotated ellipse given pixel-space center, semi-axes, and angle.
// Overlaps keep the brighter value.
void draw_filled_ellipse(Canvas& cv, double cx, double cy, double a, double b,
                         double angle, std::uint16_t value) {
  if (a <= 0.0 || b <= 0.0) return;
  RadarFrame& f = *cv.frame;
  const double ca = std::cos(angle), sa = std::sin(angle);
  const double ex = std::sqrt(a * a * ca * ca + b * b * sa * sa);
  const double ey = std::sqrt(a * a * sa * sa + b * b * ca * ca);
  int x0 = static_cast<int>(std::floor(cx - ex)), x1 = static_cast<int>(std::ceil(cx + ex));
  int y0 = static_cast<int>(std::floor(cy - ey)), y1 = static_cast<int>(std::ceil(cy + ey));
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  x1 = std::min(x1, f.width - 1);
  y1 = std::min(y1, f.height - 1);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - cx, dy = y - cy;
      const double u = (dx * ca + dy * sa) / a;
      const double v = (-dx * sa + dy * ca) / b;
      if (u * u + v * v <= 1.0) {
        std::uint16_t& px = f.intensities[static_cast<std::size_t>(y) * f.width + x];
        if (value > px) px = value;
      }
    }
  }
}

constexpr std::uint64_t kBlobStream = 0xB10BULL;
constexpr std::uint64_t kVesselFluctStream = 0xF1BEULL;
constexpr std::uint64_t kVesselPoseStream = 0xA2C4ULL;

}  // namespace

RadarFrame render_frame(const Scene& scene, const Pose& pose, double heading,
                        const RenderConfig& cfg,
                        std::uint64_t fluctuation_seed,
                        std::uint64_t anchorage_seed) {
  RadarFrame f;
  f.width = cfg.width;
  f.height = cfg.height;
  f.resolution = cfg.resolution;
  f.bit_depth = cfg.bit_depth;
  f.pose = pose;
  f.intensities.assign(static_cast<std::size_t>(cfg.width) * cfg.height, 0);

  Canvas cv{&f, image_center_x(cfg.width), image_center_y(cfg.height)};
  const double ch = std::cos(-heading), sh = std::sin(-heading);
  const double res = cfg.resolution;
  const double max_r = cfg.resolved_max_range();
  const std::uint16_t max_value =
      static_cast<std::uint16_t>((1u << cfg.bit_depth) - 1u);
  // Cull circle in pixels, padded so clipped blobs still draw their rim.
  const double cull_px = max_r / res;

  auto to_px = [&](double wx, double wy, double& px, double& py) {
    const double rx = wx - pose.x, ry = wy - pose.y;
    const double vx = ch * rx - sh * ry;
    const double vy = sh * rx + ch * ry;
    px = cv.cx0 + vx / res;
    py = cv.cy0 + vy / res;
  };
  auto clamp_value = [&](double v) {
    if (v < 0.0) v = 0.0;
    if (v > max_value) v = max_value;
    return static_cast<std::uint16_t>(std::lround(v));
  };

  for (std::size_t bi = 0; bi < scene.blobs.size(); ++bi) {
    const StaticBlob& blob = scene.blobs[bi];
    const EllipseAxes ax =
        covariance_axes(blob.cov_xx, blob.cov_xy, blob.cov_yy);
    std::mt19937_64 rng(mix(fluctuation_seed, kBlobStream, bi));
    const double delta = uniform(rng, -cfg.fluctuation_px, cfg.fluctuation_px);
    double a = cfg.blob_level * ax.s1 / res + delta;
    double b = cfg.blob_level * ax.s2 / res + delta;
    a = std::max(a, 0.8);
    b = std::max(b, 0.8);
    double px, py;
    to_px(blob.cx, blob.cy, px, py);
    const double off = std::hypot(px - cv.cx0, py - cv.cy0);
    if (off - std::max(a, b) > cull_px) continue;
    draw_filled_ellipse(cv, px, py, a, b, ax.angle - heading,
                        clamp_value(blob.intensity));
  }

  for (std::size_t zi = 0; zi < scene.anchorages.size(); ++zi) {
    const Anchorage& zone = scene.anchorages[zi];
    for (int vi = 0; vi < zone.vessel_count; ++vi) {
      std::mt19937_64 pos_rng(
          mix(anchorage_seed, kVesselPoseStream, mix(zi, vi)));
      const double rad = zone.radius * std::sqrt(uniform01(pos_rng));
      const double phi = 2.0 * M_PI * uniform01(pos_rng);
      const double yaw = M_PI * uniform01(pos_rng);
      const double wx = zone.cx + rad * std::cos(phi);
      const double wy = zone.cy + rad * std::sin(phi);
      std::mt19937_64 fl_rng(
          mix(fluctuation_seed, kVesselFluctStream, mix(zi, vi)));
      const double delta =
          uniform(fl_rng, -cfg.fluctuation_px, cfg.fluctuation_px);
      double a = 0.5 * zone.vessel_length / res + delta;
      double b = 0.5 * zone.vessel_width / res + delta;
      a = std::max(a, 0.8);
      b = std::max(b, 0.8);
      double px, py;
      to_px(wx, wy, px, py);
      const double off = std::hypot(px - cv.cx0, py - cv.cy0);
      if (off - std::max(a, b) > cull_px) continue;
      draw_filled_ellipse(cv, px, py, a, b, yaw - heading,
                          clamp_value(zone.intensity));
    }
  }

  // Radial clip: blind disc below min_range, dark beyond max_range.
  const double min_px = cfg.min_range / res;
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      const double r = std::hypot(x - cv.cx0, y - cv.cy0);
      if (r < min_px || r >= cull_px) {
        f.intensities[static_cast<std::size_t>(y) * f.width + x] = 0;
      }
    }
  }
  return f;
}

std::vector<RadarFrame> make_loop_sequence(const Scene& scene,
                                           const Trajectory& trajectory,
                                           const RenderConfig& cfg,
                                           std::uint64_t seed) {
  const auto& pts = trajectory.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0 && pts[i].t <= pts[i - 1].t) {
      throw std::invalid_argument("trajectory timestamps must be strictly increasing");
    }
    if (!scene.bounds.contains(pts[i].pose.x, pts[i].pose.y)) {
      throw std::invalid_argument("trajectory leaves world bounds at point " +
                                  std::to_string(i));
    }
  }
  std::vector<RadarFrame> frames;
  frames.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const TrajectoryPoint& p = pts[i];
    const std::uint64_t fluct = mix(seed, 0xF0ULL, mix(i, p.epoch));
    const std::uint64_t anch = mix(seed, 0xA0ULL, p.epoch);
    RadarFrame f = render_frame(scene, p.pose, p.heading, cfg, fluct, anch);
    f.frame_id = static_cast<std::int64_t>(i);
    f.timestamp = p.t;
    frames.push_back(std::move(f));
  }
  return frames;
}

void write_session(const std::filesystem::path& dir,
                   const std::vector<RadarFrame>& frames) {
  std::filesystem::create_directories(dir);
  std::vector<FrameMeta> metas;
  metas.reserve(frames.size());
  for (const RadarFrame& f : frames) {
    save_frame(dir / frame_image_name(f.frame_id), f);
    FrameMeta m;
    m.frame_id = f.frame_id;
    m.timestamp = f.timestamp;
    m.pose = f.pose;
    m.resolution = f.resolution;
    metas.push_back(m);
  }
  write_metadata_csv(dir / "metadata.csv", metas);
}

nlohmann::json scene_to_json(const Scene& scene) {
  nlohmann::ordered_json j;
  j["world"] = {{"xmin", scene.bounds.xmin},
                {"ymin", scene.bounds.ymin},
                {"xmax", scene.bounds.xmax},
                {"ymax", scene.bounds.ymax}};
  j["static_blobs"] = nlohmann::ordered_json::array();
  for (const StaticBlob& b : scene.blobs) {
    j["static_blobs"].push_back({{"center", {b.cx, b.cy}},
                                 {"covariance", {b.cov_xx, b.cov_xy, b.cov_yy}},
                                 {"intensity", b.intensity}});
  }
  j["anchorages"] = nlohmann::ordered_json::array();
  for (const Anchorage& a : scene.anchorages) {
    j["anchorages"].push_back({{"center", {a.cx, a.cy}},
                               {"radius", a.radius},
                               {"vessel_count", a.vessel_count},
                               {"vessel_length", a.vessel_length},
                               {"vessel_width", a.vessel_width},
                               {"intensity", a.intensity}});
  }
  return j;
}

Scene scene_from_json(const nlohmann::json& j) {
  Scene s;
  const auto& w = j.at("world");
  s.bounds.xmin = w.at("xmin").get<double>();
  s.bounds.ymin = w.at("ymin").get<double>();
  s.bounds.xmax = w.at("xmax").get<double>();
  s.bounds.ymax = w.at("ymax").get<double>();
  if (s.bounds.xmin >= s.bounds.xmax || s.bounds.ymin >= s.bounds.ymax) {
    throw std::invalid_argument("world bounds are empty");
  }
  for (const auto& bj : j.value("static_blobs", nlohmann::json::array())) {
    StaticBlob b;
    b.cx = bj.at("center").at(0).get<double>();
    b.cy = bj.at("center").at(1).get<double>();
    b.cov_xx = bj.at("covariance").at(0).get<double>();
    b.cov_xy = bj.at("covariance").at(1).get<double>();
    b.cov_yy = bj.at("covariance").at(2).get<double>();
    b.intensity = bj.value("intensity", 220.0);
    if (b.cov_xx < 0.0 || b.cov_yy < 0.0 ||
        b.cov_xx * b.cov_yy - b.cov_xy * b.cov_xy < 0.0) {
      throw std::invalid_argument("blob covariance is not positive semidefinite");
    }
    s.blobs.push_back(b);
  }
  for (const auto& aj : j.value("anchorages", nlohmann::json::array())) {
    Anchorage a;
    a.cx = aj.at("center").at(0).get<double>();
    a.cy = aj.at("center").at(1).get<double>();
    a.radius = aj.at("radius").get<double>();
    a.vessel_count = aj.at("vessel_count").get<int>();
    a.vessel_length = aj.value("vessel_length", 40.0);
    a.vessel_width = aj.value("vessel_width", 16.0);
    a.intensity = aj.value("intensity", 220.0);
    if (a.vessel_count < 0) {
      throw std::invalid_argument("vessel_count must be >= 0");
    }
    if (a.radius <= 0.0) {
      throw std::invalid_argument("anchorage radius must be positive");
    }
    if (!s.bounds.contains(a.cx - a.radius, a.cy - a.radius) ||
        !s.bounds.contains(a.cx + a.radius, a.cy + a.radius)) {
      throw std::invalid_argument("anchorage zone outside world bounds");
    }
    s.anchorages.push_back(a);
  }
  if (s.blobs.empty() && s.anchorages.empty()) {
    throw std::invalid_argument("scene has no blobs or anchorages");
  }
  return s;
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  return scene_from_json(j);
}

void save_scene(const std::filesystem::path& path, const Scene& scene) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << scene_to_json(scene).dump(2) << "\n";
}

nlohmann::json trajectory_to_json(const Trajectory& t) {
  nlohmann::ordered_json j;
  j["points"] = nlohmann::ordered_json::array();
  for (const TrajectoryPoint& p : t.points) {
    j["points"].push_back({{"t", p.t},
                           {"x", p.pose.x},
                           {"y", p.pose.y},
                           {"heading", p.heading},
                           {"epoch", p.epoch}});
  }
  return j;
}

Trajectory trajectory_from_json(const nlohmann::json& j) {
  Trajectory t;
  for (const auto& pj : j.at("points")) {
    TrajectoryPoint p;
    p.t = pj.at("t").get<double>();
    p.pose.x = pj.at("x").get<double>();
    p.pose.y = pj.at("y").get<double>();
    p.heading = pj.at("heading").get<double>();
    p.epoch = pj.value("epoch", 0);
    t.points.push_back(p);
  }
  return t;
}

Trajectory load_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  return trajectory_from_json(j);
}

void save_trajectory(const std::filesystem::path& path, const Trajectory& t) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << trajectory_to_json(t).dump(2) << "\n";
}

namespace {

StaticBlob island(double cx, double cy, double s1, double s2, double rot,
                  double intensity = 230.0) {
  // Sigma = R diag(s1^2, s2^2) R'
  const double c = std::cos(rot), s = std::sin(rot);
  StaticBlob b;
  b.cx = cx;
  b.cy = cy;
  b.cov_xx = c * c * s1 * s1 + s * s * s2 * s2;
  b.cov_yy = s * s * s1 * s1 + c * c * s2 * s2;
  b.cov_xy = c * s * (s1 * s1 - s2 * s2);
  b.intensity = intensity;
  return b;
}

// Evenly spaced points along a polyline, heading along the local segment,
// one radar revolution (2.5 s) apart.
std::vector<TrajectoryPoint> sample_polyline(
    const std::vector<std::pair<double, double>>& waypoints, int count,
    double t0 = 0.0, int epoch = 0) {
  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const double dx = waypoints[i].first - waypoints[i - 1].first;
    const double dy = waypoints[i].second - waypoints[i - 1].second;
    cum.push_back(cum.back() + std::hypot(dx, dy));
  }
  const double total = cum.back();
  if (count < 2 || total <= 0.0) {
    throw std::invalid_argument("polyline sampling needs >= 2 points and length");
  }
  std::vector<TrajectoryPoint> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double s = total * k / (count - 1);
    std::size_t seg = 1;
    while (seg + 1 < cum.size() && cum[seg] < s) ++seg;
    const double seg_len = cum[seg] - cum[seg - 1];
    const double f = seg_len > 0.0 ? (s - cum[seg - 1]) / seg_len : 0.0;
    const auto& p0 = waypoints[seg - 1];
    const auto& p1 = waypoints[seg];
    TrajectoryPoint tp;
    tp.t = t0 + 2.5 * k;
    tp.pose.x = p0.first + f * (p1.first - p0.first);
    tp.pose.y = p0.second + f * (p1.second - p0.second);
    tp.heading = std::atan2(p1.second - p0.second, p1.first - p0.first);
    tp.epoch = epoch;
    out.push_back(tp);
  }
  return out;
}

SynthPreset single_island_preset() {
  SynthPreset p;
  p.render.width = 512;
  p.render.height = 512;
  p.render.resolution = 6.5;
  p.render.fluctuation_px = 0.8;

  Scene& s = p.scene;
  s.bounds = {-6500.0, -6500.0, 6500.0, 6500.0};

  // East coast: a string of separate skerries on the channel's
  // starboard hand. Kept apart on purpose — a frame then sees half a
  // dozen point-like echoes whose slant ranges change at different
  // rates as the vehicle moves, and that range multiset pins down where
  // along the channel it was taken. The stand-off also ramps with a
  // short swell on top so no two stretches of coast repeat.
  for (int i = 0; i <= 24; ++i) {
    const double y = -3600.0 + 300.0 * i;
    const double lat =
        320.0 + 0.044 * (y + 3600.0) + 50.0 * std::sin(y / 165.0);
    const double st = 45.0 + 14.0 * std::sin(y / 310.0 + 0.5);
    const double sr = 15.0 + 4.0 * std::sin(y / 133.0 + 2.1);
    s.blobs.push_back(island(3000.0 + lat, y, st, sr, M_PI / 2.0));
  }
  // Port-hand islets at their own ramped stand-off; their slant ranges
  // change fast as the vehicle passes, which breaks up any two channel
  // neighbourhoods that happen to share a coast distance. The islet ramp
  // runs the same way as the coast ramp: a along-channel shift that
  // reconciles one side then doubles the error on the other.
  for (int j = 0; j <= 11; ++j) {
    const double y = -2700.0 + 520.0 * j;
    const double d = 330.0 + 30.0 * j + 35.0 * std::sin(1.7 * j);
    const double st = 55.0 + 20.0 * std::sin(2.3 * j + 0.4);
    const double sr = 14.0 + 4.0 * std::sin(1.1 * j + 1.9);
    s.blobs.push_back(island(3000.0 - d, y, st, sr, 0.3 * j));
  }
  // South shore along the outbound leg, same skerry treatment.
  for (int i = 0; i <= 20; ++i) {
    const double x = -3650.0 + 307.5 * i;
    const double lat =
        330.0 + 0.05 * (x + 3650.0) + 45.0 * std::sin(x / 149.0);
    const double st = 42.0 + 12.0 * std::sin(x / 270.0 + 1.2);
    const double sr = 13.0 + 3.0 * std::sin(x / 117.0);
    s.blobs.push_back(island(x, -3000.0 - lat, st, sr, 0.0));
  }
  // Offshore marks north of the outbound leg.
  for (int j = 0; j <= 5; ++j) {
    const double x = -2800.0 + 560.0 * j;
    const double d = 320.0 + 62.0 * j + 45.0 * std::sin(2.1 * j);
    s.blobs.push_back(
        island(x, -3000.0 + d, 50.0 + 8.0 * j, 16.0, 0.5 * j));
  }
  // Rocks west of the turning basin so the one-time excursion at the
  // top is not open water.
  s.blobs.push_back(island(1500.0, 3700.0, 55.0, 18.0, 0.4));
  s.blobs.push_back(island(1250.0, 4400.0, 70.0, 20.0, -0.8));
  s.blobs.push_back(island(1800.0, 4900.0, 45.0, 16.0, 0.0));
  s.blobs.push_back(island(2300.0, 4250.0, 60.0, 15.0, 1.1));

  // Out along the south shore, north through the channel, a one-time
  // excursion west of the basin, then back down the channel 15 m abeam
  // and away to the south-east. The straight legs share a 120 m grid so
  // every southbound frame reoccupies a northbound station exactly 15 m
  // to the side; the turn stays west of the return line so those
  // stations are the only close approaches between legs.
  Trajectory t;
  auto add_leg = [&t](double x0, double y0, double dx, double dy, int n) {
    const double h = std::atan2(dy, dx);
    for (int i = 0; i < n; ++i) {
      TrajectoryPoint tp;
      tp.t = 2.5 * static_cast<double>(t.points.size());
      tp.pose.x = x0 + dx * i;
      tp.pose.y = y0 + dy * i;
      tp.heading = h;
      t.points.push_back(tp);
    }
  };
  add_leg(-3000.0, -3000.0, 120.0, 0.0, 50);  // along the south shore
  add_leg(3000.0, -3000.0, 0.0, 120.0, 50);   // channel, northbound
  const std::vector<std::pair<double, double>> turn{
      {3000.0, 3000.0}, {2400.0, 3500.0}, {2000.0, 4300.0},
      {2600.0, 5000.0}, {3015.0, 4560.0}};
  // 28 turn samples start the southbound leg at index 128 = 3 (mod 5), so
  // the frames a stride-5 index keeps sit at the same y as their
  // northbound partners instead of between them.
  for (auto& tp :
       sample_polyline(turn, 28, 2.5 * static_cast<double>(t.points.size())))
    t.points.push_back(tp);                    // basin excursion, seen once
  add_leg(3015.0, 4440.0, 0.0, -120.0, 61);   // channel, southbound
  add_leg(3118.0, -2821.6, 103.0, -61.6, 11);  // departure south-east
  p.trajectories.push_back(std::move(t));
  return p;
}

SynthPreset anchorage_loop_preset() {
  SynthPreset p;
  p.render.width = 512;
  p.render.height = 512;
  p.render.resolution = 3.25;

  Scene& s = p.scene;
  s.bounds = {-6500.0, -6500.0, 6500.0, 6500.0};

  // Eight stops on a harbor ring, an anchorage zone at each. A heavy
  // breakwater runs inshore of the track at the same stand-off
  // everywhere, and each stop is told apart only by six small mooring
  // marks whose stand-offs slide 16 m per stop. The marks are tiny in
  // area, so raw occupancy profiles are dominated by the breakwater —
  // whose painted width breathes with every scan — while the fitted
  // outlines keep every mark at full descriptor weight and a stable
  // range. Stops therefore read clearly through region outlines and
  // only faintly through occupancy.
  const int stops = 8;
  const double track_r = 2500.0;  // vehicle ring
  const double zone_lateral = 500.0;
  const double zone_radius = 70.0;
  const double mark_inner[3] = {225.0, 255.0, 285.0};
  const double mark_outer[3] = {610.0, 655.0, 700.0};
  const double mark_along[6] = {-150.0, -20.0, 110.0, -110.0, 30.0, 170.0};
  const double bw_along[3] = {-240.0, 0.0, 240.0};

  for (int k = 0; k < stops; ++k) {
    const double ang = 2.0 * M_PI * k / stops;
    const double ca = std::cos(ang), sa = std::sin(ang);
    const double tang = ang + M_PI / 2.0;
    const double cta = std::cos(tang), sta = std::sin(tang);
    for (int i = 0; i < 6; ++i) {
      const double lateral =
          (i < 3 ? mark_inner[i] : mark_outer[i - 3]) + 16.0 * k;
      const double bx = (track_r + lateral) * ca + mark_along[i] * cta;
      const double by = (track_r + lateral) * sa + mark_along[i] * sta;
      s.blobs.push_back(island(bx, by, 28.0, 2.5, tang, 230.0));
    }
    for (int i = 0; i < 3; ++i) {
      const double bx = (track_r + 150.0) * ca + bw_along[i] * cta;
      const double by = (track_r + 150.0) * sa + bw_along[i] * sta;
      s.blobs.push_back(island(bx, by, 30.0, 12.0, tang, 230.0));
    }
    Anchorage a;
    a.cx = (track_r + zone_lateral) * ca;
    a.cy = (track_r + zone_lateral) * sa;
    a.radius = zone_radius;
    a.vessel_count = 1;
    a.vessel_length = 24.0;
    a.vessel_width = 9.0;
    a.intensity = 220.0;
    s.anchorages.push_back(a);
  }

  // Two identical passes around the track ring; only the epoch differs,
  // so anchorage layouts resample while everything else repeats. Frames
  // cluster around the stops so every frame sees one stop in full.
  const int frames_per_stop = 12;
  const double arc_half = 250.0;
  for (int epoch = 0; epoch < 2; ++epoch) {
    Trajectory t;
    int k_frame = 0;
    for (int k = 0; k < stops; ++k) {
      const double ang0 = 2.0 * M_PI * k / stops;
      for (int i = 0; i < frames_per_stop; ++i) {
        const double arc = -arc_half + 2.0 * arc_half * i / (frames_per_stop - 1);
        const double ang = ang0 + arc / track_r;
        TrajectoryPoint tp;
        tp.t = 2.5 * k_frame++;
        tp.pose.x = track_r * std::cos(ang);
        tp.pose.y = track_r * std::sin(ang);
        tp.heading = ang + M_PI / 2.0;  // tangential, counterclockwise
        tp.epoch = epoch;
        t.points.push_back(tp);
      }
    }
    p.trajectories.push_back(std::move(t));
  }
  return p;
}

}  // namespace

SynthPreset make_preset(const std::string& name) {
  if (name == "single-island") return single_island_preset();
  if (name == "anchorage-loop") return anchorage_loop_preset();
  throw std::invalid_argument("unknown preset '" + name +
                              "' (expected single-island or anchorage-loop)");
}

}  // namespace radarpr
