#include "radarpr/descriptor.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace radarpr {

PolarPointSet to_polar(std::span<const Ellipse> ellipses, double cx0,
                       double cy0, int samples_per_ellipse) {
  PolarPointSet points;
  for (const Ellipse& e : ellipses) {
    if (e.a == 0.0 && e.b == 0.0) {
      // all samples coincide at the center point
      const double dx = e.cx - cx0;
      const double dy = e.cy - cy0;
      const double r = std::hypot(dx, dy);
      points.push_back({r, r == 0.0 ? 0.0 : std::atan2(dy, dx)});
      continue;
    }
    const int s = effective_samples(e, samples_per_ellipse);
    for (int k = 0; k < s; ++k) {
      const double t = 2.0 * M_PI * k / s;
      double x, y;
      ellipse_point(e, t, x, y);
      const double dx = x - cx0;
      const double dy = y - cy0;
      const double r = std::hypot(dx, dy);
      points.push_back({r, r == 0.0 ? 0.0 : std::atan2(dy, dx)});
    }
  }
  return points;
}

EssDescriptor make_descriptor(const PolarPointSet& points, double max_range,
                              int D, int cluster_count) {
  if (D < 1) throw std::invalid_argument("make_descriptor: D must be >= 1");
  if (!(max_range > 0.0))
    throw std::invalid_argument("make_descriptor: max_range must be > 0");

  EssDescriptor d;
  d.v.assign(static_cast<std::size_t>(D), 0.0);
  d.cluster_count = cluster_count;
  const double bin_width = max_range / D;
  for (const PolarPoint& p : points) {
    if (p.r >= max_range) continue;
    auto k = static_cast<std::size_t>(p.r / bin_width);
    if (k >= d.v.size()) k = d.v.size() - 1;  // guard r/binwidth rounding up
    d.v[k] += 1.0;
  }
  return d;
}

double cosine_distance(std::span<const double> u, std::span<const double> w) {
  if (u.size() != w.size())
    throw std::invalid_argument("cosine_distance: length mismatch");
  double dot = 0.0, nu = 0.0, nw = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * w[i];
    nu += u[i] * u[i];
    nw += w[i] * w[i];
  }
  if (nu == 0.0 || nw == 0.0)
    throw std::invalid_argument("cosine_distance: zero vector");
  double dist = 1.0 - dot / (std::sqrt(nu) * std::sqrt(nw));
  if (dist < 0.0) dist = 0.0;
  if (dist > 1.0) dist = 1.0;
  return dist;
}

double cosine_distance(const EssDescriptor& u, const EssDescriptor& w) {
  return cosine_distance(std::span<const double>(u.v),
                         std::span<const double>(w.v));
}

std::string descriptor_to_json_line(const EssDescriptor& d) {
  nlohmann::ordered_json j;
  j["session_id"] = d.session_id;
  j["frame_id"] = d.frame_id;
  j["cluster_count"] = d.cluster_count;
  j["v"] = d.v;
  return j.dump();
}

EssDescriptor descriptor_from_json_line(const std::string& line) {
  const nlohmann::json j = nlohmann::json::parse(line);
  EssDescriptor d;
  d.session_id = j.at("session_id").get<std::string>();
  d.frame_id = j.at("frame_id").get<std::int64_t>();
  d.cluster_count = j.at("cluster_count").get<int>();
  d.v = j.at("v").get<std::vector<double>>();
  return d;
}

void save_descriptors(const std::filesystem::path& path,
                      std::span<const EssDescriptor> descriptors) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write descriptor file: " + path.string());
  for (const EssDescriptor& d : descriptors)
    out << descriptor_to_json_line(d) << "\n";
}

std::vector<EssDescriptor> load_descriptors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open descriptor file: " + path.string());
  std::vector<EssDescriptor> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(descriptor_from_json_line(line));
  }
  return out;
}

}  // namespace radarpr
