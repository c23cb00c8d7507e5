#include "radarpr/pipeline.hpp"

#include <chrono>
#include <stdexcept>

namespace radarpr {

FrameAnalysis analyze_frame(const RadarFrame& frame, const RunConfig& cfg) {
  FrameAnalysis out;
  const BinaryImage bin = binarize(frame, cfg.binarize_threshold);
  out.labels = label_components(bin, cfg.min_cluster_area);
  const auto clusters = extract_clusters(out.labels);
  out.ellipses.reserve(clusters.size());
  for (const auto& cluster : clusters) {
    out.ellipses.push_back(fit_ellipse(cluster));
  }
  out.polar = to_polar(out.ellipses, image_center_x(frame.width),
                       image_center_y(frame.height), cfg.samples_per_ellipse);
  out.descriptor =
      make_descriptor(out.polar, cfg.resolved_max_range(frame.width, frame.height),
                      cfg.descriptor_size, out.labels.cluster_count);
  out.descriptor.frame_id = frame.frame_id;
  return out;
}

EssDescriptor describe_frame(const RadarFrame& frame, const RunConfig& cfg) {
  return analyze_frame(frame, cfg).descriptor;
}

IndexResult index_session(const Session& session, const RunConfig& cfg) {
  if (cfg.frame_stride < 1) {
    throw std::invalid_argument("frame_stride must be >= 1");
  }
  IndexResult out;
  int width = -1, height = -1;
  for (std::size_t i = 0; i < session.frames.size();
       i += static_cast<std::size_t>(cfg.frame_stride)) {
    RadarFrame frame = load_session_frame(session, i);
    if (width < 0) {
      width = frame.width;
      height = frame.height;
    } else if (frame.width != width || frame.height != height) {
      throw std::runtime_error(
          "inconsistent frame dimensions in session " + session.session_id +
          " at frame " + std::to_string(frame.frame_id));
    }
    const auto t0 = std::chrono::steady_clock::now();
    EssDescriptor d = describe_frame(frame, cfg);
    const auto t1 = std::chrono::steady_clock::now();
    out.describe_ms_total +=
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    d.session_id = session.session_id;
    out.descriptors.push_back(std::move(d));
  }
  return out;
}

}  // namespace radarpr
