#pragma once

#include <vector>

#include "radarpr/ccl.hpp"
#include "radarpr/config.hpp"
#include "radarpr/descriptor.hpp"
#include "radarpr/ellipse.hpp"
#include "radarpr/frame_io.hpp"
#include "radarpr/types.hpp"

namespace radarpr {

struct FrameAnalysis {
  LabelMap labels;
  std::vector<Ellipse> ellipses;
  PolarPointSet polar;
  EssDescriptor descriptor;
};

/// Full single-frame pipeline: binarize, label the connected regions, fit
/// one ellipse per region, sample the outlines into polar form about the
/// image center, and histogram the ranges.
EssDescriptor describe_frame(const RadarFrame& frame, const RunConfig& cfg);

/// Same pipeline, keeping the intermediate products.
FrameAnalysis analyze_frame(const RadarFrame& frame, const RunConfig& cfg);

struct IndexResult {
  std::vector<EssDescriptor> descriptors;
  double describe_ms_total = 0.0;  // pipeline time, excluding image IO
};

/// Describes every frame_stride-th frame of the session, tagging
/// descriptors with the session id and frame ids. Throws when frame
/// dimensions are inconsistent across the session.
IndexResult index_session(const Session& session, const RunConfig& cfg);

}  // namespace radarpr
