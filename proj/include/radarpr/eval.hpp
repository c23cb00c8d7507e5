#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "radarpr/retrieval.hpp"
#include "radarpr/types.hpp"

namespace radarpr {

enum class EvalMode { kIntra, kInter };

struct EvalConfig {
  double revisit_distance = 100.0;
  int frame_stride = 5;
  std::vector<double> threshold_grid;  // empty selects the default grid
  EvalMode mode = EvalMode::kIntra;
  // Intra mode only: ground-truth positives must be more than this many
  // frame ids away from the query. Negative disables.
  std::int64_t exclusion_window = 50;
};

/// Evenly spaced thresholds over [0, 1], endpoints included.
std::vector<double> default_threshold_grid(int points = 200);

struct FrameRef {
  std::string session_id;
  std::int64_t frame_id = 0;
  std::optional<Pose> pose;
};

/// Parallel to the query list it was built from. `valid[i]` is false when
/// the query had no pose; such queries drop out of every metric.
struct GroundTruth {
  std::vector<std::set<std::pair<std::string, std::int64_t>>> positives;
  std::vector<bool> has_positive;
  std::vector<bool> valid;

  std::size_t size() const { return positives.size(); }
};

/// Positives are database frames within `revisit_distance` of the query
/// pose. Intra mode additionally requires the frame-id gap to exceed
/// exclusion_window within the query's session. Frames without poses are
/// skipped with a warning on stderr.
GroundTruth build_ground_truth(const std::vector<FrameRef>& queries,
                               const std::vector<FrameRef>& db,
                               const EvalConfig& cfg);

/// Number of valid queries with no reachable positive (the TN capacity of
/// the sweep). ROC is uninformative when this is near zero.
std::size_t tn_capacity(const GroundTruth& gt);

/// Top-1 retrieval outcome for one query, before thresholding.
struct MatchRecord {
  std::optional<std::pair<std::string, std::int64_t>> candidate;
  double distance = std::numeric_limits<double>::infinity();
};

struct CurvePoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
};

/// Classifies each query's top-1 decision at every threshold in `grid`:
/// a query matches when its candidate distance is at or below the
/// threshold. TP = match on a positive; FP = match on a non-positive
/// (even when a positive existed); FN = abstain with a positive
/// available; TN = abstain with none. Throws on an empty grid or a
/// match/gt length mismatch.
std::vector<CurvePoint> sweep(const std::vector<MatchRecord>& matches,
                              const GroundTruth& gt,
                              const std::vector<double>& grid);

enum class CurveAxis { kPr, kRoc };

/// Trapezoidal area under the curve: precision over recall (kPr) or TPR
/// over FPR (kRoc). Points are sorted by x and extended to x = 0 and
/// x = 1 by constant extrapolation. Throws on fewer than 2 points.
double auc(const std::vector<CurvePoint>& points, CurveAxis axis);

/// Fraction of valid queries with a positive available whose top-1
/// candidate is one of them; no threshold applied. Throws when no query
/// has a positive.
double recall_at_1(const std::vector<MatchRecord>& matches,
                   const GroundTruth& gt);

/// Per-range-ring occupancy ratio of the binarized frame, D rings over
/// [0, max_range) pixels about the image center. `max_range` ≤ 0 selects
/// half the image diagonal. Rings with no pixels read 0.
std::vector<double> ringkey_descriptor(const RadarFrame& frame, int D,
                                       double max_range = 0.0,
                                       int binarize_threshold = 0);

struct QueryOutcome {
  MatchRecord match;
  std::size_t candidates_examined = 0;
  double query_ms = 0.0;
};

/// Runs every query against `db` with per-query wall timing.
/// `exclusions` is either empty or parallel to `queries`.
std::vector<QueryOutcome> run_queries(
    const DescriptorDb& db, const std::vector<EssDescriptor>& queries, int p,
    double verify_threshold,
    const std::vector<std::optional<ExclusionWindow>>& exclusions = {});

void write_curve_csv(const std::filesystem::path& path,
                     const std::vector<CurvePoint>& points);

struct SummaryRow {
  std::string method;
  std::string sequence;
  double pr_auc = 0.0;
  double f1_max = 0.0;
  double roc_auc = 0.0;
  double recall_at_1 = 0.0;
  double mean_query_ms = 0.0;
};

void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<SummaryRow>& rows);

}  // namespace radarpr
