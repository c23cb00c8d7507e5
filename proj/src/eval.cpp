#include "radarpr/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>

#include "radarpr/frame_io.hpp"

namespace radarpr {

std::vector<double> default_threshold_grid(int points) {
  if (points < 2) throw std::invalid_argument("threshold grid needs >= 2 points");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = static_cast<double>(i) / (points - 1);
  }
  return grid;
}

GroundTruth build_ground_truth(const std::vector<FrameRef>& queries,
                               const std::vector<FrameRef>& db,
                               const EvalConfig& cfg) {
  if (cfg.revisit_distance <= 0.0) {
    throw std::invalid_argument("revisit_distance must be positive");
  }
  const bool intra = cfg.mode == EvalMode::kIntra;
  GroundTruth gt;
  gt.positives.resize(queries.size());
  gt.has_positive.assign(queries.size(), false);
  gt.valid.assign(queries.size(), false);

  const double r2 = cfg.revisit_distance * cfg.revisit_distance;

  for (std::size_t j = 0; j < db.size(); ++j) {
    if (!db[j].pose) {
      std::cerr << "warning: db frame " << db[j].session_id << "/"
                << db[j].frame_id << " has no pose, excluded from ground truth\n";
    }
  }
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (!queries[i].pose) {
      std::cerr << "warning: query frame " << queries[i].session_id << "/"
                << queries[i].frame_id
                << " has no pose, excluded from evaluation\n";
      continue;
    }
    gt.valid[i] = true;
    for (std::size_t j = 0; j < db.size(); ++j) {
      if (!db[j].pose) continue;
      if (intra && queries[i].session_id == db[j].session_id) {
        if (queries[i].frame_id == db[j].frame_id) continue;
        if (cfg.exclusion_window >= 0 &&
            std::llabs(queries[i].frame_id - db[j].frame_id) <=
                cfg.exclusion_window) {
          continue;
        }
      }
      const double dx = queries[i].pose->x - db[j].pose->x;
      const double dy = queries[i].pose->y - db[j].pose->y;
      if (dx * dx + dy * dy <= r2) {
        gt.positives[i].emplace(db[j].session_id, db[j].frame_id);
      }
    }
    gt.has_positive[i] = !gt.positives[i].empty();
  }
  return gt;
}

std::size_t tn_capacity(const GroundTruth& gt) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt.valid[i] && !gt.has_positive[i]) ++n;
  }
  return n;
}

std::vector<CurvePoint> sweep(const std::vector<MatchRecord>& matches,
                              const GroundTruth& gt,
                              const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("empty threshold grid");
  if (matches.size() != gt.size()) {
    throw std::invalid_argument("match list and ground truth sizes differ");
  }
  std::vector<CurvePoint> out;
  out.reserve(grid.size());
  for (double t : grid) {
    std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < matches.size(); ++i) {
      if (!gt.valid[i]) continue;
      const MatchRecord& m = matches[i];
      const bool matched = m.candidate.has_value() && m.distance <= t;
      if (matched) {
        if (gt.positives[i].count(*m.candidate)) {
          ++tp;
        } else {
          ++fp;
        }
      } else {
        if (gt.has_positive[i]) {
          ++fn;
        } else {
          ++tn;
        }
      }
    }
    CurvePoint pt;
    pt.threshold = t;
    pt.precision = (tp + fp) ? static_cast<double>(tp) / (tp + fp) : 1.0;
    pt.recall = (tp + fn) ? static_cast<double>(tp) / (tp + fn) : 0.0;
    pt.f1 = (pt.precision + pt.recall > 0.0)
                ? 2.0 * pt.precision * pt.recall / (pt.precision + pt.recall)
                : 0.0;
    pt.tpr = pt.recall;
    pt.fpr = (tn + fp) ? static_cast<double>(fp) / (tn + fp) : 0.0;
    out.push_back(pt);
  }
  return out;
}

double auc(const std::vector<CurvePoint>& points, CurveAxis axis) {
  if (points.size() < 2) throw std::invalid_argument("auc needs >= 2 points");
  std::vector<std::pair<double, double>> xy;
  xy.reserve(points.size() + 2);
  for (const CurvePoint& p : points) {
    if (axis == CurveAxis::kPr) {
      xy.emplace_back(p.recall, p.precision);
    } else {
      xy.emplace_back(p.fpr, p.tpr);
    }
  }
  std::stable_sort(xy.begin(), xy.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  if (xy.front().first > 0.0) {
    xy.insert(xy.begin(), {0.0, xy.front().second});
  }
  if (xy.back().first < 1.0) {
    xy.emplace_back(1.0, xy.back().second);
  }
  double area = 0.0;
  for (std::size_t i = 1; i < xy.size(); ++i) {
    area += (xy[i].first - xy[i - 1].first) *
            (xy[i].second + xy[i - 1].second) * 0.5;
  }
  return area;
}

double recall_at_1(const std::vector<MatchRecord>& matches,
                   const GroundTruth& gt) {
  if (matches.size() != gt.size()) {
    throw std::invalid_argument("match list and ground truth sizes differ");
  }
  std::int64_t hits = 0, total = 0;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    if (!gt.valid[i] || !gt.has_positive[i]) continue;
    ++total;
    if (matches[i].candidate && gt.positives[i].count(*matches[i].candidate)) {
      ++hits;
    }
  }
  if (total == 0) {
    throw std::invalid_argument("recall@1 undefined: no query has a positive");
  }
  return static_cast<double>(hits) / total;
}

std::vector<double> ringkey_descriptor(const RadarFrame& frame, int D,
                                       double max_range,
                                       int binarize_threshold) {
  if (D < 1) throw std::invalid_argument("ring count must be positive");
  if (max_range <= 0.0) {
    max_range = 0.5 * std::hypot(static_cast<double>(frame.width),
                                 static_cast<double>(frame.height));
  }
  const BinaryImage bin = binarize(frame, binarize_threshold);
  const double cx = image_center_x(frame.width);
  const double cy = image_center_y(frame.height);
  const double bin_width = max_range / D;
  std::vector<double> occupied(D, 0.0), total(D, 0.0);
  for (int y = 0; y < frame.height; ++y) {
    for (int x = 0; x < frame.width; ++x) {
      const double r = std::hypot(x - cx, y - cy);
      if (r >= max_range) continue;
      int k = static_cast<int>(r / bin_width);
      if (k >= D) k = D - 1;
      total[k] += 1.0;
      if (bin.at(x, y)) occupied[k] += 1.0;
    }
  }
  std::vector<double> v(D, 0.0);
  for (int k = 0; k < D; ++k) {
    if (total[k] > 0.0) v[k] = occupied[k] / total[k];
  }
  return v;
}

std::vector<QueryOutcome> run_queries(
    const DescriptorDb& db, const std::vector<EssDescriptor>& queries, int p,
    double verify_threshold,
    const std::vector<std::optional<ExclusionWindow>>& exclusions) {
  if (!exclusions.empty() && exclusions.size() != queries.size()) {
    throw std::invalid_argument("exclusion list must be empty or match queries");
  }
  std::vector<QueryOutcome> out;
  out.reserve(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const std::optional<ExclusionWindow> excl =
        exclusions.empty() ? std::optional<ExclusionWindow>() : exclusions[i];
    const auto t0 = std::chrono::steady_clock::now();
    const MatchResult r = db.query(queries[i], p, verify_threshold, excl);
    const auto t1 = std::chrono::steady_clock::now();
    QueryOutcome q;
    q.match.candidate = r.candidate;
    q.match.distance = r.distance;
    q.candidates_examined = r.candidates_examined;
    q.query_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    out.push_back(std::move(q));
  }
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

void write_curve_csv(const std::filesystem::path& path,
                     const std::vector<CurvePoint>& points) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "threshold,precision,recall,f1,tpr,fpr\n";
  for (const CurvePoint& p : points) {
    out << fmt(p.threshold) << "," << fmt(p.precision) << "," << fmt(p.recall)
        << "," << fmt(p.f1) << "," << fmt(p.tpr) << "," << fmt(p.fpr) << "\n";
  }
}

void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<SummaryRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "method,sequence,pr_auc,f1_max,roc_auc,recall_at_1,mean_query_ms\n";
  for (const SummaryRow& r : rows) {
    out << r.method << "," << r.sequence << "," << fmt(r.pr_auc) << ","
        << fmt(r.f1_max) << "," << fmt(r.roc_auc) << "," << fmt(r.recall_at_1)
        << "," << fmt(r.mean_query_ms) << "\n";
  }
}

}  // namespace radarpr
