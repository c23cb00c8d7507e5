#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace radarpr {

/// Exact nearest-neighbor tree over fixed-dimension double vectors.
/// Splits cycle through dimensions with median partitioning; the search
/// prunes a subtree only when its axis distance strictly exceeds the best
/// squared distance, so equal-distance candidates are always reachable and
/// ties resolve through the caller's comparator regardless of traversal
/// order.
class KdTree {
 public:
  KdTree() = default;

  explicit KdTree(std::vector<std::vector<double>> points)
      : points_(std::move(points)) {
    if (points_.empty()) return;
    dim_ = points_[0].size();
    std::vector<std::size_t> idx(points_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    nodes_.reserve(points_.size());
    root_ = build(idx, 0, idx.size(), 0);
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  /// Returns (point index, squared Euclidean distance) of the nearest point
  /// for which accept(index) holds, or nullopt when none is accepted.
  /// tie_less(a, b) orders equal-distance candidates (must be a strict
  /// total order for deterministic results).
  template <class Accept, class TieLess>
  std::optional<std::pair<std::size_t, double>> nearest(
      std::span<const double> q, Accept&& accept, TieLess&& tie_less) const {
    if (root_ < 0) return std::nullopt;
    Best best;
    search(root_, q, accept, tie_less, best);
    if (!best.found) return std::nullopt;
    return std::make_pair(best.index, best.sqdist);
  }

  /// Nearest over all points, ties toward the lower index.
  std::optional<std::pair<std::size_t, double>> nearest(
      std::span<const double> q) const {
    return nearest(
        q, [](std::size_t) { return true; },
        [](std::size_t a, std::size_t b) { return a < b; });
  }

 private:
  struct Node {
    std::size_t point = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    int split_dim = 0;
  };

  struct Best {
    bool found = false;
    std::size_t index = 0;
    double sqdist = 0.0;
  };

  std::int32_t build(std::vector<std::size_t>& idx, std::size_t lo,
                     std::size_t hi, int depth) {
    if (lo >= hi) return -1;
    const int d = static_cast<int>(depth % dim_);
    const std::size_t mid = (lo + hi) / 2;
    std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi,
                     [&](std::size_t a, std::size_t b) {
                       return points_[a][d] < points_[b][d];
                     });
    Node node;
    node.point = idx[mid];
    node.split_dim = d;
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(node);
    nodes_[id].left = build(idx, lo, mid, depth + 1);
    nodes_[id].right = build(idx, mid + 1, hi, depth + 1);
    return id;
  }

  static double sqdist(std::span<const double> q,
                       std::span<const double> p) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double d = q[i] - p[i];
      s += d * d;
    }
    return s;
  }

  template <class Accept, class TieLess>
  void search(std::int32_t id, std::span<const double> q, Accept& accept,
              TieLess& tie_less, Best& best) const {
    const Node& node = nodes_[id];
    const std::vector<double>& p = points_[node.point];

    if (accept(node.point)) {
      const double d2 = sqdist(q, p);
      if (!best.found || d2 < best.sqdist ||
          (d2 == best.sqdist && tie_less(node.point, best.index))) {
        best.found = true;
        best.index = node.point;
        best.sqdist = d2;
      }
    }

    const double delta = q[node.split_dim] - p[node.split_dim];
    const std::int32_t near = delta < 0.0 ? node.left : node.right;
    const std::int32_t far = delta < 0.0 ? node.right : node.left;
    if (near >= 0) search(near, q, accept, tie_less, best);
    if (far >= 0 && (!best.found || delta * delta <= best.sqdist))
      search(far, q, accept, tie_less, best);
  }

  std::vector<std::vector<double>> points_;
  std::vector<Node> nodes_;
  std::size_t dim_ = 0;
  std::int32_t root_ = -1;
};

}  // namespace radarpr
