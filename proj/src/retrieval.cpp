#include "radarpr/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace radarpr {

std::vector<double> l2_normalized(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  if (sq == 0.0) return {};
  const double inv = 1.0 / std::sqrt(sq);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * inv;
  return out;
}

DescriptorDb::DescriptorDb(int dimension)
    : dim_(dimension), build_mutex_(std::make_unique<std::mutex>()) {
  if (dimension < 1) {
    throw std::invalid_argument("descriptor dimension must be positive");
  }
}

void DescriptorDb::insert(EssDescriptor d) {
  if (static_cast<int>(d.v.size()) != dim_) {
    throw std::invalid_argument("descriptor dimension mismatch: expected " +
                                std::to_string(dim_) + ", got " +
                                std::to_string(d.v.size()));
  }
  auto key = std::make_pair(d.session_id, d.frame_id);
  if (!keys_.insert(key).second) {
    throw std::invalid_argument("duplicate descriptor for session '" +
                                d.session_id + "' frame " +
                                std::to_string(d.frame_id));
  }
  const std::size_t id = descriptors_.size();
  Bucket& b = buckets_[d.cluster_count];
  b.ids.push_back(id);
  b.built = false;
  descriptors_.push_back(std::move(d));
}

std::vector<std::size_t> DescriptorDb::candidate_filter(int query_count,
                                                        int p) const {
  std::vector<std::size_t> out;
  if (p < 0) return out;
  const long long lo = static_cast<long long>(query_count) - p;
  const long long hi = static_cast<long long>(query_count) + p;
  auto it = buckets_.begin();
  if (lo > std::numeric_limits<int>::min()) {
    it = buckets_.lower_bound(static_cast<int>(lo));
  }
  for (; it != buckets_.end() && it->first <= hi; ++it) {
    out.insert(out.end(), it->second.ids.begin(), it->second.ids.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

bool excluded(const EssDescriptor& d,
              const std::optional<ExclusionWindow>& excl) {
  if (!excl || excl->window < 0) return false;
  if (d.session_id != excl->session_id) return false;
  const std::int64_t delta = d.frame_id - excl->frame_id;
  return delta >= -excl->window && delta <= excl->window;
}

// Strict total order on candidates: frame_id first per the retrieval
// contract, session_id to disambiguate cross-session collisions.
bool key_less(const EssDescriptor& a, const EssDescriptor& b) {
  if (a.frame_id != b.frame_id) return a.frame_id < b.frame_id;
  return a.session_id < b.session_id;
}

}  // namespace

const DescriptorDb::Bucket& DescriptorDb::bucket_for_query(int count) const {
  Bucket& b = buckets_.at(count);
  std::lock_guard<std::mutex> lock(*build_mutex_);
  if (!b.built) {
    b.tree_ids.clear();
    std::vector<std::vector<double>> pts;
    for (std::size_t id : b.ids) {
      auto n = l2_normalized(descriptors_[id].v);
      if (n.empty()) continue;
      b.tree_ids.push_back(id);
      pts.push_back(std::move(n));
    }
    b.tree = KdTree(std::move(pts));
    b.built = true;
  }
  return b;
}

MatchResult DescriptorDb::query(
    const EssDescriptor& q, int p, double verify_threshold,
    const std::optional<ExclusionWindow>& exclusion) const {
  MatchResult res;
  if (p < 0) return res;
  const long long lo = static_cast<long long>(q.cluster_count) - p;
  const long long hi = static_cast<long long>(q.cluster_count) + p;

  auto begin = buckets_.begin();
  if (lo > std::numeric_limits<int>::min()) {
    begin = buckets_.lower_bound(static_cast<int>(lo));
  }
  for (auto it = begin; it != buckets_.end() && it->first <= hi; ++it) {
    const Bucket& b = it->second;
    for (std::size_t id : b.ids) {
      if (!excluded(descriptors_[id], exclusion)) {
        ++res.candidates_examined;
      }
    }
  }
  if (res.candidates_examined == 0) return res;

  const std::vector<double> qn = l2_normalized(q.v);
  if (qn.empty()) return res;

  std::size_t best_id = 0;
  double best_sq = 0.0;
  bool found = false;
  for (auto it = begin; it != buckets_.end() && it->first <= hi; ++it) {
    const Bucket& b = bucket_for_query(it->first);
    if (b.tree.empty()) continue;
    auto hit = b.tree.nearest(
        qn,
        [&](std::size_t i) {
          const std::size_t id = b.tree_ids[i];
          return !excluded(descriptors_[id], exclusion);
        },
        [&](std::size_t a, std::size_t c) {
          return key_less(descriptors_[b.tree_ids[a]],
                          descriptors_[b.tree_ids[c]]);
        });
    if (!hit) continue;
    const std::size_t id = b.tree_ids[hit->first];
    if (!found || hit->second < best_sq ||
        (hit->second == best_sq &&
         key_less(descriptors_[id], descriptors_[best_id]))) {
      found = true;
      best_id = id;
      best_sq = hit->second;
    }
  }
  if (!found) return res;

  const EssDescriptor& best = descriptors_[best_id];
  res.candidate = std::make_pair(best.session_id, best.frame_id);
  res.distance = cosine_distance(q.v, best.v);
  res.matched = res.distance <= verify_threshold;
  return res;
}

void DescriptorDb::save(const std::filesystem::path& path,
                        const RunConfig& cfg) const {
  save_descriptors(path, descriptors_);
  std::ofstream out(sidecar_path(path));
  if (!out) {
    throw std::runtime_error("cannot write " + sidecar_path(path).string());
  }
  out << run_config_to_json(cfg).dump(2) << "\n";
}

std::pair<DescriptorDb, RunConfig> DescriptorDb::load(
    const std::filesystem::path& path) {
  RunConfig cfg = load_run_config(sidecar_path(path));
  DescriptorDb db(cfg.descriptor_size);
  for (auto& d : load_descriptors(path)) {
    db.insert(std::move(d));
  }
  return {std::move(db), cfg};
}

}  // namespace radarpr
