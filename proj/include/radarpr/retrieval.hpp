#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "radarpr/config.hpp"
#include "radarpr/descriptor.hpp"
#include "radarpr/kd_tree.hpp"

namespace radarpr {

/// `candidate` holds the nearest neighbor whenever one exists, even if it
/// failed verification; `matched` implies it is present and `distance` is
/// at or below the verification threshold.
struct MatchResult {
  bool matched = false;
  std::optional<std::pair<std::string, std::int64_t>> candidate;  // session, frame
  double distance = std::numeric_limits<double>::infinity();
  std::size_t candidates_examined = 0;
};

/// Unit-norm copy of `v`, or an empty vector when ‖v‖ = 0.
std::vector<double> l2_normalized(std::span<const double> v);

/// Excludes stored descriptors of `session_id` whose frame id is within
/// `window` of `frame_id` (both directions). Frame-id units make the
/// excluded span independent of the indexing stride. A negative window
/// disables exclusion.
struct ExclusionWindow {
  std::string session_id;
  std::int64_t frame_id = 0;
  std::int64_t window = -1;
};

/// Ordered descriptor store with the two-stage search: an integer
/// cluster-count prefilter over bucketed indices, then exact nearest
/// neighbor among the surviving candidates, then cosine verification.
///
/// Nearest neighbor runs on a KD-tree per cluster-count bucket over
/// L2-normalized vectors (Euclidean order on unit vectors matches cosine
/// order), built lazily on the first query after an insert. Single writer,
/// multiple readers: inserts must not run concurrently with anything else;
/// concurrent queries are safe (lazy tree builds are mutex-guarded).
class DescriptorDb {
 public:
  explicit DescriptorDb(int dimension);

  /// Appends a descriptor. Throws on dimension mismatch or a duplicate
  /// (session_id, frame_id).
  void insert(EssDescriptor d);

  std::size_t size() const { return descriptors_.size(); }
  const EssDescriptor& at(std::size_t i) const { return descriptors_.at(i); }
  int dimension() const { return dim_; }

  /// Indices whose cluster count is within `p` of `query_count`, ascending.
  /// Collected by bucket scan; no descriptor vectors are touched.
  std::vector<std::size_t> candidate_filter(int query_count, int p) const;

  /// Two-stage search. `candidates_examined` is the candidate set size
  /// after the count filter and exclusion window. Ties in distance resolve
  /// toward the lowest frame_id (then session_id). Descriptors with
  /// zero-norm vectors (and zero-norm queries) never match.
  MatchResult query(const EssDescriptor& q, int p, double verify_threshold,
                    const std::optional<ExclusionWindow>& exclusion =
                        std::nullopt) const;

  // Persistence: JSON-lines descriptors plus a sidecar config record
  // (<path>.config.json) so a reloaded database is query-compatible.
  void save(const std::filesystem::path& path, const RunConfig& cfg) const;
  static std::pair<DescriptorDb, RunConfig> load(
      const std::filesystem::path& path);

  static std::filesystem::path sidecar_path(const std::filesystem::path& path) {
    return std::filesystem::path(path.string() + ".config.json");
  }

 private:
  struct Bucket {
    std::vector<std::size_t> ids;  // insertion order
    bool built = false;
    std::vector<std::size_t> tree_ids;  // ids with nonzero vectors
    KdTree tree;                        // over normalized vectors
  };

  const Bucket& bucket_for_query(int count) const;

  int dim_;
  std::vector<EssDescriptor> descriptors_;
  std::set<std::pair<std::string, std::int64_t>> keys_;
  mutable std::map<int, Bucket> buckets_;
  mutable std::unique_ptr<std::mutex> build_mutex_;
};

}  // namespace radarpr
