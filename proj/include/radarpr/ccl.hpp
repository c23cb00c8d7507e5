#pragma once

#include <filesystem>
#include <vector>

#include "radarpr/types.hpp"

namespace radarpr {

/// Final component labels for one frame. 0 is background; positive labels
/// are dense 1..cluster_count, assigned in order of first pixel appearance
/// in the row-major scan.
struct LabelMap {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> labels;  // row-major
  int cluster_count = 0;

  std::int32_t at(int x, int y) const {
    return labels[static_cast<std::size_t>(y) * width + x];
  }
};

/// Disjoint-set forest over provisional labels (the equivalence pairs of
/// the first labeling phase).
class EquivalenceSet {
 public:
  /// Creates a new singleton set and returns its label.
  std::int32_t make_set();
  std::int32_t find(std::int32_t label);
  void unite(std::int32_t a, std::int32_t b);
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> rank_;
};

/// Two-phase connected component labeling with 8-connectivity.
///
/// Phase 1 scans row-wise; each foreground pixel looks at the already-visited
/// half-neighborhood {(x-1,y-1),(x+1,y-1),(x,y-1),(x-1,y)}. No labeled
/// neighbor starts a new provisional label, one labeled neighbor is
/// inherited, and conflicting neighbors are recorded as equivalence pairs.
/// Phase 2 resolves the equivalences and renumbers to dense final labels.
///
/// Components smaller than `min_area` pixels are dropped (label 0); the
/// default of 1 keeps everything.
LabelMap label_components(const BinaryImage& mask, int min_area = 1);

/// Pixel sets per cluster; entry l-1 holds exactly the pixels labeled l,
/// each in row-major order.
std::vector<std::vector<PixelCoord>> extract_clusters(const LabelMap& map);

/// Debug dump of a label map as a 16-bit PGM.
void write_label_map_pgm(const std::filesystem::path& path, const LabelMap& map);

}  // namespace radarpr
