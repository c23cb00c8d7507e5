#include "radarpr/ccl.hpp"

#include <algorithm>

#include "radarpr/frame_io.hpp"

namespace radarpr {

std::int32_t EquivalenceSet::make_set() {
  const std::int32_t label = static_cast<std::int32_t>(parent_.size());
  parent_.push_back(label);
  rank_.push_back(0);
  return label;
}

std::int32_t EquivalenceSet::find(std::int32_t label) {
  std::int32_t root = label;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[label] != root) {  // path compression
    std::int32_t next = parent_[label];
    parent_[label] = root;
    label = next;
  }
  return root;
}

void EquivalenceSet::unite(std::int32_t a, std::int32_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
}

LabelMap label_components(const BinaryImage& mask, int min_area) {
  const int w = mask.width;
  const int h = mask.height;
  LabelMap out;
  out.width = w;
  out.height = h;
  out.labels.assign(static_cast<std::size_t>(w) * h, 0);
  if (w == 0 || h == 0) return out;

  // Phase 1: provisional labels via the half-neighborhood, recording
  // equivalence pairs on conflicts. Provisional label 0 is reserved for
  // background, so the disjoint set gets a dummy entry first.
  EquivalenceSet eq;
  eq.make_set();
  std::vector<std::int32_t> prov(static_cast<std::size_t>(w) * h, 0);

  auto prov_at = [&](int x, int y) -> std::int32_t {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0;  // outside = background
    return prov[static_cast<std::size_t>(y) * w + x];
  };

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      const std::int32_t neighbors[4] = {
          prov_at(x - 1, y - 1), prov_at(x, y - 1), prov_at(x + 1, y - 1),
          prov_at(x - 1, y)};
      std::int32_t assigned = 0;
      for (std::int32_t n : neighbors) {
        if (n == 0) continue;
        if (assigned == 0) {
          assigned = n;
        } else if (n != assigned) {
          eq.unite(assigned, n);
        }
      }
      if (assigned == 0) assigned = eq.make_set();
      prov[static_cast<std::size_t>(y) * w + x] = assigned;
    }
  }

  // Phase 2: resolve equivalences and renumber densely in order of first
  // appearance in the row-major scan.
  std::vector<std::int32_t> final_of_root(eq.size(), 0);
  std::int32_t next_label = 0;
  for (std::size_t i = 0; i < prov.size(); ++i) {
    if (prov[i] == 0) continue;
    const std::int32_t root = eq.find(prov[i]);
    if (final_of_root[root] == 0) final_of_root[root] = ++next_label;
    out.labels[i] = final_of_root[root];
  }
  out.cluster_count = next_label;

  if (min_area > 1 && next_label > 0) {
    std::vector<std::int64_t> area(static_cast<std::size_t>(next_label) + 1, 0);
    for (std::int32_t l : out.labels) ++area[l];
    std::vector<std::int32_t> remap(static_cast<std::size_t>(next_label) + 1, 0);
    std::int32_t kept = 0;
    for (std::int32_t l = 1; l <= next_label; ++l)
      if (area[l] >= min_area) remap[l] = ++kept;
    if (kept != next_label) {
      for (std::int32_t& l : out.labels) l = remap[l];
      out.cluster_count = kept;
    }
  }
  return out;
}

std::vector<std::vector<PixelCoord>> extract_clusters(const LabelMap& map) {
  std::vector<std::vector<PixelCoord>> clusters(
      static_cast<std::size_t>(map.cluster_count));
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      const std::int32_t l = map.at(x, y);
      if (l > 0) clusters[static_cast<std::size_t>(l) - 1].push_back({x, y});
    }
  }
  return clusters;
}

void write_label_map_pgm(const std::filesystem::path& path,
                         const LabelMap& map) {
  GrayImage img;
  img.width = map.width;
  img.height = map.height;
  img.bit_depth = 16;
  img.pixels.resize(map.labels.size());
  for (std::size_t i = 0; i < map.labels.size(); ++i)
    img.pixels[i] = static_cast<std::uint16_t>(
        std::min<std::int32_t>(map.labels[i], 65535));
  write_gray_image(path, img);
}

}  // namespace radarpr
