#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "perc/configuration.hpp"
#include "perc/geometry.hpp"

namespace perc {

// Connected-component labeling of the open sites of a region. Labels are
// contiguous ids in [0, cluster_count); closed sites carry -1. Only the
// partition is contractual, not the numeric label values.
struct ClusterLabels {
  RectIndexer indexer;
  std::vector<std::int32_t> label;
  std::int32_t cluster_count = 0;

  const Rect& region() const { return indexer.rect; }
  std::int32_t at(const Point& z) const { return label[indexer.index(z)]; }
};

namespace detail {

// Union-find labeling over `region` with an arbitrary openness functor.
template <class OpenFn>
ClusterLabels label_impl(const Rect& region, OpenFn&& open) {
  ClusterLabels out;
  out.indexer = RectIndexer(region);
  const std::uint64_t n = out.indexer.size;
  if (n > static_cast<std::uint64_t>(INT32_MAX))
    throw ResourceLimitError("label: region too large for dense labeling");
  const int d = region.dim;

  std::vector<std::int32_t> parent(n, -1);  // -1 = closed
  auto find = [&](std::int32_t i) {
    while (parent[static_cast<std::uint64_t>(i)] != i) {
      parent[static_cast<std::uint64_t>(i)] =
          parent[static_cast<std::uint64_t>(parent[static_cast<std::uint64_t>(i)])];
      i = parent[static_cast<std::uint64_t>(i)];
    }
    return i;
  };

  Point z = Point::zero(d);
  for (int i = 0; i < d; ++i) z.c[i] = region.lo[i];
  for (std::uint64_t k = 0; k < n; ++k) {
    if (open(z)) {
      auto ki = static_cast<std::int32_t>(k);
      parent[k] = ki;
      // union with already-visited neighbours (previous site along each axis)
      for (int a = 0; a < d; ++a) {
        if (z.c[a] == region.lo[a]) continue;
        std::uint64_t j = k - out.indexer.stride[static_cast<std::size_t>(a)];
        if (parent[j] < 0) continue;
        std::int32_t ra = find(ki);
        std::int32_t rb = find(static_cast<std::int32_t>(j));
        if (ra != rb) parent[static_cast<std::uint64_t>(rb)] = ra;
      }
    }
    for (int a = d - 1; a >= 0; --a) {
      if (z.c[a] < region.hi[a]) {
        ++z.c[a];
        break;
      }
      z.c[a] = region.lo[a];
    }
  }

  out.label.assign(n, -1);
  std::int32_t next = 0;
  for (std::uint64_t k = 0; k < n; ++k) {
    if (parent[k] < 0) continue;
    std::int32_t r = find(static_cast<std::int32_t>(k));
    auto ru = static_cast<std::uint64_t>(r);
    if (out.label[ru] < 0) out.label[ru] = next++;
    out.label[k] = out.label[ru];
  }
  out.cluster_count = next;
  return out;
}

// Breadth-first flood over a window. `open` decides site states (and any
// region-union membership), `target` is tested on every visited open site.
class Flood {
 public:
  explicit Flood(const Rect& window) : idx_(window) {
    if (idx_.size > static_cast<std::uint64_t>(INT32_MAX))
      throw ResourceLimitError("flood: window too large for a dense visited map");
    visited_.assign(idx_.size, 0);
    queue_.reserve(1024);
  }

  const RectIndexer& indexer() const { return idx_; }

  // True iff some open path from an open source reaches a target site.
  template <class OpenFn, class TargetFn>
  bool reaches(OpenFn&& open, std::span<const Point> sources, TargetFn&& target) {
    for (const Point& s : sources) {
      if (!idx_.rect.contains(s)) continue;
      std::uint64_t i = idx_.index(s);
      if (visited_[i] || !open(s)) continue;
      if (flood_from(s, open, target)) return true;
    }
    return false;
  }

  // Number of distinct open clusters that contain an open source site and
  // meet the target predicate; stops early at `cap`.
  template <class OpenFn, class TargetFn>
  int count_source_clusters_meeting(OpenFn&& open, std::span<const Point> sources,
                                    TargetFn&& target, int cap) {
    int hits = 0;
    for (const Point& s : sources) {
      if (!idx_.rect.contains(s)) continue;
      std::uint64_t i = idx_.index(s);
      if (visited_[i] || !open(s)) continue;
      if (flood_from(s, open, target)) {
        if (++hits >= cap) return hits;
      }
    }
    return hits;
  }

 private:
  // Floods the whole cluster of `start`; returns whether target was met.
  template <class OpenFn, class TargetFn>
  bool flood_from(const Point& start, OpenFn&& open, TargetFn&& target) {
    bool hit = false;
    queue_.clear();
    visited_[idx_.index(start)] = 1;
    queue_.push_back(start);
    if (target(start)) hit = true;
    std::size_t head = 0;
    const Rect& w = idx_.rect;
    while (head < queue_.size()) {
      Point z = queue_[head++];
      for (int a = 0; a < w.dim; ++a) {
        for (int s = -1; s <= 1; s += 2) {
          Point nb = z;
          nb.c[a] += s;
          if (nb.c[a] < w.lo[a] || nb.c[a] > w.hi[a]) continue;
          std::uint64_t i = idx_.index(nb);
          if (visited_[i]) continue;
          visited_[i] = 1;
          if (!open(nb)) continue;
          if (target(nb)) hit = true;
          queue_.push_back(nb);
        }
      }
    }
    return hit;
  }

  RectIndexer idx_;
  std::vector<std::uint8_t> visited_;
  std::vector<Point> queue_;
};

}  // namespace detail

ClusterLabels label(const Configuration& cfg, const Rect& region);

// Number of distinct clusters holding an open site of A and an open site of B.
int clusters_touching(const ClusterLabels& labels, std::span<const Point> A,
                      std::span<const Point> B);

// Open path from an open site of U to an open site of V, every site in W.
// A single open site in both U and V counts (length-0 paths allowed).
bool connected(const Configuration& cfg, std::span<const Point> U, std::span<const Point> V,
               const Rect& W);
bool connected(const Configuration& cfg, std::span<const Point> U, std::span<const Point> V,
               const RegionUnion& W);

}  // namespace perc
