#include "perc/cluster.hpp"

#include <stdexcept>

namespace perc {

ClusterLabels label(const Configuration& cfg, const Rect& region) {
  if (!cfg.region().contains(region))
    throw std::invalid_argument("label: region not contained in configuration region");
  return detail::label_impl(region, [&](const Point& z) { return cfg.open_unchecked(z); });
}

int clusters_touching(const ClusterLabels& labels, std::span<const Point> A,
                      std::span<const Point> B) {
  std::vector<std::uint8_t> inA(static_cast<std::size_t>(labels.cluster_count), 0);
  std::vector<std::uint8_t> inB(static_cast<std::size_t>(labels.cluster_count), 0);
  for (const Point& z : A) {
    if (!labels.region().contains(z))
      throw std::invalid_argument("clusters_touching: A site outside labeled region");
    std::int32_t l = labels.at(z);
    if (l >= 0) inA[static_cast<std::size_t>(l)] = 1;
  }
  for (const Point& z : B) {
    if (!labels.region().contains(z))
      throw std::invalid_argument("clusters_touching: B site outside labeled region");
    std::int32_t l = labels.at(z);
    if (l >= 0) inB[static_cast<std::size_t>(l)] = 1;
  }
  int count = 0;
  for (std::int32_t l = 0; l < labels.cluster_count; ++l)
    if (inA[static_cast<std::size_t>(l)] && inB[static_cast<std::size_t>(l)]) ++count;
  return count;
}

namespace {

template <class InRegionFn>
bool connected_impl(const Configuration& cfg, std::span<const Point> U, std::span<const Point> V,
                    const Rect& window, InRegionFn&& in_region) {
  detail::Flood flood(window);
  const RectIndexer& idx = flood.indexer();
  std::vector<std::uint8_t> target(idx.size, 0);
  for (const Point& z : V) {
    if (!window.contains(z) || !in_region(z))
      throw std::invalid_argument("connected: V site outside W");
    target[idx.index(z)] = 1;
  }
  for (const Point& z : U)
    if (!window.contains(z) || !in_region(z))
      throw std::invalid_argument("connected: U site outside W");
  auto open = [&](const Point& z) { return in_region(z) && cfg.open_unchecked(z); };
  auto is_target = [&](const Point& z) { return target[idx.index(z)] != 0; };
  return flood.reaches(open, U, is_target);
}

}  // namespace

bool connected(const Configuration& cfg, std::span<const Point> U, std::span<const Point> V,
               const Rect& W) {
  if (!cfg.region().contains(W))
    throw std::invalid_argument("connected: W not contained in configuration region");
  return connected_impl(cfg, U, V, W, [](const Point&) { return true; });
}

bool connected(const Configuration& cfg, std::span<const Point> U, std::span<const Point> V,
               const RegionUnion& W) {
  for (const Rect& r : W.parts)
    if (!cfg.region().contains(r))
      throw std::invalid_argument("connected: W part not contained in configuration region");
  return connected_impl(cfg, U, V, W.bounding_rect(), [&](const Point& z) { return W.contains(z); });
}

}  // namespace perc
