#include "perc/renorm.hpp"

#include <stdexcept>
#include <string>

#include "perc/cluster.hpp"
#include "perc/events.hpp"

namespace perc {

namespace {

void require_params(Coord n, Coord M, const char* what) {
  if (n < 1 || M < 2) throw std::invalid_argument(std::string(what) + ": need n >= 1, M >= 2");
}

std::string gluing_params(const Point& a, const Point& b, Coord n, Coord M) {
  return "path " + to_string(a) + ".." + to_string(b) + ", n=" + std::to_string(n) +
         ", M=" + std::to_string(M);
}

}  // namespace

std::vector<Point> w_set(const Configuration& cfg, const Point& x, Coord n, Coord M) {
  require_params(n, M, "w_set");
  const Point nx = x.scaled(n);
  Box outer(nx, 16 * M * n);
  if (!cfg.region().contains(outer.rect()))
    throw std::invalid_argument("w_set: Lambda(nx;16Mn) not inside configuration region");
  Box inner(nx, n);

  // Flood each cluster met by Lambda(nx;n); keep the inner open sites of the
  // clusters that touch the boundary of the 16Mn-box.
  detail::Flood flood(outer.rect());
  auto open = [&](const Point& z) { return cfg.open_unchecked(z); };
  std::vector<Point> result;
  std::vector<Point> cluster_inner;
  std::vector<Point> queue;
  const Rect& w = outer.rect();
  const RectIndexer& idx = flood.indexer();
  std::vector<std::uint8_t> visited(idx.size, 0);
  for (const Point& s : inner.rect().sites()) {
    std::uint64_t i0 = idx.index(s);
    if (visited[i0]) continue;
    visited[i0] = 1;
    if (!open(s)) continue;
    cluster_inner.clear();
    cluster_inner.push_back(s);
    bool touches = outer.on_boundary(s);
    queue.clear();
    queue.push_back(s);
    std::size_t head = 0;
    while (head < queue.size()) {
      Point z = queue[head++];
      for (int a = 0; a < w.dim; ++a) {
        for (int sg = -1; sg <= 1; sg += 2) {
          Point nb = z;
          nb.c[a] += sg;
          if (nb.c[a] < w.lo[a] || nb.c[a] > w.hi[a]) continue;
          std::uint64_t i = idx.index(nb);
          if (visited[i]) continue;
          visited[i] = 1;
          if (!open(nb)) continue;
          if (outer.on_boundary(nb)) touches = true;
          if (inner.contains(nb)) cluster_inner.push_back(nb);
          queue.push_back(nb);
        }
      }
    }
    if (touches) result.insert(result.end(), cluster_inner.begin(), cluster_inner.end());
  }
  return result;
}

bool good(const Configuration& cfg, const Point& x, Coord n, Coord M) {
  require_params(n, M, "good");
  const Point nx = x.scaled(n);
  Box outer(nx, 16 * M * n);
  if (!cfg.region().contains(outer.rect()))
    throw std::invalid_argument("good: Lambda(nx;16Mn) not inside configuration region");
  // W(x) nonempty <=> Lambda(nx;n) reaches the boundary of the 16Mn-box.
  if (one_arm_at(cfg, nx, n, 16 * M * n) == false) return false;
  // Uniqueness of the annulus-crossing cluster: not A2 translated to nx.
  return crossing_cluster_count(cfg, nx, 4 * n, 4 * M * n, 2) <= 1;
}

GoodField good_field(const Configuration& cfg, Coord K, Coord n, Coord M) {
  require_params(n, M, "good_field");
  if (K < 0) throw std::invalid_argument("good_field: need K >= 0");
  GoodField f;
  f.d = cfg.dim();
  f.K = K;
  f.n = n;
  f.M = M;
  f.coarse = RectIndexer(Rect::cube(f.d, -K, K));
  f.is_good.assign(f.coarse.size, 0);
  std::uint64_t good_count = 0;
  for (std::uint64_t i = 0; i < f.coarse.size; ++i) {
    Point x = f.coarse.point(i);
    bool g = good(cfg, x, n, M);
    f.is_good[i] = g ? 1 : 0;
    good_count += g ? 1 : 0;
  }
  f.density = static_cast<double>(good_count) / static_cast<double>(f.coarse.size);
  return f;
}

Verdict good_path_gluing(const Configuration& cfg, std::span<const Point> path, Coord n,
                         Coord M) {
  require_params(n, M, "good_path_gluing");
  if (path.empty()) throw std::invalid_argument("good_path_gluing: empty path");
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    Point step = path[i + 1] - path[i];
    if (l1_norm(step) != 1 || chebyshev(step) != 1)
      throw std::invalid_argument("good_path_gluing: entries must be coarse nearest neighbours");
  }

  for (const Point& x : path)
    if (!good(cfg, x, n, M)) return Verdict::vacuous();

  std::vector<Rect> boxes;
  std::vector<Point> all_w;
  for (const Point& x : path) {
    boxes.push_back(Box(x.scaled(n), 16 * M * n).rect());
    std::vector<Point> w = w_set(cfg, x, n, M);
    if (w.empty())
      return Verdict::violation({cfg.seed(), cfg.trial(),
                                 gluing_params(path.front(), path.back(), n, M),
                                 "good site with empty W set at " + to_string(x)});
    all_w.insert(all_w.end(), w.begin(), w.end());
  }
  RegionUnion region(boxes);

  // All W sites must lie in one open cluster of the union region: every pair
  // (v in W(x_i), z in W(x_j)) is then connected there. One flood from an
  // anchor settles that.
  detail::Flood flood(region.bounding_rect());
  const RectIndexer& idx = flood.indexer();
  std::vector<std::uint8_t> in_cluster(idx.size, 0);
  auto open = [&](const Point& z) { return region.contains(z) && cfg.open_unchecked(z); };
  const Point anchor[1] = {all_w.front()};
  flood.reaches(open, anchor, [&](const Point& z) {
    in_cluster[idx.index(z)] = 1;
    return false;
  });
  for (const Point& z : all_w) {
    if (!in_cluster[idx.index(z)])
      return Verdict::violation({cfg.seed(), cfg.trial(),
                                 gluing_params(path.front(), path.back(), n, M),
                                 "W sites " + to_string(anchor[0]) + " and " + to_string(z) +
                                     " not connected in the box union"});
  }
  return Verdict::holds();
}

}  // namespace perc
