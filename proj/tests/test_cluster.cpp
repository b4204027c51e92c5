#include <algorithm>
#include <deque>
#include <map>
#include <vector>

#include "doctest.h"
#include "perc/cluster.hpp"
#include "perc/rng.hpp"

using namespace perc;

namespace {

// Independent breadth-first labeling used as the partition oracle.
std::vector<std::int32_t> bfs_label(const Configuration& cfg, const Rect& region) {
  RectIndexer idx(region);
  std::vector<std::int32_t> lab(idx.size, -1);
  std::int32_t next = 0;
  for (const Point& start : region.sites()) {
    std::uint64_t i0 = idx.index(start);
    if (lab[i0] >= 0 || !cfg.open_unchecked(start)) continue;
    std::deque<Point> q{start};
    lab[i0] = next;
    while (!q.empty()) {
      Point z = q.front();
      q.pop_front();
      for (const Point& nb : neighbours(z)) {
        if (!region.contains(nb)) continue;
        std::uint64_t i = idx.index(nb);
        if (lab[i] >= 0 || !cfg.open_unchecked(nb)) continue;
        lab[i] = next;
        q.push_back(nb);
      }
    }
    ++next;
  }
  return lab;
}

// Two labelings describe the same partition iff the label-pair relation is a
// bijection (compared site-wise).
bool same_partition(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
  if (a.size() != b.size()) return false;
  std::map<std::int32_t, std::int32_t> fwd, bwd;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] < 0) != (b[i] < 0)) return false;
    if (a[i] < 0) continue;
    auto [it1, in1] = fwd.emplace(a[i], b[i]);
    if (!in1 && it1->second != b[i]) return false;
    auto [it2, in2] = bwd.emplace(b[i], a[i]);
    if (!in2 && it2->second != a[i]) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE_BEGIN("cluster");

TEST_CASE("all-open region is one cluster") {
  Rect r = Rect::cube(2, 0, 2);
  auto cfg = Configuration::sample(r, 1.0, 1, 0);
  CHECK(label(cfg, r).cluster_count == 1);
}

TEST_CASE("all-closed region has no clusters") {
  Rect r = Rect::cube(2, 0, 2);
  auto cfg = Configuration::sample(r, 0.0, 1, 0);
  CHECK(label(cfg, r).cluster_count == 0);
}

TEST_CASE("checkerboard in d=2 gives only singleton clusters") {
  Rect r = Rect::cube(2, -3, 3);
  std::vector<Point> open;
  for (const Point& z : r.sites())
    if ((z[0] + z[1]) % 2 == 0) open.push_back(z);
  auto cfg = Configuration::from_open_sites(r, open);
  auto ls = label(cfg, r);
  CHECK(ls.cluster_count == static_cast<std::int32_t>(open.size()));
}

TEST_CASE("union-find labeling matches an independent BFS labeling") {
  // 1000 random 7^d configurations per dimension
  for (int d : {2, 3}) {
    Rect r = Rect::cube(d, -3, 3);
    for (std::uint64_t t = 0; t < 1000; ++t) {
      double p = 0.1 + 0.8 * (static_cast<double>(t % 9) / 8.0);
      auto cfg = Configuration::sample(r, p, 1000 + static_cast<std::uint64_t>(d), t);
      auto ours = label(cfg, r);
      auto oracle = bfs_label(cfg, r);
      REQUIRE(same_partition(ours.label, oracle));
    }
  }
}

TEST_CASE("connected basics") {
  Rect r = Rect::cube(2, 0, 1);  // 2x2
  auto all_open = Configuration::sample(r, 1.0, 1, 0);
  std::vector<Point> bottom = {{0, 0}, {1, 0}};
  std::vector<Point> top = {{0, 1}, {1, 1}};
  CHECK(connected(all_open, bottom, top, r));

  auto all_closed = Configuration::sample(r, 0.0, 1, 0);
  CHECK_FALSE(connected(all_closed, bottom, top, r));

  // single open site in U and V: the zero-length path counts
  std::vector<Point> z = {{0, 0}};
  auto one = Configuration::from_open_sites(r, z);
  CHECK(connected(one, z, z, r));
}

TEST_CASE("clusters_touching examples") {
  Rect r = Rect::cube(2, -2, 2);
  Box b = Box::centered(2, 2);
  auto nb0 = axis_neighbours(2);
  auto shell = b.boundary_sites();

  auto all_open = Configuration::sample(r, 1.0, 1, 0);
  CHECK(clusters_touching(label(all_open, r), nb0, shell) == 1);

  auto all_closed = Configuration::sample(r, 0.0, 1, 0);
  CHECK(clusters_touching(label(all_closed, r), nb0, shell) == 0);

  // two disjoint straight arms through (+-1,0), closed origin
  std::vector<Point> arms = {{1, 0}, {2, 0}, {-1, 0}, {-2, 0}};
  auto cfg = Configuration::from_open_sites(r, arms);
  CHECK(clusters_touching(label(cfg, r), nb0, shell) == 2);
}

TEST_CASE("connected iff clusters_touching >= 1") {
  Rect r = Rect::cube(2, -3, 3);
  Box inner = Box::centered(2, 1);
  Box outer = Box::centered(2, 3);
  auto a = inner.sites();
  auto b = outer.boundary_sites();
  for (std::uint64_t t = 0; t < 300; ++t) {
    double p = 0.2 + 0.6 * static_cast<double>(t % 7) / 6.0;
    auto cfg = Configuration::sample(r, p, 31, t);
    bool via_flood = connected(cfg, a, b, r);
    bool via_labels = clusters_touching(label(cfg, r), a, b) >= 1;
    CHECK(via_flood == via_labels);
  }
}

TEST_CASE("connectivity is monotone under region growth") {
  Rect small = Rect::cube(2, -2, 2);
  Rect big = Rect::cube(2, -4, 4);
  std::vector<Point> u = {{-2, 0}};
  std::vector<Point> v = {{2, 0}};
  for (std::uint64_t t = 0; t < 300; ++t) {
    auto cfg = Configuration::sample(big, 0.55, 47, t);
    if (connected(cfg, u, v, small)) CHECK(connected(cfg, u, v, big));
  }
}

TEST_CASE("connected over a region union sees paths through either part") {
  // two horizontal strips joined at x = 3
  Rect left({0, 0}, {3, 0});
  Rect right({3, 0}, {6, 0});
  RegionUnion both({left, right});
  Rect bound({0, 0}, {6, 0});
  std::vector<Point> open;
  for (Coord x = 0; x <= 6; ++x) open.push_back(Point{x, 0});
  auto cfg = Configuration::from_open_sites(bound, open);
  std::vector<Point> u = {{0, 0}};
  std::vector<Point> v = {{6, 0}};
  CHECK(connected(cfg, u, v, both));
  CHECK_THROWS_AS(connected(cfg, u, v, left), std::invalid_argument);  // v outside W
}

TEST_CASE("label demands region inside the configuration") {
  auto cfg = Configuration::sample(Rect::cube(2, 0, 2), 0.5, 1, 0);
  CHECK_THROWS_AS(label(cfg, Rect::cube(2, 0, 3)), std::invalid_argument);
}

TEST_SUITE_END();
