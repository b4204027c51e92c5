#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "perc/configuration.hpp"
#include "perc/geometry.hpp"
#include "perc/rng.hpp"

using namespace perc;

TEST_SUITE_BEGIN("lattice");

TEST_CASE("boundary of Lambda(1) in d=2 is the 8 sites at sup-norm 1") {
  Box b = Box::centered(2, 1);
  auto bd = b.boundary_sites();
  CHECK(bd.size() == 8);
  std::set<std::pair<Coord, Coord>> got;
  for (const Point& z : bd) got.insert({z[0], z[1]});
  std::set<std::pair<Coord, Coord>> want = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                            {0, 1},   {1, -1}, {1, 0}, {1, 1}};
  CHECK(got == want);
}

TEST_CASE("boundary of Lambda(0) is the centre itself") {
  Box b = Box::centered(3, 0);
  auto bd = b.boundary_sites();
  REQUIRE(bd.size() == 1);
  CHECK(bd[0] == Point::zero(3));
}

TEST_CASE("site counts") {
  CHECK(Box::centered(3, 2).site_count() == 125);
  CHECK(Box::centered(2, 1).site_count() == 9);
  CHECK(Rect::cube(2, 0, 4).site_count() == 25);
}

TEST_CASE("box containment arithmetic matches literal site check") {
  Box big({1, 2}, 5);
  Box small({3, 1}, 2);
  bool literal = true;
  for (const Point& z : small.sites()) literal = literal && big.contains(z);
  CHECK(big.contains_box(small) == literal);
  Box outside({5, 5}, 2);
  bool literal2 = true;
  for (const Point& z : outside.sites()) literal2 = literal2 && big.contains(z);
  CHECK(big.contains_box(outside) == literal2);
}

TEST_CASE("rect indexer round-trips") {
  Rect r({-3, 2, -1}, {1, 5, 0});
  RectIndexer idx(r);
  REQUIRE(idx.size == r.site_count());
  for (std::uint64_t k = 0; k < idx.size; ++k) CHECK(idx.index(idx.point(k)) == k);
}

TEST_CASE("sample rejects p outside [0,1]") {
  Rect r = Rect::cube(2, 0, 2);
  CHECK_THROWS_AS(Configuration::sample(r, -0.1, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(Configuration::sample(r, 1.5, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(Configuration::sample(r, std::nan(""), 1, 0), std::invalid_argument);
}

TEST_CASE("p = 1 opens every site, p = 0 closes every site") {
  Rect r = Rect::cube(2, -2, 2);
  for (Storage st : {Storage::dense, Storage::lazy}) {
    auto all_open = Configuration::sample(r, 1.0, 7, 3, st);
    auto all_closed = Configuration::sample(r, 0.0, 7, 3, st);
    for (const Point& z : r.sites()) {
      CHECK(all_open.open(z));
      CHECK_FALSE(all_closed.open(z));
    }
  }
}

TEST_CASE("same arguments give bit-identical configurations") {
  Rect r = Rect::cube(3, -2, 2);
  auto a = Configuration::sample(r, 0.37, 99, 5, Storage::dense);
  auto b = Configuration::sample(r, 0.37, 99, 5, Storage::dense);
  for (const Point& z : r.sites()) CHECK(a.open(z) == b.open(z));
}

TEST_CASE("dense and lazy storage agree site by site") {
  // the documented 5x5 case plus a d=3 region off the origin
  for (const Rect& r : {Rect::cube(2, 0, 4), Rect({-3, 5, 17}, {1, 9, 20})}) {
    for (double p : {0.2, 0.5927, 0.8}) {
      auto dense = Configuration::sample(r, p, 11, 2, Storage::dense);
      auto lazy = Configuration::sample(r, p, 11, 2, Storage::lazy);
      for (const Point& z : r.sites()) CHECK(dense.open(z) == lazy.open(z));
    }
  }
}

TEST_CASE("materialized copy preserves states") {
  Rect r = Rect::cube(2, -4, 4);
  auto lazy = Configuration::sample(r, 0.44, 5, 9, Storage::lazy);
  auto dense = lazy.materialized();
  CHECK(dense.is_dense());
  for (const Point& z : r.sites()) CHECK(dense.open(z) == lazy.open(z));
}

TEST_CASE("out-of-region query is a contract violation") {
  Rect r = Rect::cube(2, 0, 2);
  auto cfg = Configuration::sample(r, 0.5, 1, 0);
  CHECK_THROWS_AS(cfg.open(Point{3, 0}), std::out_of_range);
  CHECK_THROWS_AS(cfg.open(Point{0, -1}), std::out_of_range);
}

TEST_CASE("empirical open fraction at p = 0.3 over 1e6 sites within 5 sigma") {
  Rect r = Rect::cube(2, 0, 999);
  auto cfg = Configuration::sample(r, 0.3, 424242, 0, Storage::dense);
  std::uint64_t open = 0;
  for_each_site(r, [&](const Point& z) { open += cfg.open_unchecked(z) ? 1 : 0; });
  double n = 1e6;
  double frac = static_cast<double>(open) / n;
  double sigma = std::sqrt(0.3 * 0.7 / n);
  CHECK(std::abs(frac - 0.3) <= 5 * sigma);
}

TEST_CASE("restricting a sampled region leaves site states unchanged") {
  Rect big = Rect::cube(2, -8, 8);
  Rect small({-2, 1}, {3, 5});
  auto on_big = Configuration::sample(big, 0.41, 77, 4, Storage::dense);
  auto on_small = Configuration::sample(small, 0.41, 77, 4, Storage::dense);
  for (const Point& z : small.sites()) CHECK(on_big.open(z) == on_small.open(z));
}

TEST_CASE("coupled configurations are monotone in p, site by site") {
  Rect r = Rect::cube(3, -3, 3);
  const double grid[] = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    std::vector<Configuration> cfgs;
    for (double p : grid) cfgs.push_back(Configuration::sample(r, p, 13, trial));
    for (const Point& z : r.sites())
      for (std::size_t i = 0; i + 1 < std::size(grid); ++i)
        if (cfgs[i].open(z)) CHECK(cfgs[i + 1].open(z));
  }
}

TEST_CASE("threshold_for is monotone in p") {
  double prev = -1.0;
  for (double p = 0.0; p <= 1.0; p += 0.001) {
    double t = static_cast<double>(SiteSampler::threshold_for(p));
    CHECK(t >= prev);
    prev = t;
  }
}

TEST_CASE("rerandomized_outside keeps the kept box and changes the rest") {
  Rect region = Rect::cube(2, -20, 20);
  Rect keep = Rect::cube(2, -5, 5);
  auto cfg = Configuration::sample(region, 0.5, 3, 1);
  auto masked = cfg.rerandomized_outside(keep, 17);
  int diffs_outside = 0;
  for (const Point& z : region.sites()) {
    if (keep.contains(z)) {
      CHECK(masked.open(z) == cfg.open(z));
    } else if (masked.open(z) != cfg.open(z)) {
      ++diffs_outside;
    }
  }
  // ~1560 outside sites flip a fair coin against an independent stream
  CHECK(diffs_outside > 0);
}

TEST_CASE("explicit configurations hold exactly the given open set") {
  Rect r = Rect::cube(2, -2, 2);
  std::vector<Point> open = {{1, 0}, {2, 0}, {-1, 0}, {-2, 0}};
  auto cfg = Configuration::from_open_sites(r, open);
  std::uint64_t count = 0;
  for (const Point& z : r.sites()) count += cfg.open(z) ? 1 : 0;
  CHECK(count == open.size());
  for (const Point& z : open) CHECK(cfg.open(z));
}

TEST_SUITE_END();
