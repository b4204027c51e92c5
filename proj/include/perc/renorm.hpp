#pragma once

#include <span>
#include <vector>

#include "perc/configuration.hpp"
#include "perc/geometry.hpp"
#include "perc/verdict.hpp"

namespace perc {

// W(x): open sites of Lambda(nx; n) joined to the boundary of
// Lambda(nx; 16Mn) by an open path inside that box.
std::vector<Point> w_set(const Configuration& cfg, const Point& x, Coord n, Coord M);

// x is good iff W(x) is nonempty and at most one open cluster of
// Lambda(nx; 4Mn) joins Lambda(nx; 4n) to the boundary of Lambda(nx; 4Mn).
bool good(const Configuration& cfg, const Point& x, Coord n, Coord M);

// The coarse-grained good field over coarse sites ||x||_inf <= K.
struct GoodField {
  int d = 0;
  Coord K = 0;
  Coord n = 0;
  Coord M = 0;
  RectIndexer coarse;            // over [-K,K]^d
  std::vector<std::uint8_t> is_good;
  double density = 0.0;

  bool at(const Point& coarse_site) const { return is_good[coarse.index(coarse_site)] != 0; }
};

GoodField good_field(const Configuration& cfg, Coord K, Coord n, Coord M);

// Finite analogue of the good-path gluing: if every coarse site of `path`
// (consecutive entries nearest neighbours) is good, all their W-sets must lie
// in one open cluster of the union of the 16Mn-boxes along the path.
Verdict good_path_gluing(const Configuration& cfg, std::span<const Point> path, Coord n, Coord M);

}  // namespace perc
