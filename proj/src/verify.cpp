#include "perc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "perc/cluster.hpp"
#include "perc/events.hpp"
#include "perc/parallel.hpp"
#include "perc/renorm.hpp"

namespace perc {

namespace {

std::string nm_params(const char* what, Coord n, Coord M) {
  return std::string(what) + "(n=" + std::to_string(n) + ",M=" + std::to_string(M) + ")";
}

Witness make_witness(const Configuration& cfg, std::string params, std::string detail) {
  return Witness{cfg.seed(), cfg.trial(), std::move(params), std::move(detail)};
}

}  // namespace

Verdict check_gluing(const Configuration& cfg, Coord n, Coord M) {
  if (n < 1 || M < 2) throw std::invalid_argument("check_gluing: need n >= 1, M >= 2");
  if (!cfg.region().contains(Box::centered(cfg.dim(), 8 * M * M * n).rect()))
    throw std::invalid_argument("check_gluing: Lambda(8M^2 n) not inside configuration region");
  if (!event_e1(cfg, n, M) || !event_f2(cfg, n, M) || !event_f3(cfg, n, M))
    return Verdict::vacuous();
  if (a2(cfg, 8 * M * n, 8 * M * M * n)) return Verdict::holds();
  return Verdict::violation(
      make_witness(cfg, nm_params("gluing", n, M), "E1, F2, F3 hold but A2(8Mn, 8M^2n) fails"));
}

Verdict check_good_gluing(const Configuration& cfg, const Point& x, const Point& y, Coord n,
                          Coord M) {
  Point step = y - x;
  if (l1_norm(step) != 1 || chebyshev(step) != 1)
    throw std::invalid_argument("check_good_gluing: x and y must be coarse nearest neighbours");
  std::string params = nm_params("good_gluing", n, M) + " x=" + to_string(x) + " y=" + to_string(y);

  const Point nx = x.scaled(n);
  const Point ny = y.scaled(n);
  Box box_x(nx, 16 * M * n);
  Box box_y(ny, 16 * M * n);
  if (!cfg.region().contains(box_x.rect()) || !cfg.region().contains(box_y.rect()))
    throw std::invalid_argument("check_good_gluing: 16Mn-boxes not inside configuration region");
  RegionUnion region({box_x.rect(), box_y.rect()});
  const Rect bound = region.bounding_rect();

  // One labeling of the box union serves the W sets and the conclusion.
  // Reaching the boundary of a 16Mn-box through the union is equivalent to
  // reaching it inside the box: a path leaving the box crosses that boundary.
  ClusterLabels ls = detail::label_impl(
      bound, [&](const Point& z) { return region.contains(z) && cfg.open_unchecked(z); });
  auto nclusters = static_cast<std::size_t>(ls.cluster_count);
  std::vector<std::uint8_t> touch_x(nclusters, 0);
  std::vector<std::uint8_t> touch_y(nclusters, 0);
  for (int axis = 0; axis < cfg.dim(); ++axis) {
    for (int high = 0; high < 2; ++high) {
      for_each_site(box_x.rect().face(axis, high != 0), [&](const Point& z) {
        std::int32_t l = ls.at(z);
        if (l >= 0) touch_x[static_cast<std::size_t>(l)] = 1;
      });
      for_each_site(box_y.rect().face(axis, high != 0), [&](const Point& z) {
        std::int32_t l = ls.at(z);
        if (l >= 0) touch_y[static_cast<std::size_t>(l)] = 1;
      });
    }
  }

  // W(x): open sites of Lambda(nx;n) whose cluster reaches the box boundary.
  std::int32_t anchor = -1;
  Point anchor_site, bad_site;
  bool split = false;
  auto collect = [&](const Box& inner, const std::vector<std::uint8_t>& touch) {
    std::uint64_t count = 0;
    for_each_site(inner.rect(), [&](const Point& z) {
      std::int32_t l = ls.at(z);
      if (l < 0 || !touch[static_cast<std::size_t>(l)]) return;
      ++count;
      if (anchor < 0) {
        anchor = l;
        anchor_site = z;
      } else if (l != anchor && !split) {
        split = true;
        bad_site = z;
      }
    });
    return count;
  };
  std::uint64_t wx_size = collect(Box(nx, n), touch_x);
  std::uint64_t wy_size = collect(Box(ny, n), touch_y);

  bool good_x = wx_size > 0 && crossing_cluster_count(cfg, nx, 4 * n, 4 * M * n, 2) <= 1;
  bool good_y = wy_size > 0 && crossing_cluster_count(cfg, ny, 4 * n, 4 * M * n, 2) <= 1;
  if (!good_x || !good_y) return Verdict::vacuous();
  if (split)
    return Verdict::violation(make_witness(
        cfg, params, "W sites " + to_string(anchor_site) + " and " + to_string(bad_site) +
                         " lie in different clusters of the box union"));
  return Verdict::holds();
}

Verdict check_box_inclusions(int d, const Point& x, const Point& y, Coord n, Coord M) {
  if (n < 1 || M < 2) throw std::invalid_argument("check_box_inclusions: need n >= 1, M >= 2");
  std::string params = nm_params("inclusions", n, M) + " x=" + to_string(x) + " y=" + to_string(y);
  Point nx = x.scaled(n);
  Point ny = y.scaled(n);
  Box big_x(nx, 4 * n);
  Box small_y(ny, n);
  for (const Point& z : small_y.sites()) {
    if (!big_x.contains(z))
      return Verdict::violation({0, 0, params,
                                 "site " + to_string(z) +
                                     " of Lambda(ny;n) lies outside Lambda(nx;4n)"});
  }
  Box big_y(ny, 16 * M * n);
  Box small_x(nx, 4 * M * n);
  for (const Point& z : small_x.sites()) {
    if (!big_y.contains(z))
      return Verdict::violation({0, 0, params,
                                 "site " + to_string(z) +
                                     " of Lambda(nx;4Mn) lies outside Lambda(ny;16Mn)"});
  }
  (void)d;
  return Verdict::holds();
}

Verdict check_annulus_cover(const Configuration& cfg, Coord r, Coord R) {
  if (r <= 0 || r >= R) throw std::invalid_argument("check_annulus_cover: need 0 < r < R");
  const int d = cfg.dim();
  if (!cfg.region().contains(Box::centered(d, R).rect()))
    throw std::invalid_argument("check_annulus_cover: Lambda(R) not inside configuration region");
  if (!one_arm(cfg, r, R)) return Verdict::vacuous();
  for (int axis = 0; axis < d; ++axis) {
    for (int sign = -1; sign <= 1; sign += 2) {
      Point origin = Point::zero(d);
      for (int i = 0; i < d; ++i) origin.c[i] = -R;
      origin.c[axis] = sign > 0 ? r : -R;
      if (crossing_v(cfg, R - r, 2 * R, origin, axis)) return Verdict::holds();
    }
  }
  return Verdict::violation(make_witness(
      cfg, "annulus(r=" + std::to_string(r) + ",R=" + std::to_string(R) + ")",
      "one-arm crossing of the annulus but no oriented slab crossed in its thin direction"));
}

Verdict check_subface_decomposition(const Configuration& cfg, Coord n, Coord M) {
  if (n < 1 || M < 2)
    throw std::invalid_argument("check_subface_decomposition: need n >= 1, M >= 2");
  const int d = cfg.dim();
  const Coord lateral = 16 * M * M * n;
  const Coord height = 16 * M * n;
  Rect rect;
  rect.dim = d;
  for (int i = 0; i < d - 1; ++i) {
    rect.lo[i] = 0;
    rect.hi[i] = lateral;
  }
  rect.lo[d - 1] = 0;
  rect.hi[d - 1] = height;
  if (!cfg.region().contains(rect))
    throw std::invalid_argument("check_subface_decomposition: rectangle not inside region");
  if (!crossing_v(cfg, height, lateral, Point::zero(d), d - 1)) return Verdict::vacuous();

  // One labeling; a cluster is "crossing" if it meets both horizontal layers.
  ClusterLabels ls = label(cfg, rect);
  std::vector<std::uint8_t> bottom(static_cast<std::size_t>(ls.cluster_count), 0);
  std::vector<std::uint8_t> top(static_cast<std::size_t>(ls.cluster_count), 0);
  for (const Point& z : rect.face(d - 1, false).sites()) {
    std::int32_t l = ls.at(z);
    if (l >= 0) bottom[static_cast<std::size_t>(l)] = 1;
  }
  for (const Point& z : rect.face(d - 1, true).sites()) {
    std::int32_t l = ls.at(z);
    if (l >= 0) top[static_cast<std::size_t>(l)] = 1;
  }

  // Subfaces of side 2n tile the bottom face (they overlap on their edges).
  const Coord cells = lateral / (2 * n);
  std::vector<Coord> cell(static_cast<std::size_t>(d - 1), 0);
  while (true) {
    Rect sub;
    sub.dim = d;
    for (int i = 0; i < d - 1; ++i) {
      sub.lo[i] = 2 * n * cell[static_cast<std::size_t>(i)];
      sub.hi[i] = std::min<Coord>(sub.lo[i] + 2 * n, lateral);
    }
    sub.lo[d - 1] = 0;
    sub.hi[d - 1] = 0;
    for (const Point& z : sub.sites()) {
      std::int32_t l = ls.at(z);
      if (l >= 0 && bottom[static_cast<std::size_t>(l)] && top[static_cast<std::size_t>(l)])
        return Verdict::holds();
    }
    int axis = d - 2;
    while (axis >= 0) {
      if (++cell[static_cast<std::size_t>(axis)] < cells) break;
      cell[static_cast<std::size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  return Verdict::violation(make_witness(
      cfg, nm_params("subface", n, M),
      "rectangle crossed in the d-direction but no side-2n subface reaches the top layer"));
}

CheckerKind checker_from_name(const std::string& name) {
  if (name == "gluing") return CheckerKind::gluing;
  if (name == "good_gluing") return CheckerKind::good_gluing;
  if (name == "annulus") return CheckerKind::annulus;
  if (name == "subface") return CheckerKind::subface;
  if (name == "inclusions") return CheckerKind::inclusions;
  throw std::invalid_argument("unknown checker '" + name + "'");
}

std::string to_string(CheckerKind kind) {
  switch (kind) {
    case CheckerKind::gluing: return "gluing";
    case CheckerKind::good_gluing: return "good_gluing";
    case CheckerKind::annulus: return "annulus";
    case CheckerKind::subface: return "subface";
    case CheckerKind::inclusions: return "inclusions";
  }
  return "?";
}

namespace {

Rect checker_region(const VerifyRunParams& pr) {
  switch (pr.check) {
    case CheckerKind::gluing:
      return Box::centered(pr.d, 8 * pr.M * pr.M * pr.n).rect();
    case CheckerKind::good_gluing: {
      // bounding box of the two 16Mn-boxes over all 2d neighbour directions
      Coord reach = pr.n + 16 * pr.M * pr.n;
      return Box::centered(pr.d, reach).rect();
    }
    case CheckerKind::annulus: {
      Coord R = pr.R > 0 ? pr.R : 8 * pr.M * pr.M * pr.n;
      return Box::centered(pr.d, R).rect();
    }
    case CheckerKind::subface: {
      Rect r = Rect::cube(pr.d, 0, 16 * pr.M * pr.M * pr.n);
      r.hi[pr.d - 1] = 16 * pr.M * pr.n;
      return r;
    }
    case CheckerKind::inclusions:
      return Rect::cube(pr.d, 0, 0);  // no configuration needed
  }
  throw std::logic_error("checker_region: unknown checker");
}

Verdict run_one(const VerifyRunParams& pr, const Configuration& cfg, std::uint64_t trial) {
  switch (pr.check) {
    case CheckerKind::gluing:
      return check_gluing(cfg, pr.n, pr.M);
    case CheckerKind::good_gluing: {
      // rotate through the 2d neighbour directions
      auto dirs = axis_neighbours(pr.d);
      const Point& y = dirs[trial % dirs.size()];
      return check_good_gluing(cfg, Point::zero(pr.d), y, pr.n, pr.M);
    }
    case CheckerKind::annulus: {
      Coord r = pr.r > 0 ? pr.r : 8 * pr.M * pr.n;
      Coord R = pr.R > 0 ? pr.R : 8 * pr.M * pr.M * pr.n;
      return check_annulus_cover(cfg, r, R);
    }
    case CheckerKind::subface:
      return check_subface_decomposition(cfg, pr.n, pr.M);
    case CheckerKind::inclusions:
      return Verdict::holds();  // handled separately, configuration-free
  }
  throw std::logic_error("run_one: unknown checker");
}

}  // namespace

VerifySummary run_checker(const VerifyRunParams& params) {
  VerifySummary summary;
  summary.params = params;

  if (params.check == CheckerKind::inclusions) {
    PerPStats st;
    st.p = 0.0;
    for (const Point& y : axis_neighbours(params.d)) {
      Verdict v = check_box_inclusions(params.d, Point::zero(params.d), y, params.n, params.M);
      if (params.inject_violation && v.status == VerdictStatus::holds)
        v = Verdict::violation({params.seed, 0, "inclusions y=" + to_string(y),
                                "injected corrupted conclusion detector"});
      if (v.violated()) {
        ++st.violations;
        if (summary.witnesses.empty()) summary.witnesses.push_back(*v.witness);
      } else {
        ++st.holds;
      }
    }
    summary.per_p.push_back(st);
    summary.total_violations = st.violations;
    return summary;
  }

  const Rect region = checker_region(params);
  int workers = resolve_threads(params.threads);
  for (std::size_t pi = 0; pi < params.p_grid.size(); ++pi) {
    const double p = params.p_grid[pi];
    // distinct trial streams per grid point
    const std::uint64_t stream = params.seed + 0x1000003 * static_cast<std::uint64_t>(pi);
    std::vector<PerPStats> partial(static_cast<std::size_t>(workers));
    std::vector<std::optional<Witness>> first(static_cast<std::size_t>(workers));
    std::vector<std::uint64_t> first_trial(static_cast<std::size_t>(workers), UINT64_MAX);
    parallel_ranges(0, params.trials, workers, [&](int w, std::uint64_t b, std::uint64_t e) {
      auto& st = partial[static_cast<std::size_t>(w)];
      for (std::uint64_t t = b; t < e; ++t) {
        Configuration cfg = Configuration::sample(region, p, stream, t, Storage::lazy);
        Verdict v = run_one(params, cfg, t);
        if (params.inject_violation && v.status == VerdictStatus::holds)
          v = Verdict::violation({stream, t, to_string(params.check),
                                  "injected corrupted conclusion detector"});
        switch (v.status) {
          case VerdictStatus::vacuous: ++st.vacuous; break;
          case VerdictStatus::holds: ++st.holds; break;
          case VerdictStatus::violation:
            ++st.violations;
            if (t < first_trial[static_cast<std::size_t>(w)]) {
              first_trial[static_cast<std::size_t>(w)] = t;
              first[static_cast<std::size_t>(w)] = *v.witness;
            }
            break;
        }
      }
    });
    PerPStats st;
    st.p = p;
    std::optional<Witness> witness;
    std::uint64_t best = UINT64_MAX;
    for (int w = 0; w < workers; ++w) {
      st.vacuous += partial[static_cast<std::size_t>(w)].vacuous;
      st.holds += partial[static_cast<std::size_t>(w)].holds;
      st.violations += partial[static_cast<std::size_t>(w)].violations;
      if (first[static_cast<std::size_t>(w)] && first_trial[static_cast<std::size_t>(w)] < best) {
        best = first_trial[static_cast<std::size_t>(w)];
        witness = first[static_cast<std::size_t>(w)];
      }
    }
    summary.per_p.push_back(st);
    summary.total_violations += st.violations;
    if (witness) summary.witnesses.push_back(*witness);
  }
  return summary;
}

bool IndependenceReport::within(double k_sigma) const {
  if (sigma > 0.0) return std::abs(diff) <= k_sigma * sigma;
  return diff == 0.0;
}

IndependenceReport measure_event_independence(int d, Coord n, Coord M, double p,
                                              std::uint64_t trials, std::uint64_t seed,
                                              int threads) {
  if (trials < 2) throw std::invalid_argument("measure_event_independence: need trials >= 2");
  const Rect region = Box::centered(d, 8 * M * M * n).rect();
  int workers = resolve_threads(threads);
  struct Tally {
    std::uint64_t c1 = 0, c2 = 0, c3 = 0, c12 = 0, c13 = 0, c23 = 0, c123 = 0;
  };
  std::vector<Tally> partial(static_cast<std::size_t>(workers));
  parallel_ranges(0, trials, workers, [&](int w, std::uint64_t b, std::uint64_t e) {
    Tally& t = partial[static_cast<std::size_t>(w)];
    for (std::uint64_t k = b; k < e; ++k) {
      Configuration cfg = Configuration::sample(region, p, seed, k, Storage::lazy);
      bool a = event_e1(cfg, n, M);
      bool bb = event_f2(cfg, n, M);
      bool c = event_f3(cfg, n, M);
      t.c1 += a;
      t.c2 += bb;
      t.c3 += c;
      t.c12 += a && bb;
      t.c13 += a && c;
      t.c23 += bb && c;
      t.c123 += a && bb && c;
    }
  });
  Tally t;
  for (const Tally& q : partial) {
    t.c1 += q.c1;
    t.c2 += q.c2;
    t.c3 += q.c3;
    t.c12 += q.c12;
    t.c13 += q.c13;
    t.c23 += q.c23;
    t.c123 += q.c123;
  }
  auto N = static_cast<double>(trials);
  IndependenceReport rep;
  rep.trials = trials;
  rep.p = p;
  rep.p_e1 = static_cast<double>(t.c1) / N;
  rep.p_f2 = static_cast<double>(t.c2) / N;
  rep.p_f3 = static_cast<double>(t.c3) / N;
  rep.joint = static_cast<double>(t.c123) / N;
  rep.product = rep.p_e1 * rep.p_f2 * rep.p_f3;
  rep.diff = rep.joint - rep.product;

  // delta method for D = x123 - x1 x2 x3 with empirical plug-ins
  double p1 = rep.p_e1, p2 = rep.p_f2, p3 = rep.p_f3, p123 = rep.joint;
  double p12 = static_cast<double>(t.c12) / N;
  double p13 = static_cast<double>(t.c13) / N;
  double p23 = static_cast<double>(t.c23) / N;
  double g[4] = {1.0, -p2 * p3, -p1 * p3, -p1 * p2};
  double cov[4][4];
  double m[4] = {p123, p1, p2, p3};
  double cross[4][4] = {{p123, p123, p123, p123},
                        {p123, p1, p12, p13},
                        {p123, p12, p2, p23},
                        {p123, p13, p23, p3}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) cov[i][j] = cross[i][j] - m[i] * m[j];
  double var = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) var += g[i] * g[j] * cov[i][j];
  rep.sigma = var > 0.0 ? std::sqrt(var / N) : 0.0;
  return rep;
}

}  // namespace perc
