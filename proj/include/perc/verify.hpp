#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "perc/configuration.hpp"
#include "perc/geometry.hpp"
#include "perc/verdict.hpp"

namespace perc {

// Per-configuration checkers for deterministic containments. Every violation
// is an implementation bug, never a statistical fluctuation; witnesses carry
// what is needed to replay the configuration.

// If E1, F2 and F3 all hold then A2(8Mn, 8M^2 n) must hold.
Verdict check_gluing(const Configuration& cfg, Coord n, Coord M);

// If coarse neighbours x and y are both good, every site of W(x) is joined to
// every site of W(y) inside the union of their 16Mn-boxes.
Verdict check_good_gluing(const Configuration& cfg, const Point& x, const Point& y, Coord n,
                          Coord M);

// Literal site-set checks of Lambda(nx;4n) >= Lambda(ny;n) and
// Lambda(ny;16Mn) >= Lambda(nx;4Mn). Purely geometric. Total on any pair x, y;
// for coarse nearest neighbours both inclusions always hold.
Verdict check_box_inclusions(int d, const Point& x, const Point& y, Coord n, Coord M);

// If Lambda(r) reaches the boundary of Lambda(R) inside Lambda(R), at least
// one of the 2d oriented slabs [-R,R]^{d-1} x [r,R] is crossed in its thin
// direction.
Verdict check_annulus_cover(const Configuration& cfg, Coord r, Coord R);

// If [0,16M^2 n]^{d-1} x [0,16Mn] is crossed in the d-direction, some subface
// of side 2n of the bottom face connects to the top layer inside the rectangle.
Verdict check_subface_decomposition(const Configuration& cfg, Coord n, Coord M);

// ---- trial runner shared by the CLI and the test suites ----

enum class CheckerKind { gluing, good_gluing, annulus, subface, inclusions };

CheckerKind checker_from_name(const std::string& name);
std::string to_string(CheckerKind kind);

struct VerifyRunParams {
  CheckerKind check = CheckerKind::gluing;
  int d = 2;
  Coord n = 2;
  Coord M = 2;
  Coord r = 0;  // annulus only; 0 defaults to 8Mn
  Coord R = 0;  // annulus only; 0 defaults to 8M^2 n
  std::vector<double> p_grid = {0.3, 0.5, 0.7};
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
  // Negative control of the harness: the conclusion detector is corrupted to
  // always deny, so trials whose hypothesis holds become violations.
  bool inject_violation = false;
};

struct PerPStats {
  double p = 0.0;
  std::uint64_t vacuous = 0;
  std::uint64_t holds = 0;
  std::uint64_t violations = 0;
};

struct VerifySummary {
  VerifyRunParams params;
  std::vector<PerPStats> per_p;
  std::uint64_t total_violations = 0;
  std::vector<Witness> witnesses;  // at most one per p value, lowest trial index
};

VerifySummary run_checker(const VerifyRunParams& params);

// ---- independence structure of (E1, F2, F3) ----

struct IndependenceReport {
  std::uint64_t trials = 0;
  double p = 0.0;
  double p_e1 = 0.0, p_f2 = 0.0, p_f3 = 0.0;
  double joint = 0.0;       // empirical P(E1 and F2 and F3)
  double product = 0.0;     // empirical product of marginals
  double diff = 0.0;        // joint - product
  double sigma = 0.0;       // delta-method std error of diff
  bool within(double k_sigma) const;
};

// Evaluates the three detectors on shared configurations; their supports are
// disjoint slabs, so joint frequency should match the product of marginals.
IndependenceReport measure_event_independence(int d, Coord n, Coord M, double p,
                                              std::uint64_t trials, std::uint64_t seed,
                                              int threads = 0);

}  // namespace perc
