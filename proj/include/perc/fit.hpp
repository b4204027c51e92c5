#pragma once

#include <string>
#include <utility>
#include <vector>

#include "perc/estimate.hpp"
#include "perc/geometry.hpp"

namespace perc {

// Geometric ladder n_min, ceil(n_min * ratio), ... capped at n_max.
std::vector<Coord> schedule(Coord n_min, Coord n_max, double ratio);

struct FitPoint {
  double n = 0.0;
  double p_hat = 0.0;
  double sigma = 0.0;  // std error of p_hat
};

struct ExponentBounds {
  // (2d^2+3d-3)/(4d^2+5d-5), d^2+4d-2, 2d^2+2d-2
  long long lower_num = 0;
  long long lower_den = 1;
  double lower = 0.0;
  double upper = 0.0;
  double weaker_upper = 0.0;
};

ExponentBounds exponent_bounds(int d);

struct FitResult {
  double alpha_hat = 0.0;   // exponent: p(n) ~ c * n^(-alpha)
  double c_hat = 0.0;
  double stderr_alpha = 0.0;
  int points_used = 0;
  int points_dropped = 0;   // zero-success points excluded from the fit
  double residual_rms = 0.0;  // weighted, on log scale

  // verdicts against exponent_bounds: "consistent" | "inconsistent" | "inconclusive"
  std::string lower_verdict;
  std::string upper_verdict;
};

// Weighted least squares of log p_hat on log n; weights are the delta-method
// log-scale variances (sigma/p_hat)^-2. Standard errors are residual-scaled.
// Points with p_hat <= 0 are dropped; fewer than 3 usable points is an error.
FitResult fit_power_law(const std::vector<FitPoint>& points);

// Fills the verdict fields of `fit` against the bounds for dimension d, using
// alpha_hat +- k_sigma * stderr.
void compare_to_bounds(FitResult& fit, int d, double k_sigma = 2.0);

struct RatioInputs {
  Coord n = 0;
  Estimate a2;         // P(A2(n, Mn))
  Estimate two_arms;   // P(two-arms(0,n))
  Estimate min_pair;   // sampled-min point pair probability
};

struct RatioPoint {
  Coord n = 0;
  bool inconclusive = false;
  double ratio = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Report-only diagnostic R(n) = p(A2) * p(pair) / (n^(4d-2) * p(two-arms)).
// No value is asserted; zero tallies flag the point inconclusive.
std::vector<RatioPoint> ratio_report(const std::vector<RatioInputs>& inputs, int d);

// Deterministic extremal pairs on the boundary of Lambda(n): opposite corners
// and opposite face centres. Stand-ins for the full min over boundary pairs.
std::vector<std::pair<Point, Point>> extremal_boundary_pairs(int d, Coord n);

}  // namespace perc
