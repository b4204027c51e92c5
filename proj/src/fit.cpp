#include "perc/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace perc {

std::vector<Coord> schedule(Coord n_min, Coord n_max, double ratio) {
  if (n_min < 1 || n_min > n_max) throw std::invalid_argument("schedule: need 1 <= n_min <= n_max");
  if (!(ratio > 1.0)) throw std::invalid_argument("schedule: need ratio > 1");
  std::vector<Coord> out;
  Coord v = n_min;
  while (true) {
    out.push_back(v);
    if (v >= n_max) break;
    auto next = static_cast<Coord>(std::ceil(static_cast<double>(v) * ratio));
    if (next <= v) next = v + 1;
    if (next > n_max) next = n_max;
    v = next;
  }
  return out;
}

ExponentBounds exponent_bounds(int d) {
  if (d < 2) throw std::invalid_argument("exponent_bounds: need d >= 2");
  auto dd = static_cast<long long>(d);
  ExponentBounds b;
  b.lower_num = 2 * dd * dd + 3 * dd - 3;
  b.lower_den = 4 * dd * dd + 5 * dd - 5;
  b.lower = static_cast<double>(b.lower_num) / static_cast<double>(b.lower_den);
  b.upper = static_cast<double>(dd * dd + 4 * dd - 2);
  b.weaker_upper = static_cast<double>(2 * dd * dd + 2 * dd - 2);
  return b;
}

FitResult fit_power_law(const std::vector<FitPoint>& points) {
  FitResult r;
  std::vector<FitPoint> usable;
  for (const FitPoint& pt : points) {
    if (pt.p_hat > 0.0 && pt.n > 0.0)
      usable.push_back(pt);
    else
      ++r.points_dropped;
  }
  if (usable.size() < 3)
    throw std::invalid_argument("fit_power_law: need at least 3 points with p_hat > 0");
  bool distinct = false;
  for (const FitPoint& pt : usable) distinct = distinct || pt.n != usable.front().n;
  if (!distinct) throw std::invalid_argument("fit_power_law: degenerate abscissae");

  double sw = 0, swx = 0, swy = 0;
  std::vector<double> xs, ys, ws;
  for (const FitPoint& pt : usable) {
    double x = std::log(pt.n);
    double y = std::log(pt.p_hat);
    // log-scale variance by the delta method; exact points get weight 1
    double sy = pt.sigma > 0.0 ? pt.sigma / pt.p_hat : 0.0;
    double w = sy > 0.0 ? 1.0 / (sy * sy) : 1.0;
    xs.push_back(x);
    ys.push_back(y);
    ws.push_back(w);
    sw += w;
    swx += w * x;
    swy += w * y;
  }
  double xbar = swx / sw;
  double ybar = swy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += ws[i] * (xs[i] - xbar) * (xs[i] - xbar);
    sxy += ws[i] * (xs[i] - xbar) * (ys[i] - ybar);
  }
  if (sxx <= 0.0) throw std::invalid_argument("fit_power_law: degenerate abscissae");
  double slope = sxy / sxx;
  double intercept = ybar - slope * xbar;

  double chi2 = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double res = ys[i] - (intercept + slope * xs[i]);
    chi2 += ws[i] * res * res;
  }
  auto npts = static_cast<double>(xs.size());
  double dof = npts - 2.0;

  r.alpha_hat = -slope;
  r.c_hat = std::exp(intercept);
  r.stderr_alpha = std::sqrt(std::max(chi2, 0.0) / dof / sxx);
  r.points_used = static_cast<int>(xs.size());
  r.residual_rms = std::sqrt(std::max(chi2, 0.0) / npts);
  return r;
}

void compare_to_bounds(FitResult& fit, int d, double k_sigma) {
  ExponentBounds b = exponent_bounds(d);
  double lo = fit.alpha_hat - k_sigma * fit.stderr_alpha;
  double hi = fit.alpha_hat + k_sigma * fit.stderr_alpha;
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    fit.lower_verdict = "inconclusive";
    fit.upper_verdict = "inconclusive";
    return;
  }
  fit.lower_verdict = hi >= b.lower ? "consistent" : "inconsistent";
  fit.upper_verdict = lo <= b.upper ? "consistent" : "inconsistent";
}

std::vector<RatioPoint> ratio_report(const std::vector<RatioInputs>& inputs, int d) {
  if (d < 2) throw std::invalid_argument("ratio_report: need d >= 2");
  std::vector<RatioPoint> out;
  for (const RatioInputs& in : inputs) {
    RatioPoint pt;
    pt.n = in.n;
    if (in.a2.successes == 0 || in.two_arms.successes == 0 || in.min_pair.successes == 0) {
      pt.inconclusive = true;
      out.push_back(pt);
      continue;
    }
    double scale = std::pow(static_cast<double>(in.n), static_cast<double>(4 * d - 2));
    pt.ratio = in.a2.p_hat * in.min_pair.p_hat / (scale * in.two_arms.p_hat);
    // relative errors in quadrature on the log scale
    auto rel = [](const Estimate& e) {
      double se = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(e.trials));
      return se / e.p_hat;
    };
    double sigma_log = std::sqrt(rel(in.a2) * rel(in.a2) + rel(in.min_pair) * rel(in.min_pair) +
                                 rel(in.two_arms) * rel(in.two_arms));
    double z = normal_quantile(1.0 - (1.0 - in.a2.confidence) / 2.0);
    pt.ci_low = pt.ratio * std::exp(-z * sigma_log);
    pt.ci_high = pt.ratio * std::exp(z * sigma_log);
    out.push_back(pt);
  }
  return out;
}

std::vector<std::pair<Point, Point>> extremal_boundary_pairs(int d, Coord n) {
  if (n < 1) throw std::invalid_argument("extremal_boundary_pairs: need n >= 1");
  std::vector<std::pair<Point, Point>> out;
  // opposite corners
  Point corner = Point::zero(d);
  for (int i = 0; i < d; ++i) corner.c[i] = n;
  out.emplace_back(corner, corner.scaled(-1));
  // opposite face centres along each axis
  for (int i = 0; i < d; ++i) {
    Point f = Point::zero(d);
    f.c[i] = n;
    out.emplace_back(f, f.scaled(-1));
  }
  return out;
}

}  // namespace perc
