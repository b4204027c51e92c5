#include "perc/estimate.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "perc/parallel.hpp"

namespace perc {

double normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0))
    throw std::invalid_argument("normal_quantile: probability must be in (0,1)");
  // Acklam's inverse normal CDF approximation.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double q, r, x;
  if (prob < p_low) {
    q = std::sqrt(-2.0 * std::log(prob));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (prob <= 1.0 - p_low) {
    q = prob - 0.5;
    r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    q = std::sqrt(-2.0 * std::log(1.0 - prob));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // one Halley step against erfc brings the approximation to full precision
  double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - prob;
  double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  x = x - u / (1.0 + x * u / 2.0);
  return x;
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                          double confidence) {
  if (trials == 0 || successes > trials)
    throw std::invalid_argument("wilson_interval: need 0 <= successes <= trials, trials >= 1");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("wilson_interval: confidence must be in (0,1)");
  double z = normal_quantile(1.0 - (1.0 - confidence) / 2.0);
  double n = static_cast<double>(trials);
  double ph = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double centre = (ph + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n)) / denom;
  double lo = centre - half;
  double hi = centre + half;
  if (successes == 0) lo = 0.0;
  if (successes == trials) hi = 1.0;
  if (lo < 0.0) lo = 0.0;
  if (hi > 1.0) hi = 1.0;
  return {lo, hi};
}

void Estimate::refresh_interval() {
  p_hat = trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
  if (trials > 0) {
    auto [lo, hi] = wilson_interval(successes, trials, confidence);
    ci_low = lo;
    ci_high = hi;
  } else {
    ci_low = 0.0;
    ci_high = 1.0;
  }
}

Estimate estimate_event(const EventSpec& spec, double p, std::uint64_t trials, std::uint64_t seed,
                        double confidence, int threads, std::uint64_t trial_offset) {
  validate(spec);
  if (trials < 1) throw std::invalid_argument("estimate_event: need trials >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("estimate_event: p outside [0,1]");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("estimate_event: confidence outside (0,1)");
  const Rect sup = support(spec);
  auto t0 = std::chrono::steady_clock::now();
  int workers = resolve_threads(threads);
  std::vector<std::uint64_t> partial(static_cast<std::size_t>(workers), 0);
  parallel_ranges(trial_offset, trial_offset + trials, workers,
                  [&](int w, std::uint64_t b, std::uint64_t e) {
                    std::uint64_t hits = 0;
                    for (std::uint64_t t = b; t < e; ++t) {
                      Configuration cfg = Configuration::sample(sup, p, seed, t, Storage::lazy);
                      if (evaluate(spec, cfg)) ++hits;
                    }
                    partial[static_cast<std::size_t>(w)] = hits;
                  });
  Estimate est;
  est.spec = spec;
  est.p = p;
  est.confidence = confidence;
  est.seed = seed;
  est.trial_offset = trial_offset;
  est.trials = trials;
  for (std::uint64_t h : partial) est.successes += h;
  est.refresh_interval();
  est.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return est;
}

Estimate merge(const Estimate& a, const Estimate& b) {
  if (a.trials == 0) return b;
  if (b.trials == 0) return a;
  if (a.spec != b.spec || a.p != b.p || a.confidence != b.confidence || a.seed != b.seed)
    throw std::invalid_argument("merge: estimates describe different experiments");
  bool disjoint = a.trial_offset + a.trials <= b.trial_offset ||
                  b.trial_offset + b.trials <= a.trial_offset;
  if (!disjoint) throw std::invalid_argument("merge: overlapping trial ranges");
  Estimate out = a;
  out.trial_offset = std::min(a.trial_offset, b.trial_offset);
  out.trials = a.trials + b.trials;
  out.successes = a.successes + b.successes;
  out.wall_time_s = a.wall_time_s + b.wall_time_s;
  out.refresh_interval();
  return out;
}

Estimate estimate_to_relative_width(const EventSpec& spec, double p, double rel_width,
                                    std::uint64_t max_trials, std::uint64_t seed,
                                    double confidence, int threads) {
  if (!(rel_width > 0.0)) throw std::invalid_argument("estimate_to_relative_width: bad target");
  if (max_trials < 1) throw std::invalid_argument("estimate_to_relative_width: bad cap");
  Estimate total;
  std::uint64_t batch = 1024;
  while (total.trials < max_trials) {
    std::uint64_t want = std::min<std::uint64_t>(batch, max_trials - total.trials);
    Estimate shard = estimate_event(spec, p, want, seed, confidence, threads, total.trials);
    total = total.trials == 0 ? shard : merge(total, shard);
    if (batch < 65536) batch *= 2;
    if (total.successes > 0) {
      double half = (total.ci_high - total.ci_low) / 2.0;
      if (half <= rel_width * total.p_hat) break;
    }
  }
  return total;
}

IndicatorPoly enumerate_indicator(const EventSpec& spec, std::uint64_t guard_sites) {
  validate(spec);
  const Rect sup = support(spec);
  std::uint64_t n = sup.site_count();
  if (n > guard_sites)
    throw ResourceLimitError("enumerate_indicator: support has " + std::to_string(n) +
                             " sites, guard is " + std::to_string(guard_sites));
  IndicatorPoly poly;
  poly.spec = spec;
  poly.sites = n;
  poly.count.assign(n + 1, 0);
  const std::uint64_t total = 1ULL << n;
  int workers = resolve_threads(0);
  std::vector<std::vector<std::uint64_t>> partial(static_cast<std::size_t>(workers),
                                                  std::vector<std::uint64_t>(n + 1, 0));
  parallel_ranges(0, total, workers, [&](int w, std::uint64_t b, std::uint64_t e) {
    auto& counts = partial[static_cast<std::size_t>(w)];
    for (std::uint64_t mask = b; mask < e; ++mask) {
      Configuration cfg = Configuration::from_bit_mask(sup, mask);
      if (evaluate(spec, cfg)) ++counts[static_cast<std::uint64_t>(std::popcount(mask))];
    }
  });
  for (const auto& counts : partial)
    for (std::size_t k = 0; k <= n; ++k) poly.count[k] += counts[k];
  return poly;
}

Rational exact_probability(const IndicatorPoly& poly, const Rational& p) {
  if (p < 0 || p > 1) throw std::invalid_argument("exact_probability: p outside [0,1]");
  const std::uint64_t n = poly.sites;
  const Rational q = 1 - p;
  // powers p^k and q^(n-k)
  std::vector<Rational> pk(n + 1), qk(n + 1);
  pk[0] = 1;
  qk[0] = 1;
  for (std::uint64_t i = 1; i <= n; ++i) {
    pk[i] = pk[i - 1] * p;
    qk[i] = qk[i - 1] * q;
  }
  Rational total = 0;
  for (std::uint64_t k = 0; k <= n; ++k) {
    if (poly.count[k] == 0) continue;
    total += Rational(poly.count[k]) * pk[k] * qk[n - k];
  }
  return total;
}

Rational exact_probability(const EventSpec& spec, const Rational& p, std::uint64_t guard_sites) {
  return exact_probability(enumerate_indicator(spec, guard_sites), p);
}

namespace {

// decimal-only integer parse; avoids the octal reading of leading zeros
boost::multiprecision::cpp_int parse_decimal_int(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_rational: empty integer");
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) throw std::invalid_argument("parse_rational: bare sign");
  boost::multiprecision::cpp_int v = 0;
  for (; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9')
      throw std::invalid_argument("parse_rational: bad digit in '" + text + "'");
    v = v * 10 + (text[i] - '0');
  }
  return negative ? -v : v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_rational: empty");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    auto num = parse_decimal_int(text.substr(0, slash));
    auto den = parse_decimal_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
    return Rational(num, den);
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(parse_decimal_int(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  std::size_t frac_len = text.size() - dot - 1;
  if (digits.empty() || digits == "-" || digits == "+")
    throw std::invalid_argument("parse_rational: bad decimal '" + text + "'");
  auto num = parse_decimal_int(digits);
  boost::multiprecision::cpp_int den = 1;
  for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
  return Rational(num, den);
}

std::string rational_to_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

}  // namespace perc
