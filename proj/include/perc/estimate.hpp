#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "perc/events.hpp"

namespace perc {

using Rational = boost::multiprecision::cpp_rational;

// Two-sided standard normal quantile (Acklam's rational approximation,
// |relative error| < 1.2e-9).
double normal_quantile(double prob);

// Wilson score interval. successes == 0 pins the lower bound to 0 and
// successes == trials pins the upper bound to 1; the opposite side stays a
// nontrivial one-sided bound.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                          double confidence);

struct Estimate {
  EventSpec spec;
  double p = 0.0;
  double confidence = 0.95;
  std::uint64_t seed = 0;
  std::uint64_t trial_offset = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  double wall_time_s = 0.0;  // informational only; outside the determinism contract

  void refresh_interval();
};

// Evaluates the detector on `trials` independent configurations, trial indices
// [trial_offset, trial_offset + trials). Bit-identical tallies for fixed
// (spec, p, trials, seed, trial_offset) regardless of thread count.
Estimate estimate_event(const EventSpec& spec, double p, std::uint64_t trials, std::uint64_t seed,
                        double confidence = 0.95, int threads = 0, std::uint64_t trial_offset = 0);

// Exact tally sums: same spec/p/confidence/seed and disjoint trial ranges.
Estimate merge(const Estimate& a, const Estimate& b);

// Accumulates fixed-size batches until the interval half-width drops below
// rel_width * p_hat, or max_trials is reached (tiny probabilities keep the
// hard cap honest). Batch boundaries are fixed, so tallies stay independent
// of thread count.
Estimate estimate_to_relative_width(const EventSpec& spec, double p, double rel_width,
                                    std::uint64_t max_trials, std::uint64_t seed,
                                    double confidence = 0.95, int threads = 0);

// Indicator counts by number of open sites, over all 2^N configurations of the
// event's support. P(event) = sum_k count[k] p^k (1-p)^(N-k).
struct IndicatorPoly {
  EventSpec spec;
  std::uint64_t sites = 0;
  std::vector<std::uint64_t> count;  // size sites+1
};

inline constexpr std::uint64_t kDefaultEnumGuardSites = 28;

IndicatorPoly enumerate_indicator(const EventSpec& spec,
                                  std::uint64_t guard_sites = kDefaultEnumGuardSites);

Rational exact_probability(const IndicatorPoly& poly, const Rational& p);
Rational exact_probability(const EventSpec& spec, const Rational& p,
                           std::uint64_t guard_sites = kDefaultEnumGuardSites);

// "0.25", ".5", "3/4", "1" -> exact rationals.
Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& r);

}  // namespace perc
