#include <cmath>

#include "doctest.h"
#include "perc/estimate.hpp"

using namespace perc;

namespace {

// ln C(n,k) for the exact-coverage sum
double log_binom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

TEST_SUITE_BEGIN("estimate");

TEST_CASE("enumeration oracle reproduces the frozen exact values") {
  Rational half(1, 2);
  // golden values computed with an independent brute-force enumerator
  CHECK(exact_probability(EventSpec::parse("two_arms(d=2,n=1)"), half) == Rational(123, 512));
  CHECK(exact_probability(EventSpec::parse("two_arms(d=2,n=1)"), Rational(1, 4)) ==
        Rational(43929, 262144));
  CHECK(exact_probability(EventSpec::parse("two_arms(d=2,n=1)"), Rational(3, 4)) ==
        Rational(24435, 262144));
  CHECK(exact_probability(EventSpec::parse("crossing_v(d=2,k=1,m=1)"), half) == Rational(7, 16));
  CHECK(exact_probability(EventSpec::parse("crossing_v(d=2,k=1,m=2)"), half) == Rational(37, 64));
  CHECK(exact_probability(EventSpec::parse("crossing_v(d=2,k=2,m=1)"), half) == Rational(17, 64));
  CHECK(exact_probability(EventSpec::parse("crossing_v(d=2,k=2,m=2)"), half) ==
        Rational(197, 512));
  CHECK(exact_probability(EventSpec::parse("crossing_v(d=3,k=1,m=1)"), half) ==
        Rational(175, 256));
}

TEST_CASE("exact probabilities at p in {0,1} match the extreme configurations") {
  CHECK(exact_probability(EventSpec::parse("two_arms(d=2,n=1)"), Rational(1)) == 0);
  CHECK(exact_probability(EventSpec::parse("two_arms(d=2,n=1)"), Rational(0)) == 0);
  CHECK(exact_probability(EventSpec::parse("crossing_v(d=2,k=1,m=1)"), Rational(1)) == 1);
  CHECK(exact_probability(EventSpec::parse("crossing_v(d=2,k=1,m=1)"), Rational(0)) == 0);
}

TEST_CASE("enumeration guard rejects oversized supports") {
  // Lambda(3) in d=2 has 49 sites
  CHECK_THROWS_AS(enumerate_indicator(EventSpec::parse("two_arms(d=2,n=3)"), 28),
                  ResourceLimitError);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("1/2") == Rational(1, 2));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational(".5") == Rational(1, 2));
  CHECK(parse_rational("1") == 1);
  CHECK(parse_rational("0.592746") == Rational(592746, 1000000));
  CHECK(rational_to_string(Rational(7, 16)) == "7/16");
  CHECK(rational_to_string(Rational(3)) == "3");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
}

TEST_CASE("estimate_event extremes") {
  auto e1 = estimate_event(EventSpec::parse("crossing_v(d=2,k=1,m=1)"), 1.0, 100, 1);
  CHECK(e1.p_hat == 1.0);
  CHECK(e1.ci_high == 1.0);
  auto e0 = estimate_event(EventSpec::parse("two_arms(d=2,n=1)"), 0.0, 100, 1);
  CHECK(e0.p_hat == 0.0);
  CHECK(e0.ci_low == 0.0);
}

TEST_CASE("tallies are deterministic and thread-count independent") {
  EventSpec spec = EventSpec::parse("two_arms(d=2,n=2)");
  auto a = estimate_event(spec, 0.55, 20000, 7, 0.95, 1);
  auto b = estimate_event(spec, 0.55, 20000, 7, 0.95, 4);
  auto c = estimate_event(spec, 0.55, 20000, 7, 0.95, 16);
  CHECK(a.successes == b.successes);
  CHECK(b.successes == c.successes);
}

TEST_CASE("ten 1k shards merge into exactly the 10k run") {
  EventSpec spec = EventSpec::parse("crossing_v(d=2,k=2,m=2)");
  auto whole = estimate_event(spec, 0.5, 10000, 9);
  Estimate merged;
  for (int s = 0; s < 10; ++s) {
    auto shard = estimate_event(spec, 0.5, 1000, 9, 0.95, 0,
                                static_cast<std::uint64_t>(s) * 1000);
    merged = merge(merged, shard);
  }
  CHECK(merged.trials == whole.trials);
  CHECK(merged.successes == whole.successes);
  CHECK(merged.p_hat == whole.p_hat);
}

TEST_CASE("merge laws") {
  EventSpec spec = EventSpec::parse("crossing_v(d=2,k=1,m=1)");
  auto a = estimate_event(spec, 0.5, 500, 3, 0.95, 0, 0);
  auto b = estimate_event(spec, 0.5, 700, 3, 0.95, 0, 500);
  Estimate empty;
  CHECK(merge(a, empty).successes == a.successes);  // identity
  auto ab = merge(a, b);
  auto ba = merge(b, a);
  CHECK(ab.successes == ba.successes);  // commutative tallies
  CHECK(ab.trials == ba.trials);

  auto other = estimate_event(EventSpec::parse("crossing_v(d=2,k=1,m=2)"), 0.5, 100, 3);
  CHECK_THROWS_AS(merge(a, other), std::invalid_argument);   // different spec
  CHECK_THROWS_AS(merge(a, a), std::invalid_argument);       // overlapping range
}

TEST_CASE("wilson interval pins degenerate sides and stays nontrivial") {
  auto [lo0, hi0] = wilson_interval(0, 20, 0.95);
  CHECK(lo0 == 0.0);
  CHECK(hi0 == doctest::Approx(0.16112515805281938).epsilon(1e-12));
  auto [lo1, hi1] = wilson_interval(20, 20, 0.95);
  CHECK(hi1 == 1.0);
  CHECK(lo1 == doctest::Approx(0.8388748419471806).epsilon(1e-12));
  // reference values from an independent implementation
  auto [lo, hi] = wilson_interval(35, 200, 0.95);
  CHECK(lo == doctest::Approx(0.12860515066273331).epsilon(1e-12));
  CHECK(hi == doctest::Approx(0.23364431148248993).epsilon(1e-12));
  auto [lo999, hi999] = wilson_interval(1, 10, 0.999);
  CHECK(lo999 == doctest::Approx(0.007896965701467085).epsilon(1e-9));
  CHECK(hi999 == doctest::Approx(0.6079967045215784).epsilon(1e-9));
}

TEST_CASE("interval brackets the point estimate") {
  for (std::uint64_t s : {0ull, 1ull, 7ull, 100ull, 199ull, 200ull}) {
    auto [lo, hi] = wilson_interval(s, 200, 0.95);
    double ph = static_cast<double>(s) / 200.0;
    CHECK(lo <= ph);
    CHECK(ph <= hi);
  }
}

TEST_CASE("wilson 95% exact coverage at n=200, p=0.3 lies in [0.94, 0.96]") {
  // exact binomial sum, no Monte Carlo
  double coverage = 0.0;
  for (int k = 0; k <= 200; ++k) {
    auto [lo, hi] = wilson_interval(static_cast<std::uint64_t>(k), 200, 0.95);
    if (lo <= 0.3 && 0.3 <= hi)
      coverage += std::exp(log_binom(200, k) + k * std::log(0.3) + (200 - k) * std::log(0.7));
  }
  CHECK(coverage == doctest::Approx(0.946634).epsilon(1e-4));
  CHECK(coverage >= 0.94);
  CHECK(coverage <= 0.96);
}

TEST_CASE("wilson coverage simulation: 1e4 replications at n=200, p=0.3") {
  SiteSampler coin(0.3, 20260809, 0);
  std::uint64_t covered = 0;
  for (std::uint64_t rep = 0; rep < 10000; ++rep) {
    std::uint64_t k = 0;
    for (Coord i = 0; i < 200; ++i) {
      Point z{static_cast<Coord>(rep), i};
      k += coin.open(z) ? 1 : 0;
    }
    auto [lo, hi] = wilson_interval(k, 200, 0.95);
    if (lo <= 0.3 && 0.3 <= hi) ++covered;
  }
  double rate = static_cast<double>(covered) / 10000.0;
  CHECK(rate >= 0.94);
  CHECK(rate <= 0.96);
}

TEST_CASE("normal quantile reference points") {
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-8));
  CHECK(normal_quantile(0.9995) == doctest::Approx(3.2905267314919255).epsilon(1e-8));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(normal_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-8));
  CHECK_THROWS_AS(normal_quantile(0.0), std::invalid_argument);
}

TEST_CASE("Monte Carlo agrees with the oracle on the 2x2 crossing") {
  EventSpec spec = EventSpec::parse("crossing_v(d=2,k=1,m=1)");
  double exact = 7.0 / 16.0;
  auto est = estimate_event(spec, 0.5, 100000, 2024);
  double band = 3.2905 * std::sqrt(exact * (1 - exact) / 100000.0);
  CHECK(std::abs(est.p_hat - exact) <= band);
}

TEST_CASE("Monte Carlo agrees with the oracle on two_arms at n=2" * doctest::timeout(120)) {
  // the largest enumerable arm event: 2^25 configurations
  EventSpec spec = EventSpec::parse("two_arms(d=2,n=2)");
  IndicatorPoly poly = enumerate_indicator(spec);
  double exact = static_cast<double>(exact_probability(poly, Rational(1, 2)));
  CHECK(exact > 0.0);
  CHECK(exact < 1.0);
  auto est = estimate_event(spec, 0.5, 100000, 2025);
  double band = 3.2905 * std::sqrt(exact * (1 - exact) / 100000.0);
  CHECK(std::abs(est.p_hat - exact) <= band);
}

TEST_CASE("adaptive estimation reaches the requested relative width") {
  EventSpec spec = EventSpec::parse("crossing_v(d=2,k=2,m=2)");
  auto est = estimate_to_relative_width(spec, 0.5, 0.1, 1000000, 5);
  double half = (est.ci_high - est.ci_low) / 2.0;
  CHECK(half <= 0.1 * est.p_hat);
  CHECK(est.trials <= 1000000);
  // impossible target stops at the cap
  auto capped = estimate_to_relative_width(spec, 0.5, 1e-6, 2048, 5);
  CHECK(capped.trials == 2048);
}

TEST_SUITE_END();
