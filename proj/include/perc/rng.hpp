#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "perc/geometry.hpp"

namespace perc {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer. Full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ mix64(v + kGolden));
}

// One uniform 64-bit word per lattice site, a pure function of
// (seed, trial, coordinates). Openness compares that word against a fixed
// threshold, so configurations at p' > p dominate those at p site by site
// when seed and trial are shared.
class SiteSampler {
 public:
  SiteSampler() = default;

  SiteSampler(double p, std::uint64_t seed, std::uint64_t trial) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("SiteSampler: p must be in [0,1]");
    base_ = hash_combine(mix64(seed), trial);
    always_open_ = p >= 1.0;
    threshold_ = threshold_for(p);
  }

  static SiteSampler with_base(double p, std::uint64_t base) {
    SiteSampler s;
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("SiteSampler: p must be in [0,1]");
    s.base_ = base;
    s.always_open_ = p >= 1.0;
    s.threshold_ = threshold_for(p);
    return s;
  }

  // Truncation of p * 2^64; monotone nondecreasing in p.
  static std::uint64_t threshold_for(double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return UINT64_MAX;  // unused, always_open_ short-circuits
    return static_cast<std::uint64_t>(p * 18446744073709551616.0);
  }

  std::uint64_t base() const { return base_; }

  std::uint64_t prefix_push(std::uint64_t h, Coord c) const {
    return hash_combine(h, static_cast<std::uint64_t>(c));
  }

  std::uint64_t draw(const Point& z) const {
    std::uint64_t h = base_;
    for (int i = 0; i < z.dim; ++i) h = hash_combine(h, static_cast<std::uint64_t>(z.c[i]));
    return h;
  }

  bool open_from_draw(std::uint64_t w) const { return always_open_ || w < threshold_; }
  bool open(const Point& z) const { return always_open_ || draw(z) < threshold_; }

 private:
  std::uint64_t base_ = 0;
  std::uint64_t threshold_ = 0;
  bool always_open_ = false;
};

// Small deterministic generator for tests and schedule shuffling; not used
// for site states.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ += kGolden;
    return mix64(state_);
  }
  double next_unit() { return (next() >> 11) * 0x1.0p-53; }
  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace perc
