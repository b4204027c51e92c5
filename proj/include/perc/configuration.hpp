#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "perc/geometry.hpp"
#include "perc/rng.hpp"

namespace perc {

// Thrown when an operation would exceed a configured memory/size guard.
// The CLI maps this to its resource exit code.
class ResourceLimitError : public std::runtime_error {
 public:
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr std::uint64_t kDefaultDenseSiteLimit = 100'000'000;  // 1e8 sites

enum class Storage { dense, lazy };

// Open/closed assignment on a bounded region. Site states are a pure function
// of (seed, trial, coordinates, p); dense and lazy storage agree site by site.
// Immutable after creation; safe to share across threads.
class Configuration {
 public:
  Configuration() = default;

  static Configuration sample(const Rect& region, double p, std::uint64_t seed, std::uint64_t trial,
                              Storage storage = Storage::lazy,
                              std::uint64_t dense_limit = kDefaultDenseSiteLimit);

  // Explicit configurations for constructed examples and enumeration.
  static Configuration from_open_sites(const Rect& region, std::span<const Point> open);
  // Bit i of mask = state of the i-th site in RectIndexer(region) order; needs <= 64 sites.
  static Configuration from_bit_mask(const Rect& region, std::uint64_t mask);

  // Same region/p/seed/trial inside `keep`; an independent stream (salted)
  // outside it. Used for locality checks. Result is lazy.
  Configuration rerandomized_outside(const Rect& keep, std::uint64_t salt) const;

  // Dense copy with identical site states.
  Configuration materialized(std::uint64_t dense_limit = kDefaultDenseSiteLimit) const;

  bool open(const Point& z) const {
    if (!region_.contains(z))
      throw std::out_of_range("Configuration::open: site " + to_string(z) + " outside region");
    return open_unchecked(z);
  }

  bool open_unchecked(const Point& z) const {
    if (bits_) return bit_at(idx_.index(z));
    if (has_mask_ && !keep_.contains(z)) return alt_.open(z);
    return sampler_.open(z);
  }

  const Rect& region() const { return region_; }
  int dim() const { return region_.dim; }
  double p() const { return p_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t trial() const { return trial_; }
  bool is_dense() const { return static_cast<bool>(bits_); }
  bool is_sampled() const { return sampled_; }

 private:
  bool bit_at(std::uint64_t i) const { return ((*bits_)[i >> 6] >> (i & 63)) & 1; }

  Rect region_;
  double p_ = 0.0;
  std::uint64_t seed_ = 0;
  std::uint64_t trial_ = 0;
  bool sampled_ = false;

  SiteSampler sampler_;
  bool has_mask_ = false;
  Rect keep_;
  SiteSampler alt_;

  std::shared_ptr<const std::vector<std::uint64_t>> bits_;
  RectIndexer idx_;
};

}  // namespace perc
