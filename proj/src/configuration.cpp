#include "perc/configuration.hpp"

#include <limits>

namespace perc {

namespace {

constexpr std::uint64_t kMaskTag = 0x6d61736b7461670fULL;

std::vector<std::uint64_t> make_words(std::uint64_t nsites) {
  return std::vector<std::uint64_t>((nsites + 63) / 64, 0);
}

}  // namespace

Configuration Configuration::sample(const Rect& region, double p, std::uint64_t seed,
                                    std::uint64_t trial, Storage storage,
                                    std::uint64_t dense_limit) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("Configuration::sample: p outside [0,1]");
  Configuration cfg;
  cfg.region_ = region;
  cfg.p_ = p;
  cfg.seed_ = seed;
  cfg.trial_ = trial;
  cfg.sampled_ = true;
  cfg.sampler_ = SiteSampler(p, seed, trial);
  if (storage == Storage::dense) {
    std::uint64_t n = region.site_count();
    if (n > dense_limit)
      throw ResourceLimitError("dense configuration of " + std::to_string(n) +
                               " sites exceeds limit " + std::to_string(dense_limit) +
                               "; use lazy storage");
    cfg.idx_ = RectIndexer(region);
    auto words = make_words(n);
    // Row-major fill, caching the hash prefix over the leading coordinates.
    const int d = region.dim;
    Point z = Point::zero(d);
    for (int i = 0; i < d; ++i) z.c[i] = region.lo[i];
    std::array<std::uint64_t, kMaxDim> prefix{};
    std::uint64_t h = cfg.sampler_.base();
    for (int i = 0; i < d; ++i) {
      h = cfg.sampler_.prefix_push(h, z.c[i]);
      prefix[static_cast<std::size_t>(i)] = h;
    }
    for (std::uint64_t k = 0; k < n; ++k) {
      std::uint64_t w = prefix[static_cast<std::size_t>(d - 1)];
      if (cfg.sampler_.open_from_draw(w)) words[k >> 6] |= 1ULL << (k & 63);
      int axis = d - 1;
      while (axis >= 0) {
        if (z.c[axis] < region.hi[axis]) {
          ++z.c[axis];
          break;
        }
        z.c[axis] = region.lo[axis];
        --axis;
      }
      if (axis < 0) break;  // done
      std::uint64_t base = axis == 0 ? cfg.sampler_.base() : prefix[static_cast<std::size_t>(axis - 1)];
      for (int i = axis; i < d; ++i) {
        base = cfg.sampler_.prefix_push(base, z.c[i]);
        prefix[static_cast<std::size_t>(i)] = base;
      }
    }
    cfg.bits_ = std::make_shared<const std::vector<std::uint64_t>>(std::move(words));
  }
  return cfg;
}

Configuration Configuration::from_open_sites(const Rect& region, std::span<const Point> open) {
  Configuration cfg;
  cfg.region_ = region;
  cfg.p_ = std::numeric_limits<double>::quiet_NaN();
  cfg.idx_ = RectIndexer(region);
  std::uint64_t n = region.site_count();
  if (n > kDefaultDenseSiteLimit)
    throw ResourceLimitError("from_open_sites: region too large for dense storage");
  auto words = make_words(n);
  for (const Point& z : open) {
    if (!region.contains(z))
      throw std::out_of_range("from_open_sites: site " + to_string(z) + " outside region");
    std::uint64_t i = cfg.idx_.index(z);
    words[i >> 6] |= 1ULL << (i & 63);
  }
  cfg.bits_ = std::make_shared<const std::vector<std::uint64_t>>(std::move(words));
  return cfg;
}

Configuration Configuration::from_bit_mask(const Rect& region, std::uint64_t mask) {
  std::uint64_t n = region.site_count();
  if (n > 64) throw std::invalid_argument("from_bit_mask: more than 64 sites");
  Configuration cfg;
  cfg.region_ = region;
  cfg.p_ = std::numeric_limits<double>::quiet_NaN();
  cfg.idx_ = RectIndexer(region);
  cfg.bits_ = std::make_shared<const std::vector<std::uint64_t>>(std::vector<std::uint64_t>{mask});
  return cfg;
}

Configuration Configuration::rerandomized_outside(const Rect& keep, std::uint64_t salt) const {
  if (!sampled_)
    throw std::invalid_argument("rerandomized_outside: needs a sampled configuration");
  if (has_mask_) throw std::invalid_argument("rerandomized_outside: already masked");
  Configuration cfg;
  cfg.region_ = region_;
  cfg.p_ = p_;
  cfg.seed_ = seed_;
  cfg.trial_ = trial_;
  cfg.sampled_ = true;
  cfg.sampler_ = sampler_;
  cfg.has_mask_ = true;
  cfg.keep_ = keep;
  cfg.alt_ = SiteSampler::with_base(p_, hash_combine(hash_combine(sampler_.base(), kMaskTag), salt));
  return cfg;
}

Configuration Configuration::materialized(std::uint64_t dense_limit) const {
  if (bits_) return *this;
  std::uint64_t n = region_.site_count();
  if (n > dense_limit)
    throw ResourceLimitError("materialized: region of " + std::to_string(n) +
                             " sites exceeds limit " + std::to_string(dense_limit));
  Configuration cfg = *this;
  cfg.idx_ = RectIndexer(region_);
  auto words = make_words(n);
  for (std::uint64_t k = 0; k < n; ++k)
    if (open_unchecked(cfg.idx_.point(k))) words[k >> 6] |= 1ULL << (k & 63);
  cfg.bits_ = std::make_shared<const std::vector<std::uint64_t>>(std::move(words));
  return cfg;
}

}  // namespace perc
