#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "perc/events.hpp"

namespace perc {

// Runtime defaults, overridable through a key=value config file. The
// percolation thresholds are documented literature values for site
// percolation on Z^d; they are external inputs, editable in the file.
struct RunConfig {
  double confidence = 0.95;
  std::uint64_t dense_site_limit = kDefaultDenseSiteLimit;
  std::uint64_t enum_guard_sites = 28;
  OriginPolicy origin_policy = OriginPolicy::include_origin;
  std::map<int, double> p_c = {
      {2, 0.592746},  // site, Z^2
      {3, 0.311608},  // site, Z^3
      {4, 0.196886},  // site, Z^4
  };

  double threshold(int d) const;

  static RunConfig load(const std::string& path);       // throws on parse errors
  static RunConfig load_if_present(const std::string& path);  // missing file -> defaults

  std::string snapshot() const;  // key=value dump, one per line
};

}  // namespace perc
