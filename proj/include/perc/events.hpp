#pragma once

#include <string>

#include "perc/cluster.hpp"
#include "perc/configuration.hpp"
#include "perc/geometry.hpp"

namespace perc {

enum class EventKind { two_arms, a2, crossing_v, one_arm, point_pair, e1, f2, f3, good };

// Whether the origin participates in the two-arms clustering. Including it is
// the default (an open origin can merge the two arms into one cluster).
enum class OriginPolicy { include_origin, exclude_origin };

// Parameterized event descriptor with a canonical textual form, e.g.
//   two_arms(d=2,n=16)   a2(d=3,m=4,n=12)   crossing_v(d=2,k=1,m=1)
//   e1(d=2,n=2,M=2)      point_pair(d=2,n=9,x=1:0,y=0:1)   good(d=2,n=2,M=2)
struct EventSpec {
  EventKind kind = EventKind::two_arms;
  int d = 2;
  Coord n = 0;
  Coord m = 0;
  Coord k = 0;
  Coord M = 0;
  Point x;            // point_pair endpoint / good coarse site
  Point y;            // point_pair endpoint
  int axis = -1;      // crossing direction, 0-based; -1 means last axis
  Point origin;       // crossing rectangle translation (zero if unset)
  OriginPolicy origin_policy = OriginPolicy::include_origin;

  std::string canonical() const;
  static EventSpec parse(const std::string& text);

  friend bool operator==(const EventSpec&, const EventSpec&) = default;
};

// Throws std::invalid_argument when parameters violate the event preconditions.
void validate(const EventSpec& spec);

// Minimal site set (always a rectangle here) the detector reads.
Rect support(const EventSpec& spec);

bool evaluate(const EventSpec& spec, const Configuration& cfg);

// Individual detectors. All are pure functions of the configuration and
// throw std::invalid_argument if the needed region is not inside cfg.region().

// >= 2 distinct open clusters of Lambda(n), each holding an open neighbour of
// the origin and a site of the boundary. The origin itself is clustered too
// unless the policy excludes it.
bool two_arms(const Configuration& cfg, Coord n,
              OriginPolicy policy = OriginPolicy::include_origin);

// >= 2 distinct open clusters of Lambda(n) connecting Lambda(m) with the
// boundary of Lambda(n). `center` translates the whole picture.
bool a2(const Configuration& cfg, Coord m, Coord n);
bool a2_at(const Configuration& cfg, const Point& center, Coord m, Coord n);

// Open crossing of [0,m]^{d-1} x [0,k] along `axis` (k is the extent on the
// crossing axis), translated by rect_origin.
bool crossing_v(const Configuration& cfg, Coord k, Coord m);
bool crossing_v(const Configuration& cfg, Coord k, Coord m, const Point& rect_origin, int axis);

// Lambda(m) connected to the boundary of Lambda(n) inside Lambda(n).
bool one_arm(const Configuration& cfg, Coord m, Coord n);
bool one_arm_at(const Configuration& cfg, const Point& center, Coord m, Coord n);

bool point_pair(const Configuration& cfg, const Point& x, const Point& y, const Box& box);

// No open top-to-bottom crossing of the slab
// [-8M^2 n, 8M^2 n]^{d-1} x [-8Mn+1, 8Mn-1]  (the closed-barrier event).
bool event_e1(const Configuration& cfg, Coord n, Coord M);

// Open path from [-8Mn, 8Mn]^{d-1} x {8Mn} to the plane z_d = 8M^2 n inside
// [-8M^2 n, 8M^2 n]^{d-1} x [8Mn, 8M^2 n]; f3 is the mirror image through z_d = 0.
bool event_f2(const Configuration& cfg, Coord n, Coord M);
bool event_f3(const Configuration& cfg, Coord n, Coord M);

// Number of distinct clusters of Lambda(center;n) joining Lambda(center;m) to
// the boundary of Lambda(center;n), early-exited at `cap`. a2 == (count >= 2),
// one_arm == (count >= 1).
int crossing_cluster_count(const Configuration& cfg, const Point& center, Coord m, Coord n,
                           int cap);

std::string to_string(EventKind kind);

}  // namespace perc
