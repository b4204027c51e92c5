#include "perc/events.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <unordered_set>

#include "perc/renorm.hpp"

namespace perc {

namespace {

// Windows above this size switch the arm detectors from dense union-find
// labeling to frontier growth with hash-set bookkeeping. The env override is
// a tuning/testing knob, not part of the CLI surface.
constexpr std::uint64_t kDenseDetectorSiteLimit = 16'777'216;
constexpr std::uint64_t kSparseVisitLimit = 16'777'216;

std::uint64_t dense_detector_limit() {
  if (const char* env = std::getenv("PERC_DENSE_DETECTOR_LIMIT")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDenseDetectorSiteLimit;
}

template <class OpenFn, class SrcFn, class TgtFn>
int dense_cluster_count(const Rect& window, OpenFn&& open, SrcFn&& is_src, TgtFn&& is_tgt,
                        int cap) {
  ClusterLabels ls = detail::label_impl(window, open);
  if (ls.cluster_count == 0) return 0;
  std::vector<std::uint8_t> meets_src(static_cast<std::size_t>(ls.cluster_count), 0);
  std::vector<std::uint8_t> meets_tgt(static_cast<std::size_t>(ls.cluster_count), 0);
  const int d = window.dim;
  Point z = Point::zero(d);
  for (int i = 0; i < d; ++i) z.c[i] = window.lo[i];
  for (std::uint64_t k = 0; k < ls.indexer.size; ++k) {
    std::int32_t l = ls.label[k];
    if (l >= 0) {
      if (is_src(z)) meets_src[static_cast<std::size_t>(l)] = 1;
      if (is_tgt(z)) meets_tgt[static_cast<std::size_t>(l)] = 1;
    }
    for (int a = d - 1; a >= 0; --a) {
      if (z.c[a] < window.hi[a]) {
        ++z.c[a];
        break;
      }
      z.c[a] = window.lo[a];
    }
  }
  int count = 0;
  for (std::int32_t l = 0; l < ls.cluster_count; ++l) {
    if (meets_src[static_cast<std::size_t>(l)] && meets_tgt[static_cast<std::size_t>(l)]) {
      if (++count >= cap) break;
    }
  }
  return count;
}

// Frontier growth: explores only clusters touching the sources, so huge
// windows never get materialized. Closed sites are remembered too, as a
// one-shot openness cache.
template <class OpenFn, class TgtFn>
int sparse_cluster_count(const Rect& window, OpenFn&& open, std::span<const Point> sources,
                         TgtFn&& is_tgt, int cap) {
  std::unordered_set<Point, PointHash> visited;
  std::vector<Point> queue;
  int count = 0;
  for (const Point& s : sources) {
    if (!window.contains(s) || visited.contains(s)) continue;
    visited.insert(s);
    if (!open(s)) continue;
    bool hit = is_tgt(s);
    queue.clear();
    queue.push_back(s);
    std::size_t head = 0;
    while (head < queue.size()) {
      Point z = queue[head++];
      for (int a = 0; a < window.dim; ++a) {
        for (int sg = -1; sg <= 1; sg += 2) {
          Point nb = z;
          nb.c[a] += sg;
          if (nb.c[a] < window.lo[a] || nb.c[a] > window.hi[a]) continue;
          if (visited.contains(nb)) continue;
          if (visited.size() >= kSparseVisitLimit)
            throw ResourceLimitError("frontier growth exceeded visit limit");
          visited.insert(nb);
          if (!open(nb)) continue;
          if (is_tgt(nb)) hit = true;
          queue.push_back(nb);
        }
      }
    }
    if (hit && ++count >= cap) return count;
  }
  return count;
}

void require_region(const Configuration& cfg, const Rect& needed, const char* what) {
  if (!cfg.region().contains(needed))
    throw std::invalid_argument(std::string(what) + ": support not inside configuration region");
}

bool flood_reaches_faces(const Configuration& cfg, const Rect& window,
                         const std::vector<Point>& sources, int axis, Coord target_coord) {
  detail::Flood flood(window);
  auto open = [&](const Point& z) { return cfg.open_unchecked(z); };
  auto tgt = [&](const Point& z) { return z.c[axis] == target_coord; };
  return flood.reaches(open, sources, tgt);
}

}  // namespace

int crossing_cluster_count(const Configuration& cfg, const Point& center, Coord m, Coord n,
                           int cap) {
  if (m < 0 || m >= n) throw std::invalid_argument("crossing_cluster_count: need 0 <= m < n");
  Box outer(center, n);
  require_region(cfg, outer.rect(), "crossing_cluster_count");
  auto is_src = [&](const Point& z) { return chebyshev(z, center) <= m; };
  auto is_tgt = [&](const Point& z) { return chebyshev(z, center) == n; };
  auto open = [&](const Point& z) { return cfg.open_unchecked(z); };
  if (outer.site_count() <= dense_detector_limit())
    return dense_cluster_count(outer.rect(), open, is_src, is_tgt, cap);
  std::vector<Point> sources = Box(center, m).sites();
  return sparse_cluster_count(outer.rect(), open, sources, is_tgt, cap);
}

bool two_arms(const Configuration& cfg, Coord n, OriginPolicy policy) {
  if (n < 1) throw std::invalid_argument("two_arms: need n >= 1");
  const int d = cfg.dim();
  Box outer = Box::centered(d, n);
  require_region(cfg, outer.rect(), "two_arms");
  const Point origin = Point::zero(d);
  auto open = [&](const Point& z) {
    if (policy == OriginPolicy::exclude_origin && z == origin) return false;
    return cfg.open_unchecked(z);
  };
  auto is_src = [&](const Point& z) { return l1_norm(z) == 1; };
  auto is_tgt = [&](const Point& z) { return chebyshev(z) == n; };
  if (outer.site_count() <= dense_detector_limit())
    return dense_cluster_count(outer.rect(), open, is_src, is_tgt, 2) >= 2;
  std::vector<Point> sources = axis_neighbours(d);
  return sparse_cluster_count(outer.rect(), open, sources, is_tgt, 2) >= 2;
}

bool a2(const Configuration& cfg, Coord m, Coord n) {
  return a2_at(cfg, Point::zero(cfg.dim()), m, n);
}

bool a2_at(const Configuration& cfg, const Point& center, Coord m, Coord n) {
  return crossing_cluster_count(cfg, center, m, n, 2) >= 2;
}

bool one_arm(const Configuration& cfg, Coord m, Coord n) {
  return one_arm_at(cfg, Point::zero(cfg.dim()), m, n);
}

bool one_arm_at(const Configuration& cfg, const Point& center, Coord m, Coord n) {
  return crossing_cluster_count(cfg, center, m, n, 1) >= 1;
}

bool crossing_v(const Configuration& cfg, Coord k, Coord m) {
  return crossing_v(cfg, k, m, Point::zero(cfg.dim()), cfg.dim() - 1);
}

bool crossing_v(const Configuration& cfg, Coord k, Coord m, const Point& rect_origin, int axis) {
  const int d = cfg.dim();
  if (k < 1 || m < 1) throw std::invalid_argument("crossing_v: need k, m >= 1");
  if (axis < 0 || axis >= d) throw std::invalid_argument("crossing_v: bad axis");
  Rect rect;
  rect.dim = d;
  for (int i = 0; i < d; ++i) {
    rect.lo[i] = rect_origin.c[i];
    rect.hi[i] = rect_origin.c[i] + (i == axis ? k : m);
  }
  require_region(cfg, rect, "crossing_v");
  std::vector<Point> bottom = rect.face(axis, false).sites();
  return flood_reaches_faces(cfg, rect, bottom, axis, rect.hi[axis]);
}

bool point_pair(const Configuration& cfg, const Point& x, const Point& y, const Box& box) {
  if (!box.contains(x) || !box.contains(y))
    throw std::invalid_argument("point_pair: endpoints must lie in the box");
  require_region(cfg, box.rect(), "point_pair");
  const Point u[1] = {x};
  const Point v[1] = {y};
  return connected(cfg, u, v, box.rect());
}

namespace {

Rect e1_slab(int d, Coord n, Coord M) {
  Rect r = Rect::cube(d, -8 * M * M * n, 8 * M * M * n);
  r.lo[d - 1] = -8 * M * n + 1;
  r.hi[d - 1] = 8 * M * n - 1;
  return r;
}

Rect f_box(int d, Coord n, Coord M, bool upper) {
  Rect r = Rect::cube(d, -8 * M * M * n, 8 * M * M * n);
  if (upper) {
    r.lo[d - 1] = 8 * M * n;
    r.hi[d - 1] = 8 * M * M * n;
  } else {
    r.lo[d - 1] = -8 * M * M * n;
    r.hi[d - 1] = -8 * M * n;
  }
  return r;
}

void require_barrier_params(Coord n, Coord M, const char* what) {
  // The slab/box geometry (and containment (E1 and F2 and F3) => A2) is
  // sound for every n >= 1; no reason to demand more here.
  if (n < 1 || M < 2) throw std::invalid_argument(std::string(what) + ": need n >= 1, M >= 2");
}

bool f_event(const Configuration& cfg, Coord n, Coord M, bool upper) {
  require_barrier_params(n, M, "event_f");
  const int d = cfg.dim();
  Rect box = f_box(d, n, M, upper);
  require_region(cfg, box, "event_f");
  Rect src = Rect::cube(d, -8 * M * n, 8 * M * n);
  Coord inner = upper ? 8 * M * n : -8 * M * n;
  src.lo[d - 1] = inner;
  src.hi[d - 1] = inner;
  Coord target = upper ? 8 * M * M * n : -8 * M * M * n;
  return flood_reaches_faces(cfg, box, src.sites(), d - 1, target);
}

}  // namespace

bool event_e1(const Configuration& cfg, Coord n, Coord M) {
  require_barrier_params(n, M, "event_e1");
  const int d = cfg.dim();
  Rect slab = e1_slab(d, n, M);
  require_region(cfg, slab, "event_e1");
  std::vector<Point> top = slab.face(d - 1, true).sites();
  return !flood_reaches_faces(cfg, slab, top, d - 1, slab.lo[d - 1]);
}

bool event_f2(const Configuration& cfg, Coord n, Coord M) { return f_event(cfg, n, M, true); }
bool event_f3(const Configuration& cfg, Coord n, Coord M) { return f_event(cfg, n, M, false); }

void validate(const EventSpec& s) {
  if (s.d < 2 || s.d > kMaxDim)
    throw std::invalid_argument("EventSpec: d must be in [2, " + std::to_string(kMaxDim) + "]");
  switch (s.kind) {
    case EventKind::two_arms:
      if (s.n < 1) throw std::invalid_argument("two_arms: need n >= 1");
      break;
    case EventKind::a2:
    case EventKind::one_arm:
      if (s.m < 0 || s.m >= s.n) throw std::invalid_argument("a2/one_arm: need 0 <= m < n");
      break;
    case EventKind::crossing_v:
      if (s.k < 1 || s.m < 1) throw std::invalid_argument("crossing_v: need k, m >= 1");
      if (s.axis < -1 || s.axis >= s.d) throw std::invalid_argument("crossing_v: bad axis");
      break;
    case EventKind::point_pair: {
      if (s.n < 0) throw std::invalid_argument("point_pair: need n >= 0");
      Box b = Box::centered(s.d, s.n);
      if (s.x.dim != s.d || s.y.dim != s.d || !b.contains(s.x) || !b.contains(s.y))
        throw std::invalid_argument("point_pair: endpoints must lie in Lambda(n)");
      break;
    }
    case EventKind::e1:
    case EventKind::f2:
    case EventKind::f3:
      if (s.n < 1 || s.M < 2) throw std::invalid_argument("e1/f2/f3: need n >= 1, M >= 2");
      break;
    case EventKind::good:
      if (s.n < 1 || s.M < 2) throw std::invalid_argument("good: need n >= 1, M >= 2");
      if (s.x.dim != 0 && s.x.dim != s.d) throw std::invalid_argument("good: x dimension mismatch");
      break;
  }
}

Rect support(const EventSpec& s) {
  validate(s);
  switch (s.kind) {
    case EventKind::two_arms:
    case EventKind::a2:
    case EventKind::one_arm:
    case EventKind::point_pair:
      return Box::centered(s.d, s.n).rect();
    case EventKind::crossing_v: {
      int axis = s.axis < 0 ? s.d - 1 : s.axis;
      Rect r;
      r.dim = s.d;
      Point o = s.origin.dim == s.d ? s.origin : Point::zero(s.d);
      for (int i = 0; i < s.d; ++i) {
        r.lo[i] = o.c[i];
        r.hi[i] = o.c[i] + (i == axis ? s.k : s.m);
      }
      return r;
    }
    case EventKind::e1:
      return e1_slab(s.d, s.n, s.M);
    case EventKind::f2:
      return f_box(s.d, s.n, s.M, true);
    case EventKind::f3:
      return f_box(s.d, s.n, s.M, false);
    case EventKind::good: {
      Point x = s.x.dim == s.d ? s.x : Point::zero(s.d);
      return Box(x.scaled(s.n), 16 * s.M * s.n).rect();
    }
  }
  throw std::logic_error("support: unknown event kind");
}

bool evaluate(const EventSpec& s, const Configuration& cfg) {
  validate(s);
  if (cfg.dim() != s.d) throw std::invalid_argument("evaluate: dimension mismatch");
  switch (s.kind) {
    case EventKind::two_arms:
      return two_arms(cfg, s.n, s.origin_policy);
    case EventKind::a2:
      return a2(cfg, s.m, s.n);
    case EventKind::one_arm:
      return one_arm(cfg, s.m, s.n);
    case EventKind::crossing_v: {
      int axis = s.axis < 0 ? s.d - 1 : s.axis;
      Point o = s.origin.dim == s.d ? s.origin : Point::zero(s.d);
      return crossing_v(cfg, s.k, s.m, o, axis);
    }
    case EventKind::point_pair:
      return point_pair(cfg, s.x, s.y, Box::centered(s.d, s.n));
    case EventKind::e1:
      return event_e1(cfg, s.n, s.M);
    case EventKind::f2:
      return event_f2(cfg, s.n, s.M);
    case EventKind::f3:
      return event_f3(cfg, s.n, s.M);
    case EventKind::good: {
      Point x = s.x.dim == s.d ? s.x : Point::zero(s.d);
      return good(cfg, x, s.n, s.M);
    }
  }
  throw std::logic_error("evaluate: unknown event kind");
}

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::two_arms: return "two_arms";
    case EventKind::a2: return "a2";
    case EventKind::crossing_v: return "crossing_v";
    case EventKind::one_arm: return "one_arm";
    case EventKind::point_pair: return "point_pair";
    case EventKind::e1: return "e1";
    case EventKind::f2: return "f2";
    case EventKind::f3: return "f3";
    case EventKind::good: return "good";
  }
  return "?";
}

namespace {

std::string coords_to_text(const Point& p) {
  std::string s;
  for (int i = 0; i < p.dim; ++i) {
    if (i) s += ":";
    s += std::to_string(p.c[i]);
  }
  return s;
}

Point coords_from_text(const std::string& text, int d) {
  Point p = Point::zero(d);
  std::size_t pos = 0;
  for (int i = 0; i < d; ++i) {
    std::size_t next = text.find(':', pos);
    std::string part = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (part.empty()) throw std::invalid_argument("EventSpec: bad coordinate tuple '" + text + "'");
    p.c[i] = std::stoll(part);
    if (next == std::string::npos) {
      if (i != d - 1)
        throw std::invalid_argument("EventSpec: coordinate tuple '" + text + "' has too few entries");
      pos = text.size();
    } else {
      pos = next + 1;
    }
  }
  if (pos < text.size())
    throw std::invalid_argument("EventSpec: coordinate tuple '" + text + "' has too many entries");
  return p;
}

bool is_zero(const Point& p) {
  for (int i = 0; i < p.dim; ++i)
    if (p.c[i] != 0) return false;
  return true;
}

}  // namespace

std::string EventSpec::canonical() const {
  validate(*this);
  std::string s = perc::to_string(kind) + "(d=" + std::to_string(d);
  switch (kind) {
    case EventKind::two_arms:
      s += ",n=" + std::to_string(n);
      if (origin_policy == OriginPolicy::exclude_origin) s += ",origin_policy=exclude";
      break;
    case EventKind::a2:
    case EventKind::one_arm:
      s += ",m=" + std::to_string(m) + ",n=" + std::to_string(n);
      break;
    case EventKind::crossing_v:
      s += ",k=" + std::to_string(k) + ",m=" + std::to_string(m);
      if (axis >= 0 && axis != d - 1) s += ",axis=" + std::to_string(axis);
      if (origin.dim == d && !is_zero(origin)) s += ",origin=" + coords_to_text(origin);
      break;
    case EventKind::point_pair:
      s += ",n=" + std::to_string(n) + ",x=" + coords_to_text(x) + ",y=" + coords_to_text(y);
      break;
    case EventKind::e1:
    case EventKind::f2:
    case EventKind::f3:
      s += ",n=" + std::to_string(n) + ",M=" + std::to_string(M);
      break;
    case EventKind::good:
      s += ",n=" + std::to_string(n) + ",M=" + std::to_string(M);
      if (x.dim == d && !is_zero(x)) s += ",x=" + coords_to_text(x);
      break;
  }
  s += ")";
  return s;
}

EventSpec EventSpec::parse(const std::string& text) {
  std::string t;
  t.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  std::size_t open_paren = t.find('(');
  if (open_paren == std::string::npos || t.back() != ')')
    throw std::invalid_argument("EventSpec: expected name(key=value,...), got '" + text + "'");
  std::string name = t.substr(0, open_paren);
  std::string body = t.substr(open_paren + 1, t.size() - open_paren - 2);

  EventSpec s;
  if (name == "two_arms") s.kind = EventKind::two_arms;
  else if (name == "a2") s.kind = EventKind::a2;
  else if (name == "crossing_v") s.kind = EventKind::crossing_v;
  else if (name == "one_arm") s.kind = EventKind::one_arm;
  else if (name == "point_pair") s.kind = EventKind::point_pair;
  else if (name == "e1") s.kind = EventKind::e1;
  else if (name == "f2") s.kind = EventKind::f2;
  else if (name == "f3") s.kind = EventKind::f3;
  else if (name == "good") s.kind = EventKind::good;
  else throw std::invalid_argument("EventSpec: unknown event '" + name + "'");

  std::vector<std::pair<std::string, std::string>> kv;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t comma = body.find(',', pos);
    std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    pos = comma == std::string::npos ? body.size() : comma + 1;
    if (item.empty()) continue;
    std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("EventSpec: expected key=value, got '" + item + "'");
    kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }

  auto find_val = [&](const std::string& key) -> const std::string* {
    for (const auto& [k2, v] : kv)
      if (k2 == key) return &v;
    return nullptr;
  };
  if (const std::string* v = find_val("d")) s.d = static_cast<int>(std::stoll(*v));
  else throw std::invalid_argument("EventSpec: missing d");

  for (const auto& [key, val] : kv) {
    if (key == "d") continue;
    else if (key == "n") s.n = std::stoll(val);
    else if (key == "m") s.m = std::stoll(val);
    else if (key == "k") s.k = std::stoll(val);
    else if (key == "M") s.M = std::stoll(val);
    else if (key == "axis") s.axis = static_cast<int>(std::stoll(val));
    else if (key == "x") s.x = coords_from_text(val, s.d);
    else if (key == "y") s.y = coords_from_text(val, s.d);
    else if (key == "origin") s.origin = coords_from_text(val, s.d);
    else if (key == "origin_policy") {
      if (val == "include") s.origin_policy = OriginPolicy::include_origin;
      else if (val == "exclude") s.origin_policy = OriginPolicy::exclude_origin;
      else throw std::invalid_argument("EventSpec: origin_policy must be include or exclude");
    } else {
      throw std::invalid_argument("EventSpec: unknown key '" + key + "'");
    }
  }
  validate(s);
  return s;
}

}  // namespace perc
