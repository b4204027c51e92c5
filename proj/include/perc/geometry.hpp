#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace perc {

using Coord = std::int64_t;

// Compile-time cap on the lattice dimension. Everything is runtime-d below this.
inline constexpr int kMaxDim = 4;

struct Point {
  std::array<Coord, kMaxDim> c{};
  int dim = 0;

  Point() = default;
  Point(std::initializer_list<Coord> coords) {
    if (coords.size() == 0 || coords.size() > kMaxDim)
      throw std::invalid_argument("Point: dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    dim = static_cast<int>(coords.size());
    int i = 0;
    for (Coord v : coords) c[i++] = v;
  }

  static Point zero(int d) {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("Point::zero: bad dimension");
    Point p;
    p.dim = d;
    return p;
  }

  Coord& operator[](int i) { return c[i]; }
  Coord operator[](int i) const { return c[i]; }

  friend bool operator==(const Point&, const Point&) = default;

  Point operator+(const Point& o) const {
    Point r = *this;
    for (int i = 0; i < dim; ++i) r.c[i] += o.c[i];
    return r;
  }
  Point operator-(const Point& o) const {
    Point r = *this;
    for (int i = 0; i < dim; ++i) r.c[i] -= o.c[i];
    return r;
  }
  Point scaled(Coord k) const {
    Point r = *this;
    for (int i = 0; i < dim; ++i) r.c[i] *= k;
    return r;
  }
};

// ||z||_inf
inline Coord chebyshev(const Point& z) {
  Coord m = 0;
  for (int i = 0; i < z.dim; ++i) {
    Coord a = z.c[i] < 0 ? -z.c[i] : z.c[i];
    if (a > m) m = a;
  }
  return m;
}

inline Coord chebyshev(const Point& a, const Point& b) { return chebyshev(a - b); }

inline Coord l1_norm(const Point& z) {
  Coord s = 0;
  for (int i = 0; i < z.dim; ++i) s += z.c[i] < 0 ? -z.c[i] : z.c[i];
  return s;
}

// The 2d unit vectors +-e_i.
inline std::vector<Point> axis_neighbours(int d) {
  std::vector<Point> out;
  out.reserve(2 * static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    for (int s : {-1, +1}) {
      Point p = Point::zero(d);
      p.c[i] = s;
      out.push_back(p);
    }
  }
  return out;
}

inline std::vector<Point> neighbours(const Point& z) {
  std::vector<Point> out;
  out.reserve(2 * static_cast<std::size_t>(z.dim));
  for (int i = 0; i < z.dim; ++i) {
    for (int s : {-1, +1}) {
      Point p = z;
      p.c[i] += s;
      out.push_back(p);
    }
  }
  return out;
}

inline std::string to_string(const Point& z) {
  std::string s = "(";
  for (int i = 0; i < z.dim; ++i) {
    if (i) s += ",";
    s += std::to_string(z.c[i]);
  }
  s += ")";
  return s;
}

struct PointHash {
  std::size_t operator()(const Point& z) const noexcept {
    std::uint64_t h = 0x6a09e667f3bcc909ULL + static_cast<std::uint64_t>(z.dim);
    for (int i = 0; i < z.dim; ++i) {
      std::uint64_t v = static_cast<std::uint64_t>(z.c[i]) + 0x9e3779b97f4a7c15ULL;
      v ^= v >> 30;
      v *= 0xbf58476d1ce4e5b9ULL;
      h = (h ^ v) * 0x94d049bb133111ebULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

// Product of closed integer intervals [lo_i, hi_i].
struct Rect {
  std::array<Coord, kMaxDim> lo{};
  std::array<Coord, kMaxDim> hi{};
  int dim = 0;

  Rect() = default;
  Rect(std::initializer_list<Coord> los, std::initializer_list<Coord> his) {
    if (los.size() != his.size() || los.size() == 0 || los.size() > kMaxDim)
      throw std::invalid_argument("Rect: bad interval lists");
    dim = static_cast<int>(los.size());
    int i = 0;
    for (Coord v : los) lo[i++] = v;
    i = 0;
    for (Coord v : his) hi[i++] = v;
    validate();
  }
  Rect(const Point& a, const Point& b) {
    if (a.dim != b.dim || a.dim == 0) throw std::invalid_argument("Rect: corner dim mismatch");
    dim = a.dim;
    lo = a.c;
    hi = b.c;
    validate();
  }

  void validate() const {
    for (int i = 0; i < dim; ++i)
      if (lo[i] > hi[i]) throw std::invalid_argument("Rect: lo > hi on axis " + std::to_string(i));
  }

  static Rect cube(int d, Coord a, Coord b) {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("Rect::cube: bad dimension");
    Rect r;
    r.dim = d;
    for (int i = 0; i < d; ++i) {
      r.lo[i] = a;
      r.hi[i] = b;
    }
    r.validate();
    return r;
  }

  friend bool operator==(const Rect&, const Rect&) = default;

  Coord side(int axis) const { return hi[axis] - lo[axis] + 1; }

  bool contains(const Point& z) const {
    if (z.dim != dim) return false;
    for (int i = 0; i < dim; ++i)
      if (z.c[i] < lo[i] || z.c[i] > hi[i]) return false;
    return true;
  }

  bool contains(const Rect& r) const {
    if (r.dim != dim) return false;
    for (int i = 0; i < dim; ++i)
      if (r.lo[i] < lo[i] || r.hi[i] > hi[i]) return false;
    return true;
  }

  bool intersects(const Rect& r) const {
    if (r.dim != dim) return false;
    for (int i = 0; i < dim; ++i)
      if (r.hi[i] < lo[i] || r.lo[i] > hi[i]) return false;
    return true;
  }

  std::uint64_t site_count() const {
    unsigned __int128 n = 1;
    for (int i = 0; i < dim; ++i) {
      n *= static_cast<unsigned __int128>(side(i));
      if (n > static_cast<unsigned __int128>(UINT64_MAX))
        throw std::overflow_error("Rect::site_count overflow");
    }
    return static_cast<std::uint64_t>(n);
  }

  // Degenerate sub-rectangle where the given axis is pinned to lo (or hi).
  Rect face(int axis, bool high) const {
    Rect f = *this;
    if (high)
      f.lo[axis] = f.hi[axis];
    else
      f.hi[axis] = f.lo[axis];
    return f;
  }

  Rect translated(const Point& v) const {
    Rect r = *this;
    for (int i = 0; i < dim; ++i) {
      r.lo[i] += v.c[i];
      r.hi[i] += v.c[i];
    }
    return r;
  }

  // Materializes every site. Intended for faces, small boxes and tests.
  std::vector<Point> sites() const;
};

// Sup-norm box Lambda(center; radius) = {z : ||z - center||_inf <= radius}.
struct Box {
  Point center;
  Coord radius = 0;

  Box() = default;
  Box(const Point& c, Coord r) : center(c), radius(r) {
    if (r < 0) throw std::invalid_argument("Box: negative radius");
  }

  // Lambda(n) centered at the origin.
  static Box centered(int d, Coord n) { return Box(Point::zero(d), n); }

  int dim() const { return center.dim; }

  Rect rect() const {
    Rect r;
    r.dim = center.dim;
    for (int i = 0; i < r.dim; ++i) {
      r.lo[i] = center.c[i] - radius;
      r.hi[i] = center.c[i] + radius;
    }
    return r;
  }

  bool contains(const Point& z) const { return chebyshev(z, center) <= radius; }
  bool on_boundary(const Point& z) const { return chebyshev(z, center) == radius; }

  // Per-axis arithmetic form of Lambda(c1;r1) >= Lambda(c2;r2) as site sets.
  bool contains_box(const Box& b) const {
    if (b.radius > radius) return false;
    return chebyshev(center, b.center) <= radius - b.radius;
  }

  std::uint64_t site_count() const { return rect().site_count(); }

  std::vector<Point> sites() const { return rect().sites(); }
  std::vector<Point> boundary_sites() const;
};

// Row-major (last axis fastest) linearization of a Rect.
struct RectIndexer {
  Rect rect;
  std::array<std::uint64_t, kMaxDim> stride{};
  std::uint64_t size = 0;

  RectIndexer() = default;
  explicit RectIndexer(const Rect& r) : rect(r) {
    size = r.site_count();
    std::uint64_t s = 1;
    for (int i = r.dim - 1; i >= 0; --i) {
      stride[static_cast<std::size_t>(i)] = s;
      s *= static_cast<std::uint64_t>(r.side(i));
    }
  }

  std::uint64_t index(const Point& z) const {
    std::uint64_t idx = 0;
    for (int i = 0; i < rect.dim; ++i)
      idx += static_cast<std::uint64_t>(z.c[i] - rect.lo[i]) * stride[static_cast<std::size_t>(i)];
    return idx;
  }

  Point point(std::uint64_t idx) const {
    Point z = Point::zero(rect.dim);
    for (int i = 0; i < rect.dim; ++i) {
      std::uint64_t q = idx / stride[static_cast<std::size_t>(i)];
      z.c[i] = rect.lo[i] + static_cast<Coord>(q % static_cast<std::uint64_t>(rect.side(i)));
    }
    return z;
  }
};

// Allocation-free row-major iteration.
template <class Fn>
void for_each_site(const Rect& r, Fn&& fn) {
  const std::uint64_t n = r.site_count();
  Point z = Point::zero(r.dim);
  for (int i = 0; i < r.dim; ++i) z.c[i] = r.lo[i];
  for (std::uint64_t k = 0; k < n; ++k) {
    fn(z);
    for (int i = r.dim - 1; i >= 0; --i) {
      if (z.c[i] < r.hi[i]) {
        ++z.c[i];
        break;
      }
      z.c[i] = r.lo[i];
    }
  }
}

// Union of rectangles; used where a connectivity region is not a single box.
struct RegionUnion {
  std::vector<Rect> parts;

  RegionUnion() = default;
  explicit RegionUnion(std::vector<Rect> rs) : parts(std::move(rs)) {
    if (parts.empty()) throw std::invalid_argument("RegionUnion: empty");
    for (const Rect& r : parts)
      if (r.dim != parts.front().dim) throw std::invalid_argument("RegionUnion: dim mismatch");
  }

  int dim() const { return parts.front().dim; }

  bool contains(const Point& z) const {
    for (const Rect& r : parts)
      if (r.contains(z)) return true;
    return false;
  }

  Rect bounding_rect() const {
    Rect b = parts.front();
    for (const Rect& r : parts)
      for (int i = 0; i < b.dim; ++i) {
        if (r.lo[i] < b.lo[i]) b.lo[i] = r.lo[i];
        if (r.hi[i] > b.hi[i]) b.hi[i] = r.hi[i];
      }
    return b;
  }
};

}  // namespace perc
