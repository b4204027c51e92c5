#include "perc/geometry.hpp"

namespace perc {

std::vector<Point> Rect::sites() const {
  std::uint64_t n = site_count();
  std::vector<Point> out;
  out.reserve(n);
  Point z = Point::zero(dim);
  for (int i = 0; i < dim; ++i) z.c[i] = lo[i];
  for (std::uint64_t k = 0; k < n; ++k) {
    out.push_back(z);
    for (int i = dim - 1; i >= 0; --i) {
      if (z.c[i] < hi[i]) {
        ++z.c[i];
        break;
      }
      z.c[i] = lo[i];
    }
  }
  return out;
}

std::vector<Point> Box::boundary_sites() const {
  if (radius == 0) return {center};
  std::vector<Point> out;
  for (const Point& z : rect().sites())
    if (on_boundary(z)) out.push_back(z);
  return out;
}

}  // namespace perc
