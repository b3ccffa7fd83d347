#include "gimg/geometry.hpp"

#include <algorithm>

namespace gimg {

double signed_area(std::span<const Point2> loop) {
  const std::size_t n = loop.size();
  double a = 0.0;
  for (std::size_t i = 0; i < n; ++i) a += cross(loop[i], loop[(i + 1) % n]);
  return 0.5 * a;
}

Point2 area_centroid(std::span<const Point2> loop) {
  const std::size_t n = loop.size();
  if (n == 0) return {};
  // Shift to the first vertex for conditioning.
  const Point2 o = loop[0];
  double a = 0.0;
  Point2 c{};
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = loop[i] - o;
    const Point2 q = loop[(i + 1) % n] - o;
    const double w = cross(p, q);
    a += w;
    c += w * (p + q);
  }
  if (a == 0.0) {
    Point2 m{};
    for (const auto& p : loop) m += p;
    return (1.0 / static_cast<double>(n)) * m;
  }
  return o + (1.0 / (3.0 * a)) * c;
}

double area(std::span<const Polyline> loops) {
  double a = 0.0;
  for (std::size_t k = 0; k < loops.size(); ++k) {
    const double s = std::abs(signed_area(loops[k]));
    a += k == 0 ? s : -s;
  }
  return a;
}

Point2 area_centroid(std::span<const Polyline> loops) {
  double total = 0.0;
  Point2 acc{};
  for (std::size_t k = 0; k < loops.size(); ++k) {
    const double s = std::abs(signed_area(loops[k])) * (k == 0 ? 1.0 : -1.0);
    acc += s * area_centroid(loops[k]);
    total += s;
  }
  if (total == 0.0) return loops.empty() ? Point2{} : area_centroid(loops[0]);
  return (1.0 / total) * acc;
}

double perimeter(std::span<const Point2> loop) {
  double l = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) l += distance(loop[i], loop[(i + 1) % loop.size()]);
  return l;
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return distance(p, a + t * d);
}

bool point_in_loops(std::span<const Polyline> loops, Point2 p, double on_edge_tol) {
  bool inside = false;
  for (const auto& loop : loops) {
    const std::size_t n = loop.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point2 a = loop[j];
      const Point2 b = loop[i];
      if (point_segment_distance(p, a, b) <= on_edge_tol) return true;
      if ((a.y > p.y) != (b.y > p.y)) {
        const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
        if (p.x < x) inside = !inside;
      }
    }
  }
  return inside;
}

namespace {

int orient(Point2 a, Point2 b, Point2 c, double tol) {
  const double v = cross(b - a, c - a);
  const double scale = std::max({norm(b - a), norm(c - a), 1.0});
  if (std::abs(v) <= tol * scale * scale) return 0;
  return v > 0 ? 1 : -1;
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_touch(Point2 a, Point2 b, Point2 c, Point2 d, double tol) {
  const int o1 = orient(a, b, c, tol);
  const int o2 = orient(a, b, d, tol);
  const int o3 = orient(c, d, a, tol);
  const int o4 = orient(c, d, b, tol);
  if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace

bool is_simple_loop(std::span<const Point2> loop, double tol) {
  const std::size_t n = loop.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = loop[i];
    const Point2 b = loop[(i + 1) % n];
    if (a == b) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point2 c = loop[j];
      const Point2 d = loop[(j + 1) % n];
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) {
        // Adjacent edges may only share their common vertex; a reversal
        // (collinear overlap) makes the loop degenerate.
        const Point2 shared = (j == i + 1) ? b : a;
        const Point2 other_i = (j == i + 1) ? a : b;
        const Point2 other_j = (j == i + 1) ? d : c;
        if (orient(other_i, shared, other_j, tol) == 0 &&
            dot(other_i - shared, other_j - shared) > 0.0)
          return false;
        continue;
      }
      if (segments_touch(a, b, c, d, tol)) return false;
    }
  }
  return true;
}

}  // namespace gimg
