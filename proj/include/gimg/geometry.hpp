#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gimg {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  constexpr Point2& operator+=(Point2 b) {
    x += b.x;
    y += b.y;
    return *this;
  }
  friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }
/// Left normal: the chord rotated by +90 degrees, same length.
inline Point2 perp(Point2 a) { return {-a.y, a.x}; }
inline Point2 lerp(Point2 a, Point2 b, double t) { return a + t * (b - a); }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

using Polyline = std::vector<Point2>;

/// Signed area of a closed polygon; positive for counter-clockwise.
double signed_area(std::span<const Point2> loop);
Point2 area_centroid(std::span<const Point2> loop);

/// Combined area centroid of an outer loop and its holes (holes subtract).
Point2 area_centroid(std::span<const Polyline> loops);
double area(std::span<const Polyline> loops);

double perimeter(std::span<const Point2> loop);

double point_segment_distance(Point2 p, Point2 a, Point2 b);

/// Even-odd containment over all loops. Points within `on_edge_tol` of any
/// loop edge count as inside.
bool point_in_loops(std::span<const Polyline> loops, Point2 p, double on_edge_tol = 1e-9);

/// True when no two non-adjacent edges of the closed loop properly cross or
/// overlap. Touching at shared vertices of adjacent edges is allowed.
bool is_simple_loop(std::span<const Point2> loop, double tol = 1e-12);

/// Quadratic Bezier evaluation.
inline Point2 quad_bezier(Point2 p0, Point2 c, Point2 p1, double t) {
  const double u = 1.0 - t;
  return u * u * p0 + 2.0 * u * t * c + t * t * p1;
}

}  // namespace gimg
