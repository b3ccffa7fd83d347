#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gimg/geometry.hpp"

namespace gimg {

enum class Side { Front, Back, Wrap };

std::string_view to_string(Side s);

/// One boundary edge. `control`, when present, makes the edge a quadratic
/// curve; it is stored relative to the chord: the absolute control point is
/// start + cx * chord + cy * perp(chord).
struct PanelEdge {
  int start = 0;
  int end = 0;
  std::optional<Point2> control;

  friend bool operator==(const PanelEdge&, const PanelEdge&) = default;
};

struct Panel {
  std::string name;
  std::vector<Point2> vertices;
  /// loops[0] is the outer boundary; further loops are holes.
  std::vector<std::vector<PanelEdge>> loops;
  Side side = Side::Front;
  /// Offset in body-plane coordinates, as seen from the panel's own side.
  Point2 placement;
  /// Wrap panels only: local x of the vertical line separating the front
  /// part (x < cut) from the back part.
  std::optional<double> wrap_cut;

  std::size_t edge_count() const;
  /// Global edge index of edge `i` of loop `loop`.
  int global_edge(std::size_t loop, std::size_t i) const;
  /// (loop, index in loop) of a global edge index.
  std::pair<std::size_t, std::size_t> locate_edge(int global) const;
  const PanelEdge& edge(int global) const;

  Point2 edge_start(int global) const { return vertices[static_cast<std::size_t>(edge(global).start)]; }
  Point2 edge_end(int global) const { return vertices[static_cast<std::size_t>(edge(global).end)]; }
  /// Absolute control point (the chord midpoint for line edges).
  Point2 control_point(int global) const;
  Point2 edge_point(int global, double t) const;

  friend bool operator==(const Panel&, const Panel&) = default;
};

/// Inclusive range [first, last] of global edge indices within one loop.
struct EdgeRef {
  std::string panel;
  int first = 0;
  int last = 0;

  bool contains(int e) const { return first <= e && e <= last; }
  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

struct Stitch {
  EdgeRef a;
  EdgeRef b;
  friend bool operator==(const Stitch&, const Stitch&) = default;
};

struct SewingPattern {
  double units_per_cm = 1.0;
  std::vector<Panel> panels;
  std::vector<Stitch> stitches;

  /// Index of the named panel, or -1.
  int find(std::string_view name) const;
  friend bool operator==(const SewingPattern&, const SewingPattern&) = default;
};

/// Malformed document; `position` is the byte offset reported by the reader.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at byte " + std::to_string(position) + ")"), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Well-formed document that violates a pattern invariant.
class SemanticError : public Error {
 public:
  using Error::Error;
};

SewingPattern parse_pattern(std::string_view text);
std::string serialize_pattern(const SewingPattern& pattern);

/// Throws SemanticError naming the offending entity.
void check_pattern(const SewingPattern& pattern);

/// Reorients loops (outer counter-clockwise, holes clockwise) and remaps
/// stitch edge ranges accordingly.
void normalize_orientation(SewingPattern& pattern);

/// Copy with all coordinates in centimetres and units_per_cm = 1.
SewingPattern to_cm(const SewingPattern& pattern);

/// Curves flattened with a fixed number of uniform parameter steps.
inline constexpr int kCurveSegments = 32;
Polyline flatten_loop(const Panel& panel, std::size_t loop, int curve_segments = kCurveSegments);
std::vector<Polyline> flatten_panel(const Panel& panel, int curve_segments = kCurveSegments);

double panel_area(const Panel& panel);

struct BoundarySample {
  Point2 p;
  int edge = 0;      ///< global index of the source edge
  double s = 0.0;    ///< chord-length parameter from the loop start
};

/// Samples a loop so that consecutive points are at most `spacing` apart.
/// Lines are split evenly; curves by uniform parameter subdivision, refined
/// until every chord fits. Throws Error for a degenerate loop.
std::vector<BoundarySample> sample_boundary(const Panel& panel, std::size_t loop, double spacing);

/// Even-odd test against the flattened loops; points on the boundary are inside.
bool point_in_panel(const Panel& panel, Point2 p);

}  // namespace gimg
