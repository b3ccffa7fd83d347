#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gimg/grid.hpp"
#include "gimg/lsq_solver.hpp"
#include "gimg/pattern.hpp"
#include "gimg/quad_mesh.hpp"
#include "gimg/validate.hpp"

namespace gimg {

struct GridConfig {
  int grid_size = 16;
  Point2 origin{-64.0, -120.0};
  double extent = 128.0;  ///< canvas width and height, cm
  int margin_cells = 1;   ///< top rows and right columns kept empty

  Canvas canvas() const { return {origin, extent / grid_size}; }
  double cell_size() const { return extent / grid_size; }
  /// Throws Error when an invariant does not hold.
  void check() const;
};

enum class EncodeStage {
  Split,
  Layout,
  Overlap,
  OutOfCanvas,
  Rasterize,
  Correspondence,
  Solve,
  Validation,
};

std::string_view to_string(EncodeStage s);

class EncodeError : public Error {
 public:
  EncodeError(EncodeStage stage, const std::string& what, std::vector<Violation> violations = {});
  EncodeStage stage() const { return stage_; }
  const std::vector<Violation>& violations() const { return violations_; }
  /// Short reason name, e.g. "OVERLAP" or the first violation kind.
  std::string reason() const;

 private:
  EncodeStage stage_;
  std::vector<Violation> violations_;
};

/// Splits every Wrap panel at its wrap_cut into a Front and a Back panel
/// ("<name>_front", "<name>_back") joined by a new stitch along the cut.
/// Stitches on the original panel are re-targeted to the half containing
/// them. Patterns without Wrap panels are returned unchanged.
SewingPattern classify_and_split(const SewingPattern& pattern);

/// Front-view canvas position (cm) of a panel-local point.
Point2 to_canvas(const Panel& panel, Point2 local);

/// A closed dart: two adjacent edges of one loop stitched together.
struct Dart {
  int leg1 = 0;  ///< global edge ending at the tip
  int leg2 = 0;  ///< global edge starting at the tip
  Point2 mouth;  ///< closed mouth, canvas cm
  Point2 tip;
};

struct AlignedPanel {
  LayerSide side = LayerSide::Front;
  /// Warped boundary per loop, canvas cm (front view), densely sampled.
  std::vector<Polyline> loops;
  /// Source edge of each dense point.
  std::vector<std::vector<int>> point_edge;
  /// Warped position of each loop vertex (edge start), per loop.
  std::vector<std::vector<Point2>> corners;
  std::vector<Dart> darts;
};

struct SeamPair {
  int stitch = 0;
  Polyline a;  ///< warped seam of stitch.a, in stitch.a's loop order
  Polyline b;  ///< warped seam of stitch.b, in stitch.b's loop order
};

struct AlignedLayout {
  SewingPattern pattern;  ///< split pattern, centimetres
  std::vector<AlignedPanel> panels;
  std::vector<SeamPair> seams;
  int root = 0;
};

/// Seam alignment. The root (largest Front panel, ties by name) stays at its
/// placement; the others follow in breadth-first stitch order, each shifted
/// then warped so its seams land on the already placed partners. Seams of
/// unequal length are matched by relative arc length. Darts are closed.
AlignedLayout align_layout(const SewingPattern& pattern, const GridConfig& cfg);

struct CorrespondencePoint {
  int vertex = 0;
  double param = 0.0;  ///< arc-length fraction on the original loop
  Point2 target;       ///< grid units, on the original (unaligned) boundary
};

struct PanelRaster {
  int panel = 0;
  LayerSide side = LayerSide::Front;
  QuadMesh mesh;
  /// One entry per mesh boundary loop; empty for loops without a source.
  std::vector<std::vector<CorrespondencePoint>> correspondence;
  /// Source global edge per boundary step, or -1.
  std::vector<std::vector<int>> step_edge;
  std::vector<LatticeEdge> dart_edges;
};

struct Rasterization {
  /// Flags and edge types set; deformation left zero.
  GarmentImage image;
  std::vector<PanelRaster> panels;
  /// Panel index per cell (row-major), -1 for outside; one vector per layer.
  std::vector<int> owner[2];
};

Rasterization rasterize(const AlignedLayout& layout, const GridConfig& cfg);

/// The whole pipeline. Throws EncodeError naming the failing stage; a
/// validation failure carries the violation list.
GarmentImage encode(const SewingPattern& pattern, const GridConfig& cfg = GridConfig{});

}  // namespace gimg
