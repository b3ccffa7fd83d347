#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "gimg/geometry.hpp"
#include "gimg/grid.hpp"

namespace gimg {

struct CellCoord {
  int x = 0;
  int y = 0;
  friend bool operator==(const CellCoord&, const CellCoord&) = default;
  /// Row-major: bottom row first.
  friend auto operator<=>(const CellCoord& a, const CellCoord& b) {
    if (a.y != b.y) return a.y <=> b.y;
    return a.x <=> b.x;
  }
};

/// One directed step of a boundary loop; the owning cell lies on its left.
struct BoundaryStep {
  int from = 0;
  int to = 0;
  int cell = 0;  ///< index into QuadMesh::cells
  CellSide side = CellSide::Bottom;
  LatticeEdge edge;
};

/// Quad mesh over a set of lattice cells. Vertices start at their lattice
/// positions; a lattice point is split into several vertices where cut
/// edges (or a diagonal pinch) separate the cells around it.
struct QuadMesh {
  std::vector<Point2> vertices;
  /// Directed +x / +y, deduplicated.
  std::vector<std::pair<int, int>> edges;
  std::vector<CellCoord> cells;
  /// Corner vertices per cell: bottom-left, bottom-right, top-right, top-left.
  std::vector<std::array<int, 4>> corners;
  /// Mesh edge per cell side, indexed by CellSide.
  std::vector<std::array<int, 4>> cell_edges;
  /// Boundary loops, outer (largest area, counter-clockwise) first.
  std::vector<std::vector<BoundaryStep>> boundary;

  int cell_index(CellCoord c) const;
  bool is_boundary_vertex(int v) const;
};

using CutPredicate = std::function<bool(const LatticeEdge&)>;

/// Builds the mesh of a non-empty, 4-connected cell set. Lattice edges for
/// which `is_cut` returns true are not shared by the cells on either side.
/// Throws Error for an empty or disconnected set.
QuadMesh build_quad_mesh(std::span<const CellCoord> cells, const CutPredicate& is_cut = {});

}  // namespace gimg
