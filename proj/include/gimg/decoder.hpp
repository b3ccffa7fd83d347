#pragma once

#include <vector>

#include "gimg/grid.hpp"
#include "gimg/pattern.hpp"
#include "gimg/quad_mesh.hpp"

namespace gimg {

struct PanelCluster {
  LayerSide side = LayerSide::Front;
  std::vector<CellCoord> cells;  ///< row-major
};

/// Inside cells grouped by flood fill across NonBoundary edges, ordered by
/// layer and then by the row-major first cell.
std::vector<PanelCluster> cluster_panels(const GarmentImage& gi);

/// Mesh of a cluster, cut along its interior edges that are not NonBoundary.
QuadMesh cluster_mesh(const PanelCluster& cluster, const GarmentImage& gi);

struct DecodeOptions {
  double anchor_weight = 1.0;
  bool smooth = false;
};

struct DecodedPanel {
  Panel panel;
  /// Lattice edge behind each boundary edge, per loop.
  std::vector<std::vector<LatticeEdge>> lattice_edges;
  /// Area below a quarter of a cell.
  bool degenerate = false;
};

/// Shape recovery for one cluster. The caller names the panel "front_<k>" or
/// "back_<k>" after the cluster index k; here the name is left empty.
DecodedPanel decode_panel(const PanelCluster& cluster, const GarmentImage& gi, const DecodeOptions& opt = {});

class DecodeError : public Error {
 public:
  using Error::Error;
};

/// Full reconstruction: panels, stitches and placements. Throws DecodeError
/// for a FrontToBack edge without a partner on the other layer.
SewingPattern decode(const GarmentImage& gi, const DecodeOptions& opt = {});

}  // namespace gimg
