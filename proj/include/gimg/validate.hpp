#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gimg/grid.hpp"

namespace gimg {

enum class ViolationKind {
  NonStitchInF2bChain,
  NonBoundaryInSbsChain,
  UnpairedF2b,
  SbsOnOutsideCell,
  DanglingBoundary,
  OnehotMalformed,
};

std::string_view to_string(ViolationKind k);

struct Violation {
  ViolationKind kind = ViolationKind::DanglingBoundary;
  LayerSide layer = LayerSide::Front;
  /// Lattice edge; for cell-level findings the cell's bottom edge.
  LatticeEdge edge;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// `<kind> layer=<f|b> edge=(x,y,h|v) <detail>`
std::string format_violation(const Violation& v);
std::string format_report(const std::vector<Violation>& vs);

/// Structural checks on a GarmentImage. Results are ordered by kind, then
/// layer, then lattice edge.
std::vector<Violation> validate(const GarmentImage& gi);

/// Tensor-level checks that from_tensor would hide: flags not in {0, 1} and
/// edge groups that are not exactly one-hot. Followed by validate() on the
/// decoded image when the tensor has the right shape.
std::vector<Violation> validate_tensor(const Tensor& t, const Canvas& canvas = Canvas{});

struct Fix {
  LayerSide layer = LayerSide::Front;
  LatticeEdge edge;
  EdgeType from = EdgeType::NonBoundary;
  EdgeType to = EdgeType::NonBoundary;
  /// Also applied at the same position on the other layer.
  bool mirrored = false;
};

std::string format_fix(const Fix& f);

struct RepairResult {
  GarmentImage image;
  std::vector<Fix> fixes;
  /// Violations left after repair.
  std::vector<Violation> remaining;
};

/// Rule A: a NonStitch boundary edge whose neighbours along the boundary walk
/// are both FrontToBack becomes FrontToBack on both layers. Rule B: an
/// interior NonBoundary edge bridging the ends of two SideBySide chains
/// becomes SideBySide. Applied row-major until nothing changes.
RepairResult repair(const GarmentImage& gi);

}  // namespace gimg
