#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gimg/pattern.hpp"

namespace gimg {

inline constexpr int kDefaultRasterRes = 512;

/// Row-major bitmap, each row padded to whole 64-bit words.
struct Bitmap {
  int res = 0;
  int words_per_row = 0;
  std::vector<std::uint64_t> bits;

  bool get(int x, int y) const {
    return (bits[static_cast<std::size_t>(y * words_per_row + x / 64)] >> (x % 64)) & 1u;
  }
};

/// Even-odd scanline fill of `loops`, sampling pixel centres of the square
/// [-half, half]^2 split into res x res pixels.
Bitmap rasterize_loops(const std::vector<Polyline>& loops, double half, int res);

/// Centroid-aligned raster IoU. Throws Error for a zero-area panel or res < 64.
double panel_iou(const Panel& a, const Panel& b, int raster_res = kDefaultRasterRes);

/// Symmetric Hausdorff distance between the boundaries after centroid alignment.
double boundary_hausdorff(const Panel& a, const Panel& b);

struct PanelMatch {
  std::string pred;  ///< empty when a ground-truth panel is unmatched
  std::string gt;    ///< empty when a predicted panel is unmatched
  double iou = 0.0;
};

struct PatternIou {
  std::vector<PanelMatch> matches;
  double mean = 0.0;
};

/// Greedy matching by descending IoU, among panels on the same side first and
/// then across sides. Unmatched panels score 0 and count in the mean.
PatternIou pattern_iou(const SewingPattern& pred, const SewingPattern& gt, int raster_res = kDefaultRasterRes);

/// `pred,gt,iou` header, one row per match, then a `mean` row.
std::string format_iou_report(const PatternIou& r);

inline constexpr int kMaxIsomorphismNodes = 12;

/// Isomorphism of the panel adjacency multigraphs (self-loops included).
/// Throws Error above kMaxIsomorphismNodes panels.
bool stitch_graph_isomorphic(const SewingPattern& a, const SewingPattern& b);

}  // namespace gimg
