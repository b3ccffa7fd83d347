#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gimg/geometry.hpp"

namespace gimg {

/// Lattice edge types; the numeric value is the one-hot index.
enum class EdgeType : std::uint8_t { NonBoundary = 0, NonStitch = 1, FrontToBack = 2, SideBySide = 3 };
inline constexpr int kEdgeTypeCount = 4;

std::string_view to_string(EdgeType t);

enum class LayerSide : std::uint8_t { Front = 0, Back = 1 };
inline LayerSide opposite(LayerSide s) { return s == LayerSide::Front ? LayerSide::Back : LayerSide::Front; }

/// Deformed edge vector in grid units (one cell side = 1).
struct DeformVec {
  float dx = 0.0f;
  float dy = 0.0f;
  friend bool operator==(DeformVec, DeformVec) = default;
};

/// Column order of the per-cell deformation matrix.
enum class CellSide : std::uint8_t { Bottom = 0, Right = 1, Top = 2, Left = 3 };

/// Bottom and top edges are oriented +x, left and right edges +y.
struct Cell {
  bool inside = false;
  EdgeType bottom = EdgeType::NonBoundary;
  EdgeType left = EdgeType::NonBoundary;
  std::array<DeformVec, 4> deform{};

  DeformVec& vec(CellSide s) { return deform[static_cast<std::size_t>(s)]; }
  const DeformVec& vec(CellSide s) const { return deform[static_cast<std::size_t>(s)]; }
};

/// A lattice edge: horizontal edges are the bottom edge of cell (x, y),
/// vertical edges the left edge of cell (x, y). Coordinates run 0..G.
struct LatticeEdge {
  int x = 0;
  int y = 0;
  bool horizontal = true;

  friend bool operator==(const LatticeEdge&, const LatticeEdge&) = default;
  friend auto operator<=>(const LatticeEdge&, const LatticeEdge&) = default;
};

/// "(x,y,h)" or "(x,y,v)".
std::string to_string(const LatticeEdge& e);

/// G x G cells, row-major with row 0 at the bottom.
class Layer {
 public:
  Layer() = default;
  Layer(LayerSide side, int grid_size);

  LayerSide side() const { return side_; }
  int size() const { return g_; }
  bool in_range(int x, int y) const { return x >= 0 && y >= 0 && x < g_ && y < g_; }

  Cell& at(int x, int y) { return cells_[index(x, y)]; }
  const Cell& at(int x, int y) const { return cells_[index(x, y)]; }
  /// False for coordinates outside the grid.
  bool inside(int x, int y) const { return in_range(x, y) && at(x, y).inside; }

  /// Type of a lattice edge. Edges on the top row or right column of the
  /// lattice have no storage and read as NonBoundary.
  EdgeType type(const LatticeEdge& e) const;
  /// Returns false when the edge has no storage.
  bool set_type(const LatticeEdge& e, EdgeType t);
  bool storable(const LatticeEdge& e) const;

  /// The (up to two) cells incident to a lattice edge: {below/left, above/right}.
  /// Cells outside the grid are reported with in_range == false.
  std::array<std::pair<int, int>, 2> incident_cells(const LatticeEdge& e) const;

  friend bool operator==(const Layer&, const Layer&);

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(g_) + static_cast<std::size_t>(x);
  }
  LayerSide side_ = LayerSide::Front;
  int g_ = 0;
  std::vector<Cell> cells_;
};

/// Body-anchored canvas: lattice vertex (i, j) sits at origin + cell_size * (i, j) cm.
struct Canvas {
  Point2 origin{-64.0, -120.0};
  double cell_size = 8.0;

  Point2 to_cm(Point2 grid) const { return origin + cell_size * grid; }
  Point2 to_grid(Point2 cm) const { return (1.0 / cell_size) * (cm - origin); }
  friend bool operator==(const Canvas&, const Canvas&) = default;
};

/// Back layer cells are indexed as seen from the front, so partners of
/// FrontToBack edges share lattice coordinates.
class GarmentImage {
 public:
  GarmentImage() = default;
  GarmentImage(int grid_size, Canvas canvas);

  int grid_size() const { return front_.size(); }
  const Canvas& canvas() const { return canvas_; }

  Layer& layer(LayerSide s) { return s == LayerSide::Front ? front_ : back_; }
  const Layer& layer(LayerSide s) const { return s == LayerSide::Front ? front_ : back_; }
  Layer& front() { return front_; }
  Layer& back() { return back_; }
  const Layer& front() const { return front_; }
  const Layer& back() const { return back_; }

  std::size_t inside_count() const;

  /// Exact equality; floats compared by bit pattern.
  friend bool operator==(const GarmentImage&, const GarmentImage&);

 private:
  Canvas canvas_;
  Layer front_;
  Layer back_;
};

/// Full 2x4 deformation matrix of an inside cell, columns ordered
/// bottom, right, top, left. Throws Error for an outside cell.
std::array<Point2, 4> full_deformation_matrix(const GarmentImage& gi, LayerSide side, int x, int y);

// ---------------------------------------------------------------------------
// Tensor form

/// Channels per layer: [0] inside flag, [1..4] bottom edge one-hot,
/// [5..8] left edge one-hot, [9..16] deformation matrix columns
/// (bottom, right, top, left) as (dx, dy) pairs. Back layer at offset 17.
inline constexpr int kLayerChannels = 17;
inline constexpr int kChannels = 2 * kLayerChannels;
namespace channel {
inline constexpr int kFlag = 0;
inline constexpr int kBottomType = 1;
inline constexpr int kLeftType = 5;
inline constexpr int kDeform = 9;
}  // namespace channel

struct Tensor {
  int channels = 0;
  int rows = 0;
  int cols = 0;
  std::vector<float> data;  ///< (channel, row, col) row-major

  Tensor() = default;
  Tensor(int c, int r, int k) : channels(c), rows(r), cols(k), data(static_cast<std::size_t>(c) * r * k, 0.0f) {}

  float& at(int c, int r, int k) { return data[offset(c, r, k)]; }
  float at(int c, int r, int k) const { return data[offset(c, r, k)]; }
  std::size_t plane_size() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
  const float* plane(int c) const { return data.data() + static_cast<std::size_t>(c) * plane_size(); }

 private:
  std::size_t offset(int c, int r, int k) const {
    return (static_cast<std::size_t>(c) * static_cast<std::size_t>(rows) + static_cast<std::size_t>(r)) *
               static_cast<std::size_t>(cols) +
           static_cast<std::size_t>(k);
  }
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

Tensor to_tensor(const GarmentImage& gi);

/// Inverse of to_tensor. Flags >= 0.5 decode as inside; edge types by
/// per-edge argmax (first maximum wins). Throws ShapeError on a bad shape
/// and Error on non-finite values.
GarmentImage from_tensor(const Tensor& t, const Canvas& canvas = Canvas{});

/// `GIMG1 <channels> <rows> <cols>\n` followed by little-endian float32 data.
void write_tensor(std::ostream& os, const Tensor& t);
Tensor read_tensor(std::istream& is);
void save_tensor(const std::string& path, const Tensor& t);
Tensor load_tensor(const std::string& path);

}  // namespace gimg
