#include "gimg/grid.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gimg/kernels/kernels.hpp"

namespace gimg {

std::string_view to_string(EdgeType t) {
  switch (t) {
    case EdgeType::NonBoundary: return "NON_BOUNDARY";
    case EdgeType::NonStitch: return "NON_STITCH";
    case EdgeType::FrontToBack: return "FRONT_TO_BACK";
    case EdgeType::SideBySide: return "SIDE_BY_SIDE";
  }
  return "NON_BOUNDARY";
}

std::string to_string(const LatticeEdge& e) {
  return "(" + std::to_string(e.x) + "," + std::to_string(e.y) + "," + (e.horizontal ? "h" : "v") + ")";
}

// ---------------------------------------------------------------------------
// Layer

Layer::Layer(LayerSide side, int grid_size)
    : side_(side), g_(grid_size), cells_(static_cast<std::size_t>(grid_size) * static_cast<std::size_t>(grid_size)) {
  if (grid_size < 2) throw Error("grid size must be at least 2");
}

bool Layer::storable(const LatticeEdge& e) const { return in_range(e.x, e.y); }

EdgeType Layer::type(const LatticeEdge& e) const {
  if (!storable(e)) return EdgeType::NonBoundary;
  const Cell& c = at(e.x, e.y);
  return e.horizontal ? c.bottom : c.left;
}

bool Layer::set_type(const LatticeEdge& e, EdgeType t) {
  if (!storable(e)) return false;
  Cell& c = at(e.x, e.y);
  (e.horizontal ? c.bottom : c.left) = t;
  return true;
}

std::array<std::pair<int, int>, 2> Layer::incident_cells(const LatticeEdge& e) const {
  if (e.horizontal) return {{{e.x, e.y - 1}, {e.x, e.y}}};
  return {{{e.x - 1, e.y}, {e.x, e.y}}};
}

namespace {

bool same_bits(float a, float b) { return std::bit_cast<std::uint32_t>(a) == std::bit_cast<std::uint32_t>(b); }

bool same_cell(const Cell& a, const Cell& b) {
  if (a.inside != b.inside || a.bottom != b.bottom || a.left != b.left) return false;
  for (std::size_t k = 0; k < 4; ++k)
    if (!same_bits(a.deform[k].dx, b.deform[k].dx) || !same_bits(a.deform[k].dy, b.deform[k].dy)) return false;
  return true;
}

}  // namespace

bool operator==(const Layer& a, const Layer& b) {
  if (a.side_ != b.side_ || a.g_ != b.g_) return false;
  for (std::size_t i = 0; i < a.cells_.size(); ++i)
    if (!same_cell(a.cells_[i], b.cells_[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// GarmentImage

GarmentImage::GarmentImage(int grid_size, Canvas canvas)
    : canvas_(canvas), front_(LayerSide::Front, grid_size), back_(LayerSide::Back, grid_size) {
  if (!(canvas.cell_size > 0.0)) throw Error("canvas cell size must be positive");
}

std::size_t GarmentImage::inside_count() const {
  std::size_t n = 0;
  for (const Layer* l : {&front_, &back_})
    for (int y = 0; y < l->size(); ++y)
      for (int x = 0; x < l->size(); ++x) n += l->at(x, y).inside ? 1 : 0;
  return n;
}

bool operator==(const GarmentImage& a, const GarmentImage& b) {
  return a.canvas_ == b.canvas_ && a.front_ == b.front_ && a.back_ == b.back_;
}

std::array<Point2, 4> full_deformation_matrix(const GarmentImage& gi, LayerSide side, int x, int y) {
  const Layer& layer = gi.layer(side);
  if (!layer.inside(x, y))
    throw Error("full_deformation_matrix: cell (" + std::to_string(x) + "," + std::to_string(y) + ") is outside");
  const Cell& c = layer.at(x, y);
  std::array<Point2, 4> m;
  for (std::size_t k = 0; k < 4; ++k) m[k] = {c.deform[k].dx, c.deform[k].dy};
  return m;
}

// ---------------------------------------------------------------------------
// Tensor conversion

Tensor to_tensor(const GarmentImage& gi) {
  const int g = gi.grid_size();
  Tensor t(kChannels, g, g);
  for (const LayerSide side : {LayerSide::Front, LayerSide::Back}) {
    const int base = side == LayerSide::Front ? 0 : kLayerChannels;
    const Layer& layer = gi.layer(side);
    for (int y = 0; y < g; ++y) {
      for (int x = 0; x < g; ++x) {
        const Cell& c = layer.at(x, y);
        t.at(base + channel::kFlag, y, x) = c.inside ? 1.0f : 0.0f;
        t.at(base + channel::kBottomType + static_cast<int>(c.bottom), y, x) = 1.0f;
        t.at(base + channel::kLeftType + static_cast<int>(c.left), y, x) = 1.0f;
        for (int k = 0; k < 4; ++k) {
          t.at(base + channel::kDeform + 2 * k, y, x) = c.deform[static_cast<std::size_t>(k)].dx;
          t.at(base + channel::kDeform + 2 * k + 1, y, x) = c.deform[static_cast<std::size_t>(k)].dy;
        }
      }
    }
  }
  return t;
}

GarmentImage from_tensor(const Tensor& t, const Canvas& canvas) {
  if (t.channels != kChannels || t.rows != t.cols || t.rows < 2)
    throw ShapeError("tensor shape (" + std::to_string(t.channels) + "," + std::to_string(t.rows) + "," +
                     std::to_string(t.cols) + ") is not (" + std::to_string(kChannels) + ",G,G)");
  if (t.data.size() != static_cast<std::size_t>(t.channels) * t.plane_size())
    throw ShapeError("tensor data size does not match its shape");
  for (std::size_t i = 0; i < t.data.size(); ++i)
    if (!std::isfinite(t.data[i])) throw Error("tensor contains a non-finite value at flat index " + std::to_string(i));

  const int g = t.rows;
  GarmentImage gi(g, canvas);
  std::vector<std::uint8_t> bottom(t.plane_size()), left(t.plane_size());
  for (const LayerSide side : {LayerSide::Front, LayerSide::Back}) {
    const int base = side == LayerSide::Front ? 0 : kLayerChannels;
    const int b = base + channel::kBottomType;
    const int l = base + channel::kLeftType;
    kernels::argmax4({t.plane(b), t.plane(b + 1), t.plane(b + 2), t.plane(b + 3)}, bottom);
    kernels::argmax4({t.plane(l), t.plane(l + 1), t.plane(l + 2), t.plane(l + 3)}, left);
    Layer& layer = gi.layer(side);
    for (int y = 0; y < g; ++y) {
      for (int x = 0; x < g; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * static_cast<std::size_t>(g) + static_cast<std::size_t>(x);
        Cell& c = layer.at(x, y);
        c.inside = t.at(base + channel::kFlag, y, x) >= 0.5f;
        c.bottom = static_cast<EdgeType>(bottom[i]);
        c.left = static_cast<EdgeType>(left[i]);
        for (int k = 0; k < 4; ++k) {
          c.deform[static_cast<std::size_t>(k)] = {t.at(base + channel::kDeform + 2 * k, y, x),
                                                   t.at(base + channel::kDeform + 2 * k + 1, y, x)};
        }
      }
    }
  }
  return gi;
}

// ---------------------------------------------------------------------------
// Tensor files

void write_tensor(std::ostream& os, const Tensor& t) {
  os << "GIMG1 " << t.channels << ' ' << t.rows << ' ' << t.cols << '\n';
  std::vector<char> bytes(t.data.size() * 4);
  for (std::size_t i = 0; i < t.data.size(); ++i) {
    const auto u = std::bit_cast<std::uint32_t>(t.data[i]);
    for (int k = 0; k < 4; ++k) bytes[4 * i + static_cast<std::size_t>(k)] = static_cast<char>((u >> (8 * k)) & 0xffu);
  }
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw Error("failed to write tensor data");
}

Tensor read_tensor(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw ShapeError("missing tensor header");
  std::istringstream hs(header);
  std::string magic;
  int c = 0, r = 0, k = 0;
  if (!(hs >> magic >> c >> r >> k) || magic != "GIMG1") throw ShapeError("bad tensor header '" + header + "'");
  std::string trailing;
  if (hs >> trailing) throw ShapeError("bad tensor header '" + header + "'");
  if (c <= 0 || r <= 0 || k <= 0 || c > 4096 || r > 4096 || k > 4096)
    throw ShapeError("implausible tensor shape in header '" + header + "'");
  Tensor t(c, r, k);
  std::vector<unsigned char> bytes(t.data.size() * 4);
  is.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(is.gcount()) != bytes.size()) throw ShapeError("truncated tensor data");
  if (is.peek() != std::char_traits<char>::eof()) throw ShapeError("trailing bytes after tensor data");
  for (std::size_t i = 0; i < t.data.size(); ++i) {
    std::uint32_t u = 0;
    for (int b = 0; b < 4; ++b) u |= static_cast<std::uint32_t>(bytes[4 * i + static_cast<std::size_t>(b)]) << (8 * b);
    t.data[i] = std::bit_cast<float>(u);
  }
  return t;
}

void save_tensor(const std::string& path, const Tensor& t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_tensor(os, t);
}

Tensor load_tensor(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "'");
  return read_tensor(is);
}

}  // namespace gimg
