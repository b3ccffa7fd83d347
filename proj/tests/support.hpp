#pragma once

#include <random>
#include <string>
#include <vector>

#include "gimg/grid.hpp"
#include "gimg/pattern.hpp"

namespace gimg::test {

/// Axis-aligned rectangle panel with local corner (0, 0), CCW edges
/// bottom, right, top, left.
inline Panel rect_panel(const std::string& name, Side side, double w, double h, Point2 placement) {
  Panel p;
  p.name = name;
  p.side = side;
  p.placement = placement;
  p.vertices = {{0, 0}, {w, 0}, {w, h}, {0, h}};
  p.loops = {{{0, 1, std::nullopt}, {1, 2, std::nullopt}, {2, 3, std::nullopt}, {3, 0, std::nullopt}}};
  return p;
}

/// Square panel covering the 2x2 cells whose lower-left lattice corner is
/// `cell` on the default canvas.
inline Panel cell_square(const std::string& name, int cx, int cy, int cells = 2) {
  const Canvas c;
  const Point2 at = c.to_cm({static_cast<double>(cx), static_cast<double>(cy)});
  return rect_panel(name, Side::Front, cells * c.cell_size, cells * c.cell_size, at);
}

inline SewingPattern single(Panel p) {
  SewingPattern s;
  s.panels.push_back(std::move(p));
  return s;
}

/// Random image that passes the tensor round trip: random flags, edge types
/// and finite deformation values. Not structurally valid.
inline GarmentImage random_image(std::mt19937_64& rng, int g = 16) {
  GarmentImage gi(g, Canvas{});
  std::uniform_int_distribution<int> type(0, 3);
  std::uniform_real_distribution<float> val(-3.0f, 3.0f);
  for (LayerSide s : {LayerSide::Front, LayerSide::Back}) {
    Layer& l = gi.layer(s);
    for (int y = 0; y < g; ++y)
      for (int x = 0; x < g; ++x) {
        Cell& c = l.at(x, y);
        c.inside = (rng() & 1U) != 0;
        c.bottom = static_cast<EdgeType>(type(rng));
        c.left = static_cast<EdgeType>(type(rng));
        for (auto& d : c.deform) d = {val(rng), val(rng)};
      }
  }
  return gi;
}

/// Inside block with identity deformation; its outline gets `outline`.
inline void paint_block(Layer& l, int x0, int y0, int w, int h, EdgeType outline = EdgeType::NonStitch) {
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x) {
      l.at(x, y).inside = true;
      l.at(x, y).deform = {DeformVec{1, 0}, {0, 1}, {1, 0}, {0, 1}};
    }
  for (int x = x0; x < x0 + w; ++x) {
    l.set_type({x, y0, true}, outline);
    l.set_type({x, y0 + h, true}, outline);
  }
  for (int y = y0; y < y0 + h; ++y) {
    l.set_type({x0, y, false}, outline);
    l.set_type({x0 + w, y, false}, outline);
  }
}

/// Front and back 3x3 blocks joined along their right side (x = 7), which is
/// FrontToBack, NonStitch, FrontToBack from bottom to top on both layers.
inline GarmentImage ns_in_f2b_chain() {
  GarmentImage gi(16, Canvas{});
  for (LayerSide s : {LayerSide::Front, LayerSide::Back}) {
    Layer& l = gi.layer(s);
    paint_block(l, 4, 4, 3, 3);
    for (int y = 4; y < 7; ++y) l.set_type({7, y, false}, y == 5 ? EdgeType::NonStitch : EdgeType::FrontToBack);
  }
  return gi;
}

/// Top (rows 6-7) above a skirt (rows 4-5), three cells wide; the waist chain
/// reads SideBySide, NonBoundary, SideBySide.
inline GarmentImage nb_in_sbs_chain() {
  GarmentImage gi(16, Canvas{});
  Layer& l = gi.front();
  paint_block(l, 4, 4, 3, 4);
  l.set_type({4, 6, true}, EdgeType::SideBySide);
  l.set_type({5, 6, true}, EdgeType::NonBoundary);
  l.set_type({6, 6, true}, EdgeType::SideBySide);
  return gi;
}


}  // namespace gimg::test
