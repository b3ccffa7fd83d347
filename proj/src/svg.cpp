#include "gimg/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <iterator>
#include <sstream>

#include "gimg/encoder.hpp"

namespace gimg {

namespace {

const char* const kPalette[] = {"#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4",
                                "#42d4f4", "#f032e6", "#9a6324", "#469990", "#808000"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

/// SVG y grows downward.
std::string pt(Point2 p) { return num(p.x) + "," + num(-p.y); }

Polyline edge_polyline(const Panel& panel, int e) {
  Polyline out;
  const int steps = panel.edge(e).control ? kCurveSegments : 1;
  for (int i = 0; i <= steps; ++i) out.push_back(panel.edge_point(e, static_cast<double>(i) / steps));
  return out;
}

const char* edge_colour(EdgeType t) {
  switch (t) {
    case EdgeType::NonStitch: return "#555555";
    case EdgeType::FrontToBack: return "#1f5fd6";
    case EdgeType::SideBySide: return "#d62728";
    case EdgeType::NonBoundary: break;
  }
  return nullptr;
}

}  // namespace

std::string render_pattern_svg(const SewingPattern& pattern) {
  const SewingPattern cm = to_cm(pattern);
  std::ostringstream body;
  Point2 lo{1e300, 1e300};
  Point2 hi{-1e300, -1e300};
  auto grow = [&](Point2 p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  };
  for (const Panel& p : cm.panels) {
    for (std::size_t l = 0; l < p.loops.size(); ++l) {
      body << "<path fill=\"" << (p.side == Side::Back ? "#f4e9d8" : "#dde8f4") << "\" fill-opacity=\"0.6\""
           << " stroke=\"#222\" stroke-width=\"0.3\" d=\"";
      const Polyline loop = flatten_loop(p, l);
      for (std::size_t i = 0; i < loop.size(); ++i) {
        const Point2 q = to_canvas(p, loop[i]);
        grow(q);
        body << (i == 0 ? "M" : " L") << pt(q);
      }
      body << " Z\"><title>" << p.name << "</title></path>\n";
    }
  }
  for (std::size_t s = 0; s < cm.stitches.size(); ++s) {
    const char* colour = kPalette[s % std::size(kPalette)];
    for (const EdgeRef* ref : {&cm.stitches[s].a, &cm.stitches[s].b}) {
      const int pi = cm.find(ref->panel);
      if (pi < 0) continue;
      const Panel& p = cm.panels[static_cast<std::size_t>(pi)];
      for (int e = ref->first; e <= ref->last; ++e) {
        body << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"0.8\" points=\"";
        for (Point2 q : edge_polyline(p, e)) body << pt(to_canvas(p, q)) << ' ';
        body << "\"/>\n";
      }
    }
  }
  if (lo.x > hi.x) lo = hi = {0.0, 0.0};
  const double pad = 4.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(lo.x - pad) << ' ' << num(-hi.y - pad) << ' '
     << num(hi.x - lo.x + 2 * pad) << ' ' << num(hi.y - lo.y + 2 * pad) << "\">\n"
     << body.str() << "</svg>\n";
  return os.str();
}

std::string render_image_svg(const GarmentImage& gi) {
  const int g = gi.grid_size();
  const double cell = 20.0;
  const double gap = cell;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << num(2 * g * cell + gap) << ' ' << num(g * cell)
     << "\">\n";
  for (LayerSide side : {LayerSide::Front, LayerSide::Back}) {
    const Layer& layer = gi.layer(side);
    const double ox = side == LayerSide::Front ? 0.0 : g * cell + gap;
    auto xy = [&](Point2 p) { return num(ox + p.x * cell) + "," + num((g - p.y) * cell); };
    os << "<g><title>" << (side == LayerSide::Front ? "front" : "back") << "</title>\n";
    for (int y = 0; y < g; ++y) {
      for (int x = 0; x < g; ++x) {
        if (!layer.at(x, y).inside) continue;
        os << "<rect x=\"" << num(ox + x * cell) << "\" y=\"" << num((g - y - 1) * cell) << "\" width=\""
           << num(cell) << "\" height=\"" << num(cell) << "\" fill=\"#e8e8e8\"/>\n";
        // Deformed quad, scaled down and centred on the cell.
        const auto m = full_deformation_matrix(gi, side, x, y);
        const double s = 0.45;
        const Point2 c{x + 0.5, y + 0.5};
        const Point2 q0 = c - 0.5 * s * (m[0] + m[3]);
        const Point2 q1 = q0 + s * m[0];
        const Point2 q2 = q1 + s * m[1];
        const Point2 q3 = q0 + s * m[3];
        os << "<polygon fill=\"none\" stroke=\"#999\" stroke-width=\"0.6\" points=\"" << xy(q0) << ' ' << xy(q1)
           << ' ' << xy(q2) << ' ' << xy(q3) << "\"/>\n";
      }
    }
    for (int y = 0; y <= g; ++y) {
      for (int x = 0; x <= g; ++x) {
        for (bool h : {true, false}) {
          const LatticeEdge e{x, y, h};
          if (!layer.storable(e)) continue;
          const char* colour = edge_colour(layer.type(e));
          if (!colour) continue;
          const Point2 a{static_cast<double>(x), static_cast<double>(y)};
          const Point2 z = h ? a + Point2{1, 0} : a + Point2{0, 1};
          os << "<polyline stroke=\"" << colour << "\" stroke-width=\"2\" points=\"" << xy(a) << ' ' << xy(z)
             << "\"/>\n";
        }
      }
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace gimg
