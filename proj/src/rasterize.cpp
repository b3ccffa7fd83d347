#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "gimg/encoder.hpp"

namespace gimg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// One pattern loop seen in the mesh's winding direction.
struct OrientedLoop {
  std::vector<Point2> corners;   // aligned, grid units
  std::vector<Polyline> pieces;  // original edge geometry from corner i to i+1, grid units
  std::vector<int> edge_ids;     // global edge of piece i
};

double length(const Polyline& pl) {
  double s = 0.0;
  for (std::size_t k = 1; k < pl.size(); ++k) s += distance(pl[k - 1], pl[k]);
  return s;
}

Point2 point_at_fraction(const Polyline& pl, double u) {
  const double total = length(pl);
  if (total <= 0.0) return pl.front();
  double want = u * total;
  for (std::size_t k = 1; k < pl.size(); ++k) {
    const double d = distance(pl[k - 1], pl[k]);
    if (want <= d || k + 1 == pl.size()) return lerp(pl[k - 1], pl[k], d > 0.0 ? std::min(want / d, 1.0) : 0.0);
    want -= d;
  }
  return pl.back();
}

OrientedLoop orient_loop(const Panel& p, const AlignedPanel& ap, std::size_t li, const Canvas& canvas, bool ccw) {
  OrientedLoop o;
  const std::size_t m = p.loops[li].size();
  Polyline ring;
  for (std::size_t i = 0; i < m; ++i) {
    const int g = p.global_edge(li, i);
    const int steps = p.loops[li][i].control ? kCurveSegments : 1;
    Polyline piece;
    for (int k = 0; k <= steps; ++k)
      piece.push_back(canvas.to_grid(to_canvas(p, p.edge_point(g, static_cast<double>(k) / steps))));
    ring.insert(ring.end(), piece.begin(), piece.end() - 1);
    o.corners.push_back(canvas.to_grid(ap.corners[li][i]));
    o.pieces.push_back(std::move(piece));
    o.edge_ids.push_back(g);
  }
  if ((signed_area(ring) > 0.0) != ccw) {
    // Reverse: corner i becomes corner (m - i) mod m, piece i runs backwards along edge m - 1 - i.
    OrientedLoop r;
    for (std::size_t i = 0; i < m; ++i) {
      r.corners.push_back(o.corners[(m - i) % m]);
      Polyline piece = o.pieces[m - 1 - i];
      std::reverse(piece.begin(), piece.end());
      r.pieces.push_back(std::move(piece));
      r.edge_ids.push_back(o.edge_ids[m - 1 - i]);
    }
    return r;
  }
  return o;
}

/// Monotone assignment of pattern corners to lattice loop positions that
/// minimises the summed squared distance. Returns the position of each corner.
std::vector<std::size_t> anchor_corners(const std::vector<Point2>& lattice, const std::vector<Point2>& corners) {
  const std::size_t n = lattice.size();
  const std::size_t k = corners.size();
  if (k > n) return {};
  double best = kInf;
  std::vector<std::size_t> best_pos;
  std::vector<std::vector<double>> d(k, std::vector<double>(n, kInf));
  std::vector<std::vector<std::size_t>> from(k, std::vector<std::size_t>(n, 0));
  for (std::size_t s = 0; s < n; ++s) {
    const auto cost = [&](std::size_t i, std::size_t o) {
      const Point2 v = lattice[(s + o) % n] - corners[i];
      return dot(v, v);
    };
    for (auto& row : d) std::fill(row.begin(), row.end(), kInf);
    d[0][0] = cost(0, 0);
    if (d[0][0] >= best) continue;
    for (std::size_t i = 1; i < k; ++i) {
      double run = kInf;
      std::size_t arg = 0;
      for (std::size_t o = i; o + (k - 1 - i) < n; ++o) {
        if (d[i - 1][o - 1] < run) {
          run = d[i - 1][o - 1];
          arg = o - 1;
        }
        if (run < kInf) {
          d[i][o] = run + cost(i, o);
          from[i][o] = arg;
        }
      }
    }
    std::size_t end = 0;
    double total = kInf;
    for (std::size_t o = k - 1; o < n; ++o)
      if (d[k - 1][o] < total) {
        total = d[k - 1][o];
        end = o;
      }
    if (total < best) {
      best = total;
      best_pos.assign(k, 0);
      std::size_t o = end;
      for (std::size_t i = k; i-- > 0;) {
        best_pos[i] = (s + o) % n;
        if (i > 0) o = from[i][o];
      }
    }
  }
  return best_pos;
}

Point2 across_cell(const BoundaryStep& s, CellCoord c) {
  switch (s.side) {
    case CellSide::Bottom: return {static_cast<double>(c.x), static_cast<double>(c.y - 1)};
    case CellSide::Right: return {static_cast<double>(c.x + 1), static_cast<double>(c.y)};
    case CellSide::Top: return {static_cast<double>(c.x), static_cast<double>(c.y + 1)};
    case CellSide::Left: return {static_cast<double>(c.x - 1), static_cast<double>(c.y)};
  }
  return {};
}

}  // namespace

Rasterization rasterize(const AlignedLayout& layout, const GridConfig& cfg) {
  cfg.check();
  const int g = cfg.grid_size;
  const Canvas canvas = cfg.canvas();
  const SewingPattern& pat = layout.pattern;
  const std::size_t np = pat.panels.size();
  const int usable = g - cfg.margin_cells;

  std::vector<std::vector<Polyline>> grid_loops(np);
  for (std::size_t pi = 0; pi < np; ++pi) {
    for (const auto& loop : layout.panels[pi].loops) {
      Polyline l;
      for (const auto& q : loop) {
        const Point2 v = canvas.to_grid(q);
        if (v.x < 0.0 || v.y < 0.0 || v.x > usable || v.y > usable)
          throw EncodeError(EncodeStage::OutOfCanvas, "panel '" + pat.panels[pi].name + "' leaves the usable canvas");
        l.push_back(v);
      }
      grid_loops[pi].push_back(std::move(l));
    }
  }

  Rasterization r;
  r.image = GarmentImage(g, canvas);
  for (int side = 0; side < 2; ++side) {
    r.owner[side].assign(static_cast<std::size_t>(g) * static_cast<std::size_t>(g), -1);
    for (int y = 0; y < usable; ++y) {
      for (int x = 0; x < usable; ++x) {
        const Point2 c{x + 0.5, y + 0.5};
        for (std::size_t pi = 0; pi < np; ++pi) {
          if (static_cast<int>(layout.panels[pi].side) != side) continue;
          if (point_in_loops(grid_loops[pi], c, 1e-9)) {
            r.owner[side][static_cast<std::size_t>(y * g + x)] = static_cast<int>(pi);
            break;
          }
        }
      }
    }
  }
  const auto owner = [&](LayerSide side, int x, int y) {
    if (x < 0 || y < 0 || x >= g || y >= g) return -1;
    return r.owner[static_cast<int>(side)][static_cast<std::size_t>(y * g + x)];
  };

  std::map<std::pair<int, int>, std::pair<int, int>> partner;  // (panel, edge) -> (panel, edge)
  for (const auto& s : pat.stitches) {
    const int a = pat.find(s.a.panel);
    const int b = pat.find(s.b.panel);
    for (int e = s.a.first; e <= s.a.last; ++e) partner[{a, e}] = {b, s.b.first};
    for (int e = s.b.first; e <= s.b.last; ++e) partner[{b, e}] = {a, s.a.first};
  }

  for (std::size_t pi = 0; pi < np; ++pi) {
    const Panel& p = pat.panels[pi];
    const AlignedPanel& ap = layout.panels[pi];
    const auto mine = [&](int x, int y) { return owner(ap.side, x, y) == static_cast<int>(pi); };
    std::vector<CellCoord> cells;
    for (int y = 0; y < g; ++y)
      for (int x = 0; x < g; ++x)
        if (mine(x, y)) cells.push_back({x, y});
    if (cells.empty())
      throw EncodeError(EncodeStage::Rasterize, "panel '" + p.name + "' covers no cell at G=" + std::to_string(g));

    PanelRaster pr;
    pr.panel = static_cast<int>(pi);
    pr.side = ap.side;

    // Dart chains: a lattice staircase from the mouth (on the block boundary) to the tip (interior).
    std::set<LatticeEdge> cut;
    for (const auto& dart : ap.darts) {
      const Point2 m = canvas.to_grid(dart.mouth);
      const Point2 t = canvas.to_grid(dart.tip);
      std::pair<int, int> mouth{-1, -1}, tip{-1, -1};
      double dm = kInf, dt = kInf;
      for (const auto& c : cells) {
        for (int dy = 0; dy <= 1; ++dy) {
          for (int dx = 0; dx <= 1; ++dx) {
            const int vx = c.x + dx, vy = c.y + dy;
            const int around = mine(vx - 1, vy - 1) + mine(vx, vy - 1) + mine(vx - 1, vy) + mine(vx, vy);
            const Point2 v{static_cast<double>(vx), static_cast<double>(vy)};
            if (around < 4 && distance(v, m) < dm) {
              dm = distance(v, m);
              mouth = {vx, vy};
            }
            if (around == 4 && distance(v, t) < dt) {
              dt = distance(v, t);
              tip = {vx, vy};
            }
          }
        }
      }
      if (tip.first < 0)
        throw EncodeError(EncodeStage::Rasterize, "panel '" + p.name + "': dart tip has no interior lattice vertex");
      const Point2 a{static_cast<double>(mouth.first), static_cast<double>(mouth.second)};
      const Point2 b{static_cast<double>(tip.first), static_cast<double>(tip.second)};
      auto cur = mouth;
      while (cur != tip) {
        const int sx = tip.first > cur.first ? 1 : (tip.first < cur.first ? -1 : 0);
        const int sy = tip.second > cur.second ? 1 : (tip.second < cur.second ? -1 : 0);
        std::pair<int, int> next = cur;
        if (sx != 0 && sy != 0) {
          const Point2 px{static_cast<double>(cur.first + sx), static_cast<double>(cur.second)};
          const Point2 py{static_cast<double>(cur.first), static_cast<double>(cur.second + sy)};
          if (point_segment_distance(py, a, b) <= point_segment_distance(px, a, b))
            next.second += sy;
          else
            next.first += sx;
        } else if (sx != 0) {
          next.first += sx;
        } else {
          next.second += sy;
        }
        const LatticeEdge e = next.second == cur.second
                                  ? LatticeEdge{std::min(cur.first, next.first), cur.second, true}
                                  : LatticeEdge{cur.first, std::min(cur.second, next.second), false};
        const bool inner = e.horizontal ? mine(e.x, e.y - 1) && mine(e.x, e.y) : mine(e.x - 1, e.y) && mine(e.x, e.y);
        if (!inner)
          throw EncodeError(EncodeStage::Rasterize, "panel '" + p.name + "': dart chain leaves the panel");
        cut.insert(e);
        pr.dart_edges.push_back(e);
        cur = next;
      }
      if (pr.dart_edges.empty())
        throw EncodeError(EncodeStage::Rasterize, "panel '" + p.name + "': dart is shorter than one cell");
    }

    try {
      pr.mesh = build_quad_mesh(cells, [&](const LatticeEdge& e) { return cut.count(e) > 0; });
    } catch (const Error& e) {
      throw EncodeError(EncodeStage::Rasterize, "panel '" + p.name + "': " + e.what());
    }

    // Pattern loop for each mesh loop: outer to outer, holes by nearest centroid.
    const auto& mesh = pr.mesh;
    std::vector<int> source(mesh.boundary.size(), -1);
    source[0] = 0;
    std::vector<bool> used(mesh.boundary.size(), false);
    used[0] = true;
    for (std::size_t li = 1; li < p.loops.size(); ++li) {
      const Point2 hc = area_centroid(std::span<const Point2>(grid_loops[pi][li]));
      double best = kInf;
      int arg = -1;
      for (std::size_t ml = 1; ml < mesh.boundary.size(); ++ml) {
        if (used[ml]) continue;
        Polyline poly;
        for (const auto& s : mesh.boundary[ml]) poly.push_back(mesh.vertices[static_cast<std::size_t>(s.from)]);
        const double d = distance(area_centroid(std::span<const Point2>(poly)), hc);
        if (d < best) {
          best = d;
          arg = static_cast<int>(ml);
        }
      }
      if (arg >= 0) {
        used[static_cast<std::size_t>(arg)] = true;
        source[static_cast<std::size_t>(arg)] = static_cast<int>(li);
      }
    }

    pr.correspondence.resize(mesh.boundary.size());
    pr.step_edge.resize(mesh.boundary.size());
    for (std::size_t ml = 0; ml < mesh.boundary.size(); ++ml) {
      const auto& loop = mesh.boundary[ml];
      const std::size_t n = loop.size();
      pr.step_edge[ml].assign(n, -1);
      if (source[ml] < 0) continue;
      const OrientedLoop ol = orient_loop(p, ap, static_cast<std::size_t>(source[ml]), canvas, ml == 0);
      std::vector<Point2> lattice;
      for (const auto& s : loop) lattice.push_back(mesh.vertices[static_cast<std::size_t>(s.from)]);
      const auto pos = anchor_corners(lattice, ol.corners);
      if (pos.empty())
        throw EncodeError(EncodeStage::Correspondence, "panel '" + p.name + "' loop " + std::to_string(source[ml]) +
                                                           " has more corners than lattice boundary vertices");
      const std::size_t k = pos.size();
      std::vector<double> cum(k + 1, 0.0);
      for (std::size_t i = 0; i < k; ++i) cum[i + 1] = cum[i] + length(ol.pieces[i]);
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t a = pos[i];
        const std::size_t span = (pos[(i + 1) % k] + n - a) % n == 0 ? n : (pos[(i + 1) % k] + n - a) % n;
        for (std::size_t o = 0; o < span; ++o) {
          const std::size_t j = (a + o) % n;
          const double t = static_cast<double>(o) / static_cast<double>(span);
          const Point2 target = o == 0 ? ol.pieces[i].front() : point_at_fraction(ol.pieces[i], t);
          pr.correspondence[ml].push_back(
              {loop[j].from, (cum[i] + t * (cum[i + 1] - cum[i])) / cum[k], target});
          pr.step_edge[ml][j] = ol.edge_ids[i];
        }
      }
      std::sort(pr.correspondence[ml].begin(), pr.correspondence[ml].end(),
                [](const auto& x, const auto& y) { return x.param < y.param; });
    }
    r.panels.push_back(std::move(pr));
  }

  // Edge types.
  std::map<std::pair<int, LatticeEdge>, std::pair<int, int>> step_source;  // (layer, edge) -> (panel, src edge)
  for (const auto& pr : r.panels)
    for (std::size_t ml = 0; ml < pr.mesh.boundary.size(); ++ml)
      for (std::size_t j = 0; j < pr.mesh.boundary[ml].size(); ++j)
        step_source[{static_cast<int>(pr.side), pr.mesh.boundary[ml][j].edge}] = {pr.panel, pr.step_edge[ml][j]};
  const auto stitched_to = [&](int panel, int edge) {
    const auto it = partner.find({panel, edge});
    return it == partner.end() ? -1 : it->second.first;
  };
  for (const auto& pr : r.panels) {
    Layer& layer = r.image.layer(pr.side);
    for (std::size_t ml = 0; ml < pr.mesh.boundary.size(); ++ml) {
      for (std::size_t j = 0; j < pr.mesh.boundary[ml].size(); ++j) {
        const auto& s = pr.mesh.boundary[ml][j];
        const Point2 ac = across_cell(s, pr.mesh.cells[static_cast<std::size_t>(s.cell)]);
        const int q = owner(pr.side, static_cast<int>(ac.x), static_cast<int>(ac.y));
        const int src = pr.step_edge[ml][j];
        EdgeType t = EdgeType::NonStitch;
        if (q == pr.panel) {
          t = EdgeType::SideBySide;
        } else if (q >= 0) {
          const auto it = step_source.find({static_cast<int>(pr.side), s.edge});
          const int qsrc = it == step_source.end() ? -1 : it->second.second;
          if ((src >= 0 && stitched_to(pr.panel, src) == q) || (qsrc >= 0 && stitched_to(q, qsrc) == pr.panel))
            t = EdgeType::SideBySide;
        } else if (src >= 0) {
          const int other = stitched_to(pr.panel, src);
          if (other >= 0 && layout.panels[static_cast<std::size_t>(other)].side != pr.side) t = EdgeType::FrontToBack;
        }
        layer.set_type(s.edge, t);
      }
    }
  }

  // FrontToBack edges need a partner at the same position on the other layer.
  const auto boundary_on = [&](LayerSide side, const LatticeEdge& e) {
    const int a = e.horizontal ? owner(side, e.x, e.y - 1) : owner(side, e.x - 1, e.y);
    const int b = owner(side, e.x, e.y);
    return (a >= 0) != (b >= 0);
  };
  for (int y = 0; y < g; ++y) {
    for (int x = 0; x < g; ++x) {
      for (const bool h : {true, false}) {
        const LatticeEdge e{x, y, h};
        for (const LayerSide side : {LayerSide::Front, LayerSide::Back}) {
          Layer& me = r.image.layer(side);
          Layer& other = r.image.layer(opposite(side));
          if (me.type(e) != EdgeType::FrontToBack || other.type(e) == EdgeType::FrontToBack) continue;
          if (other.type(e) == EdgeType::NonStitch && boundary_on(opposite(side), e))
            other.set_type(e, EdgeType::FrontToBack);
          else
            me.set_type(e, EdgeType::NonStitch);
        }
      }
    }
  }

  for (int side = 0; side < 2; ++side) {
    Layer& layer = r.image.layer(static_cast<LayerSide>(side));
    for (int y = 0; y < g; ++y)
      for (int x = 0; x < g; ++x) layer.at(x, y).inside = r.owner[side][static_cast<std::size_t>(y * g + x)] >= 0;
  }
  return r;
}

GarmentImage encode(const SewingPattern& pattern, const GridConfig& cfg) {
  const SewingPattern split = classify_and_split(pattern);
  const AlignedLayout layout = align_layout(split, cfg);
  Rasterization r = rasterize(layout, cfg);
  for (const auto& pr : r.panels) {
    std::vector<VertexTarget> targets;
    for (const auto& loop : pr.correspondence)
      for (const auto& c : loop) targets.push_back({c.vertex, c.target});
    std::vector<Point2> v;
    try {
      v = solve_constrained(pr.mesh, targets);
    } catch (const SolverError& e) {
      throw EncodeError(EncodeStage::Solve, "panel '" + layout.pattern.panels[static_cast<std::size_t>(pr.panel)].name +
                                                "': " + e.what());
    }
    Layer& layer = r.image.layer(pr.side);
    for (std::size_t i = 0; i < pr.mesh.cells.size(); ++i) {
      const auto& k = pr.mesh.corners[i];
      const auto at = [&](int c) { return v[static_cast<std::size_t>(k[static_cast<std::size_t>(c)])]; };
      const std::array<Point2, 4> cols{at(1) - at(0), at(2) - at(1), at(2) - at(3), at(3) - at(0)};
      Cell& cell = layer.at(pr.mesh.cells[i].x, pr.mesh.cells[i].y);
      for (std::size_t c = 0; c < 4; ++c)
        cell.deform[c] = {static_cast<float>(cols[c].x), static_cast<float>(cols[c].y)};
    }
  }
  auto violations = validate(r.image);
  if (!violations.empty())
    throw EncodeError(EncodeStage::Validation, std::to_string(violations.size()) + " violation(s), first: " +
                                                   format_violation(violations.front()),
                      std::move(violations));
  return r.image;
}

}  // namespace gimg
