#include "gimg/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

#include "gimg/lsq_solver.hpp"

namespace gimg {

namespace {

std::pair<CellCoord, CellCoord> cells_of(const LatticeEdge& e) {
  if (e.horizontal) return {{e.x, e.y - 1}, {e.x, e.y}};
  return {{e.x - 1, e.y}, {e.x, e.y}};
}

/// Cluster index per cell of one layer, -1 outside.
std::vector<int> label_cells(const GarmentImage& gi, const std::vector<PanelCluster>& clusters, LayerSide side) {
  const int g = gi.grid_size();
  std::vector<int> label(static_cast<std::size_t>(g * g), -1);
  for (std::size_t k = 0; k < clusters.size(); ++k)
    if (clusters[k].side == side)
      for (const auto& c : clusters[k].cells) label[static_cast<std::size_t>(c.y * g + c.x)] = static_cast<int>(k);
  return label;
}

struct RawPanel {
  std::vector<std::vector<Point2>> loops;  // canvas cm, front view
  std::vector<std::vector<BoundaryStep>> steps;
  bool degenerate = false;
};

RawPanel decode_raw(const PanelCluster& cluster, const GarmentImage& gi, const DecodeOptions& opt) {
  const QuadMesh mesh = cluster_mesh(cluster, gi);
  const Layer& layer = gi.layer(cluster.side);
  std::vector<Point2> f(mesh.edges.size());
  std::vector<int> count(mesh.edges.size(), 0);
  for (std::size_t i = 0; i < mesh.cells.size(); ++i) {
    const Cell& cell = layer.at(mesh.cells[i].x, mesh.cells[i].y);
    for (std::size_t s = 0; s < 4; ++s) {
      const auto e = static_cast<std::size_t>(mesh.cell_edges[i][s]);
      f[e] += Point2{cell.deform[s].dx, cell.deform[s].dy};
      ++count[e];
    }
  }
  for (std::size_t e = 0; e < f.size(); ++e) {
    f[e] = (1.0 / count[e]) * f[e];
    if (!is_finite(f[e])) throw DecodeError("non-finite deformation in cluster");
  }
  const std::vector<Point2> v = solve_anchored(mesh, f, opt.anchor_weight);

  RawPanel raw;
  const Canvas& canvas = gi.canvas();
  for (const auto& loop : mesh.boundary) {
    std::vector<Point2> pts;
    for (const auto& s : loop) pts.push_back(v[static_cast<std::size_t>(s.from)]);
    if (opt.smooth) {
      for (int it = 0; it < 3; ++it) {
        std::vector<Point2> next = pts;
        const std::size_t n = pts.size();
        for (std::size_t k = 0; k < n; ++k) {
          const Point2 avg = 0.5 * (pts[(k + n - 1) % n] + pts[(k + 1) % n]);
          next[k] = pts[k] + 0.5 * (avg - pts[k]);
        }
        pts = std::move(next);
      }
    }
    for (auto& p : pts) p = canvas.to_cm(p);
    raw.loops.push_back(std::move(pts));
    raw.steps.push_back(loop);
  }
  double a = 0.0;
  for (std::size_t k = 0; k < raw.loops.size(); ++k) a += signed_area(raw.loops[k]);
  raw.degenerate = std::abs(a) < 0.25 * canvas.cell_size * canvas.cell_size;
  return raw;
}

DecodedPanel build_panel(const PanelCluster& cluster, const GarmentImage& gi, const RawPanel& raw) {
  DecodedPanel out;
  Panel& p = out.panel;
  p.side = cluster.side == LayerSide::Front ? Side::Front : Side::Back;
  int minx = cluster.cells.front().x, maxx = minx, miny = cluster.cells.front().y;
  for (const auto& c : cluster.cells) {
    minx = std::min(minx, c.x);
    maxx = std::max(maxx, c.x);
    miny = std::min(miny, c.y);
  }
  const Canvas& canvas = gi.canvas();
  const Point2 lo = canvas.to_cm({static_cast<double>(minx), static_cast<double>(miny)});
  const Point2 hi = canvas.to_cm({static_cast<double>(maxx + 1), static_cast<double>(miny)});
  p.placement = p.side == Side::Front ? lo : Point2{-hi.x, lo.y};
  for (std::size_t l = 0; l < raw.loops.size(); ++l) {
    const int base = static_cast<int>(p.vertices.size());
    const int n = static_cast<int>(raw.loops[l].size());
    std::vector<PanelEdge> edges;
    std::vector<LatticeEdge> lat;
    for (int k = 0; k < n; ++k) {
      Point2 q = raw.loops[l][static_cast<std::size_t>(k)];
      if (p.side == Side::Back) q = {-q.x, q.y};
      p.vertices.push_back(q - p.placement);
      edges.push_back({base + k, base + (k + 1) % n, std::nullopt});
      lat.push_back(raw.steps[l][static_cast<std::size_t>(k)].edge);
    }
    p.loops.push_back(std::move(edges));
    out.lattice_edges.push_back(std::move(lat));
  }
  out.degenerate = raw.degenerate;
  return out;
}

}  // namespace

std::vector<PanelCluster> cluster_panels(const GarmentImage& gi) {
  std::vector<PanelCluster> out;
  const int g = gi.grid_size();
  for (const LayerSide side : {LayerSide::Front, LayerSide::Back}) {
    const Layer& l = gi.layer(side);
    std::vector<bool> seen(static_cast<std::size_t>(g * g), false);
    for (int y = 0; y < g; ++y) {
      for (int x = 0; x < g; ++x) {
        if (!l.at(x, y).inside || seen[static_cast<std::size_t>(y * g + x)]) continue;
        PanelCluster c;
        c.side = side;
        std::queue<CellCoord> q;
        q.push({x, y});
        seen[static_cast<std::size_t>(y * g + x)] = true;
        while (!q.empty()) {
          const CellCoord cur = q.front();
          q.pop();
          c.cells.push_back(cur);
          const std::array<std::pair<CellCoord, LatticeEdge>, 4> nb{{
              {{cur.x, cur.y - 1}, {cur.x, cur.y, true}},
              {{cur.x + 1, cur.y}, {cur.x + 1, cur.y, false}},
              {{cur.x, cur.y + 1}, {cur.x, cur.y + 1, true}},
              {{cur.x - 1, cur.y}, {cur.x, cur.y, false}},
          }};
          for (const auto& [n, e] : nb) {
            if (!l.inside(n.x, n.y) || seen[static_cast<std::size_t>(n.y * g + n.x)]) continue;
            if (l.type(e) != EdgeType::NonBoundary) continue;
            seen[static_cast<std::size_t>(n.y * g + n.x)] = true;
            q.push(n);
          }
        }
        std::sort(c.cells.begin(), c.cells.end());
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

QuadMesh cluster_mesh(const PanelCluster& cluster, const GarmentImage& gi) {
  const Layer& l = gi.layer(cluster.side);
  const std::set<CellCoord> cells(cluster.cells.begin(), cluster.cells.end());
  return build_quad_mesh(cluster.cells, [&](const LatticeEdge& e) {
    const auto [a, b] = cells_of(e);
    return cells.count(a) && cells.count(b) && l.type(e) != EdgeType::NonBoundary;
  });
}

DecodedPanel decode_panel(const PanelCluster& cluster, const GarmentImage& gi, const DecodeOptions& opt) {
  return build_panel(cluster, gi, decode_raw(cluster, gi, opt));
}

SewingPattern decode(const GarmentImage& gi, const DecodeOptions& opt) {
  const auto clusters = cluster_panels(gi);
  const std::vector<int> label[2] = {label_cells(gi, clusters, LayerSide::Front),
                                     label_cells(gi, clusters, LayerSide::Back)};
  const int g = gi.grid_size();
  const auto cluster_at = [&](LayerSide side, CellCoord c) {
    if (c.x < 0 || c.y < 0 || c.x >= g || c.y >= g) return -1;
    return label[static_cast<int>(side)][static_cast<std::size_t>(c.y * g + c.x)];
  };

  // Stitch key of a boundary step: type and partner cluster (-1 for none).
  struct Key {
    EdgeType type = EdgeType::NonStitch;
    int partner = -1;
    bool operator==(const Key&) const = default;
  };
  std::vector<RawPanel> raws;
  std::vector<std::vector<std::vector<Key>>> keys(clusters.size());
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    RawPanel raw = decode_raw(clusters[k], gi, opt);
    const LayerSide side = clusters[k].side;
    const Layer& l = gi.layer(side);
    for (std::size_t li = 0; li < raw.steps.size(); ++li) {
      std::vector<Key> ks;
      for (const auto& s : raw.steps[li]) {
        const EdgeType t = l.type(s.edge);
        Key key{t, -1};
        const auto [a, b] = cells_of(s.edge);
        if (t == EdgeType::SideBySide) {
          const int ca = cluster_at(side, a), cb = cluster_at(side, b);
          const CellCoord own = [&] {
            return std::find(clusters[k].cells.begin(), clusters[k].cells.end(), a) != clusters[k].cells.end() ? a : b;
          }();
          const int across = own == a ? cb : ca;
          key.partner = across;
          if (across < 0) key.type = EdgeType::NonStitch;
        } else if (t == EdgeType::FrontToBack) {
          const LayerSide os = opposite(side);
          if (gi.layer(os).type(s.edge) != EdgeType::FrontToBack)
            throw DecodeError("FRONT_TO_BACK edge " + to_string(s.edge) + " on the " +
                              (side == LayerSide::Front ? "front" : "back") + " layer has no partner");
          const int ca = cluster_at(os, a), cb = cluster_at(os, b);
          if ((ca >= 0) == (cb >= 0))
            throw DecodeError("FRONT_TO_BACK edge " + to_string(s.edge) + " has no partner panel on the other layer");
          key.partner = ca >= 0 ? ca : cb;
        }
        ks.push_back(key);
      }
      // Start the loop at a key change so no run wraps around.
      const std::size_t n = ks.size();
      std::size_t start = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (!(ks[j] == ks[(j + n - 1) % n])) {
          start = j;
          break;
        }
      std::rotate(ks.begin(), ks.begin() + static_cast<std::ptrdiff_t>(start), ks.end());
      std::rotate(raw.steps[li].begin(), raw.steps[li].begin() + static_cast<std::ptrdiff_t>(start), raw.steps[li].end());
      std::rotate(raw.loops[li].begin(), raw.loops[li].begin() + static_cast<std::ptrdiff_t>(start), raw.loops[li].end());
      keys[k].push_back(std::move(ks));
    }
    raws.push_back(std::move(raw));
  }

  SewingPattern out;
  out.units_per_cm = 1.0;
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    DecodedPanel d = build_panel(clusters[k], gi, raws[k]);
    d.panel.name = (clusters[k].side == LayerSide::Front ? "front_" : "back_") + std::to_string(k);
    out.panels.push_back(std::move(d.panel));
  }

  // (layer, lattice edge) -> (cluster, global step index) for every boundary step.
  std::map<std::pair<int, LatticeEdge>, std::vector<std::pair<int, int>>> where;
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    int off = 0;
    for (const auto& loop : raws[k].steps) {
      for (std::size_t j = 0; j < loop.size(); ++j)
        where[{static_cast<int>(clusters[k].side), loop[j].edge}].push_back({static_cast<int>(k), off + static_cast<int>(j)});
      off += static_cast<int>(loop.size());
    }
  }
  const auto partner_index = [&](LayerSide side, const LatticeEdge& e, int cluster, int not_index) {
    const auto it = where.find({static_cast<int>(side), e});
    if (it == where.end()) return -1;
    for (const auto& [c, idx] : it->second)
      if (c == cluster && idx != not_index) return idx;
    return -1;
  };

  for (std::size_t k = 0; k < clusters.size(); ++k) {
    const LayerSide side = clusters[k].side;
    int off = 0;
    for (std::size_t li = 0; li < keys[k].size(); ++li) {
      const auto& ks = keys[k][li];
      const auto& steps = raws[k].steps[li];
      const std::size_t n = ks.size();
      std::size_t j = 0;
      while (j < n) {
        std::size_t e = j;
        while (e + 1 < n && ks[e + 1] == ks[j]) ++e;
        const Key key = ks[j];
        const int first = off + static_cast<int>(j);
        const int last = off + static_cast<int>(e);
        j = e + 1;
        if (key.partner < 0) continue;
        const std::string& me = out.panels[k].name;
        if (key.type == EdgeType::SideBySide && key.partner == static_cast<int>(k)) {
          const int len = last - first + 1;
          if (len < 2) continue;
          const int half = len / 2;
          out.stitches.push_back({{me, first, first + half - 1}, {me, last - half + 1, last}});
          continue;
        }
        if (key.type == EdgeType::SideBySide && key.partner < static_cast<int>(k)) continue;
        if (key.type == EdgeType::FrontToBack && side != LayerSide::Front) continue;
        const LayerSide pside = key.type == EdgeType::FrontToBack ? LayerSide::Back : side;
        // Pair step by step; start a new stitch where the partner's indices stop being consecutive.
        int a0 = first, b0 = -1, b1 = -1, prev = -1;
        const auto flush = [&](int a1) {
          if (b0 < 0) return;
          out.stitches.push_back({{me, a0, a1}, {out.panels[static_cast<std::size_t>(key.partner)].name,
                                                 std::min(b0, b1), std::max(b0, b1)}});
        };
        for (int s = first; s <= last; ++s) {
          const int bi = partner_index(pside, steps[static_cast<std::size_t>(s - off)].edge, key.partner, -1);
          if (bi < 0) throw DecodeError("no partner step for lattice edge " + to_string(steps[static_cast<std::size_t>(s - off)].edge));
          if (prev >= 0 && std::abs(bi - prev) != 1) {
            flush(s - 1);
            a0 = s;
            b0 = -1;
          }
          if (b0 < 0) b0 = bi;
          b1 = bi;
          prev = bi;
        }
        flush(last);
      }
      off += static_cast<int>(n);
    }
  }
  normalize_orientation(out);
  return out;
}

}  // namespace gimg
