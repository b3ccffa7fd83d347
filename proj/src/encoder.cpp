#include "gimg/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>

namespace gimg {

void GridConfig::check() const {
  if (grid_size < 4) throw Error("grid size must be at least 4");
  if (margin_cells < 1 || margin_cells >= grid_size) throw Error("margin_cells must be in [1, G)");
  if (!(extent > 0.0) || !std::isfinite(extent)) throw Error("canvas extent must be positive");
  if (!is_finite(origin)) throw Error("canvas origin must be finite");
}

std::string_view to_string(EncodeStage s) {
  switch (s) {
    case EncodeStage::Split: return "SPLIT";
    case EncodeStage::Layout: return "LAYOUT";
    case EncodeStage::Overlap: return "OVERLAP";
    case EncodeStage::OutOfCanvas: return "OUT_OF_CANVAS";
    case EncodeStage::Rasterize: return "RASTERIZE";
    case EncodeStage::Correspondence: return "CORRESPONDENCE";
    case EncodeStage::Solve: return "SOLVE";
    case EncodeStage::Validation: return "VALIDATION";
  }
  return "UNKNOWN";
}

EncodeError::EncodeError(EncodeStage stage, const std::string& what, std::vector<Violation> violations)
    : Error(std::string(to_string(stage)) + ": " + what), stage_(stage), violations_(std::move(violations)) {}

std::string EncodeError::reason() const {
  if (!violations_.empty()) return std::string(to_string(violations_.front().kind));
  return std::string(to_string(stage_));
}

Point2 to_canvas(const Panel& panel, Point2 local) {
  const Point2 own = local + panel.placement;
  if (panel.side == Side::Back) return {-own.x, own.y};
  return own;
}

// ---------------------------------------------------------------------------
// Wrap splitting

namespace {

struct Crossing {
  std::size_t edge = 0;  ///< loop-local index
  double t = 0.0;        ///< 0 means the edge's start vertex
  Point2 p;
};

int side_of(double x, double cut) {
  if (x < cut) return -1;
  if (x > cut) return 1;
  return 0;
}

std::vector<Crossing> find_crossings(const Panel& p, double cut) {
  const auto& loop = p.loops[0];
  const std::size_t n = loop.size();
  std::vector<Crossing> out;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = p.vertices[static_cast<std::size_t>(loop[i].start)];
    const Point2 b = p.vertices[static_cast<std::size_t>(loop[i].end)];
    const int sa = side_of(a.x, cut);
    const int sb = side_of(b.x, cut);
    if (sa == 0) {
      const Point2 prev = p.vertices[static_cast<std::size_t>(loop[(i + n - 1) % n].start)];
      const int sp = side_of(prev.x, cut);
      if (sb == 0 || sp == 0)
        throw EncodeError(EncodeStage::Split, "panel '" + p.name + "': boundary runs along the wrap cut");
      if (sp != sb) out.push_back({i, 0.0, a});
      continue;
    }
    if (sb == 0 || sa == sb) {
      if (loop[i].control) {
        // A curve may bulge across the cut even when both ends are on one side.
        const Polyline poly = [&] {
          Polyline q;
          for (int k = 0; k <= kCurveSegments; ++k) q.push_back(p.edge_point(p.global_edge(0, i), double(k) / kCurveSegments));
          return q;
        }();
        for (const auto& q : poly)
          if (side_of(q.x, cut) == -sa)
            throw EncodeError(EncodeStage::Split, "panel '" + p.name + "': curved edge crosses the wrap cut");
      }
      continue;
    }
    if (loop[i].control)
      throw EncodeError(EncodeStage::Split, "panel '" + p.name + "': curved edge crosses the wrap cut");
    const double t = (cut - a.x) / (b.x - a.x);
    out.push_back({i, t, {cut, a.y + t * (b.y - a.y)}});
  }
  return out;
}

struct Half {
  Panel panel;
  /// New global edge index for each original global edge, -1 if absent or split.
  std::map<int, int> remap;
  int cut_edge = 0;
};

/// Loop pieces from crossing `from` to crossing `to`, closed by the cut.
Half build_half(const Panel& src, const Crossing& from, const Crossing& to, const std::string& name) {
  const auto& loop = src.loops[0];
  const std::size_t n = loop.size();
  Half h;
  h.panel.name = name;
  std::map<int, int> vmap;
  const auto vertex = [&](int old) {
    const auto [it, ins] = vmap.emplace(old, static_cast<int>(h.panel.vertices.size()));
    if (ins) h.panel.vertices.push_back(src.vertices[static_cast<std::size_t>(old)]);
    return it->second;
  };
  const auto fresh = [&](Point2 p) {
    h.panel.vertices.push_back(p);
    return static_cast<int>(h.panel.vertices.size()) - 1;
  };
  std::vector<PanelEdge> out;
  const int first_v = from.t > 0.0 ? fresh(from.p) : vertex(loop[from.edge].start);
  int cur = first_v;
  std::size_t i = from.edge;
  bool first = true;
  for (;;) {
    const PanelEdge& e = loop[i];
    if (!first && i == to.edge) {
      if (to.t > 0.0) {
        const int end = fresh(to.p);
        out.push_back({cur, end, std::nullopt});
        cur = end;
      }
      break;
    }
    if (first && from.t > 0.0) {
      const int end = vertex(e.end);
      out.push_back({cur, end, std::nullopt});
      cur = end;
    } else {
      const int end = vertex(e.end);
      out.push_back({cur, end, e.control});
      h.remap[src.global_edge(0, i)] = static_cast<int>(out.size()) - 1;
      cur = end;
    }
    first = false;
    i = (i + 1) % n;
  }
  h.cut_edge = static_cast<int>(out.size());
  out.push_back({cur, first_v, std::nullopt});
  h.panel.loops.push_back(std::move(out));
  return h;
}

}  // namespace

SewingPattern classify_and_split(const SewingPattern& input) {
  bool any = false;
  for (const auto& p : input.panels) any = any || p.side == Side::Wrap;
  if (!any) return input;

  SewingPattern out;
  out.units_per_cm = input.units_per_cm;
  // (old panel, old edge) -> (new panel name, new edge)
  std::map<std::pair<std::string, int>, std::pair<std::string, int>> moved;
  std::vector<Stitch> cut_stitches;
  for (const auto& p : input.panels) {
    if (p.side != Side::Wrap) {
      out.panels.push_back(p);
      continue;
    }
    if (!p.wrap_cut) throw EncodeError(EncodeStage::Split, "wrap panel '" + p.name + "' has no wrap_cut");
    const double cut = *p.wrap_cut;
    const auto xs = find_crossings(p, cut);
    if (xs.size() != 2)
      throw EncodeError(EncodeStage::Split, "panel '" + p.name + "': wrap cut crosses the outline " +
                                                std::to_string(xs.size()) + " times, expected 2");
    Half h1 = build_half(p, xs[0], xs[1], "");
    Half h2 = build_half(p, xs[1], xs[0], "");
    // The front part is the one left of the cut.
    const auto mean_x = [](const Panel& q) {
      double s = 0.0;
      for (const auto& v : q.vertices) s += v.x;
      return s / static_cast<double>(q.vertices.size());
    };
    if (mean_x(h1.panel) > mean_x(h2.panel)) std::swap(h1, h2);
    Half& front = h1;
    Half& back = h2;
    front.panel.name = p.name + "_front";
    back.panel.name = p.name + "_back";
    front.panel.side = Side::Front;
    back.panel.side = Side::Back;
    front.panel.placement = p.placement;
    back.panel.placement = {-(2.0 * cut + p.placement.x), p.placement.y};

    // Holes go to the half that contains them.
    for (std::size_t li = 1; li < p.loops.size(); ++li) {
      int s = 0;
      for (const auto& e : p.loops[li]) {
        const int k = side_of(p.vertices[static_cast<std::size_t>(e.start)].x, cut);
        if (k == 0 || (s != 0 && k != s))
          throw EncodeError(EncodeStage::Split, "panel '" + p.name + "': hole " + std::to_string(li) + " crosses the wrap cut");
        s = k;
      }
      Half& h = s < 0 ? front : back;
      std::vector<PanelEdge> loop;
      for (std::size_t i = 0; i < p.loops[li].size(); ++i) {
        PanelEdge e = p.loops[li][i];
        const auto add = [&](int old) {
          h.panel.vertices.push_back(p.vertices[static_cast<std::size_t>(old)]);
          return static_cast<int>(h.panel.vertices.size()) - 1;
        };
        e.start = i == 0 ? add(e.start) : loop.back().end;
        e.end = i + 1 == p.loops[li].size() ? loop.front().start : add(e.end);
        h.remap[p.global_edge(li, i)] = static_cast<int>(h.panel.edge_count() + loop.size());
        loop.push_back(e);
      }
      h.panel.loops.push_back(std::move(loop));
    }
    for (const Half* h : {&front, &back})
      for (const auto& [old, now] : h->remap) moved[{p.name, old}] = {h->panel.name, now};
    cut_stitches.push_back({{front.panel.name, front.cut_edge, front.cut_edge},
                            {back.panel.name, back.cut_edge, back.cut_edge}});
    out.panels.push_back(std::move(front.panel));
    out.panels.push_back(std::move(back.panel));
  }

  const auto retarget = [&](const EdgeRef& r, std::size_t si) {
    const int pi = input.find(r.panel);
    if (pi < 0 || input.panels[static_cast<std::size_t>(pi)].side != Side::Wrap) return r;
    EdgeRef n;
    for (int e = r.first; e <= r.last; ++e) {
      const auto it = moved.find({r.panel, e});
      if (it == moved.end())
        throw EncodeError(EncodeStage::Split, "stitch " + std::to_string(si) + " uses an edge of '" + r.panel +
                                                  "' that the wrap cut splits");
      if (e == r.first) {
        n = {it->second.first, it->second.second, it->second.second};
      } else if (it->second.first != n.panel || it->second.second != n.last + 1) {
        throw EncodeError(EncodeStage::Split, "stitch " + std::to_string(si) + " crosses the wrap cut of '" + r.panel + "'");
      } else {
        n.last = it->second.second;
      }
    }
    return n;
  };
  for (std::size_t si = 0; si < input.stitches.size(); ++si)
    out.stitches.push_back({retarget(input.stitches[si].a, si), retarget(input.stitches[si].b, si)});
  for (auto& s : cut_stitches) out.stitches.push_back(std::move(s));
  try {
    check_pattern(out);
  } catch (const SemanticError& e) {
    throw EncodeError(EncodeStage::Split, e.what());
  }
  normalize_orientation(out);
  return out;
}

// ---------------------------------------------------------------------------
// Alignment

namespace {

struct WorkPanel {
  std::vector<Polyline> pts;                    // dense boundary, canvas cm
  std::vector<std::vector<int>> edge_of;        // source edge per point
  std::vector<std::vector<std::size_t>> first;  // first point index of each loop edge
};

/// Dense point indices of an edge range, including the end point.
std::vector<std::size_t> seam_indices(const Panel& p, const WorkPanel& w, const EdgeRef& r, std::size_t& loop_out) {
  const auto [loop, i0] = p.locate_edge(r.first);
  const auto i1 = p.locate_edge(r.last).second;
  loop_out = loop;
  const auto& first = w.first[loop];
  const std::size_t n = w.pts[loop].size();
  const std::size_t begin = first[i0];
  const std::size_t end = first[(i1 + 1) % first.size()];
  std::vector<std::size_t> idx;
  for (std::size_t k = begin;; k = (k + 1) % n) {
    idx.push_back(k);
    if (k == end && idx.size() > 1) break;
  }
  return idx;
}

Polyline gather(const Polyline& pts, const std::vector<std::size_t>& idx) {
  Polyline out;
  out.reserve(idx.size());
  for (const auto k : idx) out.push_back(pts[k]);
  return out;
}

std::vector<double> arc_fractions(const Polyline& pl) {
  std::vector<double> s(pl.size(), 0.0);
  for (std::size_t k = 1; k < pl.size(); ++k) s[k] = s[k - 1] + distance(pl[k - 1], pl[k]);
  const double total = s.back();
  for (auto& v : s) v = total > 0.0 ? v / total : 0.0;
  return s;
}

Point2 at_fraction(const Polyline& pl, const std::vector<double>& frac, double u) {
  if (u <= 0.0) return pl.front();
  if (u >= 1.0) return pl.back();
  const auto it = std::upper_bound(frac.begin(), frac.end(), u);
  const std::size_t k = static_cast<std::size_t>(it - frac.begin());
  const double span = frac[k] - frac[k - 1];
  return lerp(pl[k - 1], pl[k], span > 0.0 ? (u - frac[k - 1]) / span : 0.0);
}

struct DataPoint {
  std::size_t loop = 0;
  std::size_t index = 0;
  Point2 shift;
};

/// Inverse-distance weighted displacement of every dense point; data points
/// move exactly by their own shift.
void idw_warp(WorkPanel& w, const std::vector<DataPoint>& data) {
  if (data.empty()) return;
  std::map<std::pair<std::size_t, std::size_t>, std::pair<Point2, int>> merged;
  for (const auto& d : data) {
    auto& m = merged[{d.loop, d.index}];
    m.first += d.shift;
    m.second += 1;
  }
  std::vector<std::pair<Point2, Point2>> src;  // position, shift
  for (const auto& [key, v] : merged)
    src.push_back({w.pts[key.first][key.second], (1.0 / v.second) * v.first});
  std::vector<Polyline> moved = w.pts;
  for (std::size_t l = 0; l < w.pts.size(); ++l) {
    for (std::size_t k = 0; k < w.pts[l].size(); ++k) {
      if (const auto it = merged.find({l, k}); it != merged.end()) {
        moved[l][k] = w.pts[l][k] + (1.0 / it->second.second) * it->second.first;
        continue;
      }
      Point2 acc;
      double wsum = 0.0;
      for (const auto& [pos, shift] : src) {
        const Point2 d = w.pts[l][k] - pos;
        const double wt = 1.0 / std::max(dot(d, d), 1e-24);
        acc += wt * shift;
        wsum += wt;
      }
      moved[l][k] = w.pts[l][k] + (1.0 / wsum) * acc;
    }
  }
  w.pts = std::move(moved);
}

bool is_dart(const Panel& p, const Stitch& s) {
  if (s.a.panel != s.b.panel || s.a.first != s.a.last || s.b.first != s.b.last) return false;
  const PanelEdge& a = p.edge(s.a.first);
  const PanelEdge& b = p.edge(s.b.first);
  return a.end == b.start || b.end == a.start;
}

}  // namespace

AlignedLayout align_layout(const SewingPattern& input, const GridConfig& cfg) {
  cfg.check();
  AlignedLayout out;
  out.pattern = to_cm(input);
  const SewingPattern& pat = out.pattern;
  for (const auto& p : pat.panels)
    if (p.side == Side::Wrap) throw EncodeError(EncodeStage::Layout, "panel '" + p.name + "' is still a wrap panel");
  const std::size_t np = pat.panels.size();
  if (np == 0) throw EncodeError(EncodeStage::Layout, "pattern has no panels");
  const double spacing = cfg.cell_size() / 8.0;

  std::vector<WorkPanel> work(np);
  for (std::size_t pi = 0; pi < np; ++pi) {
    const Panel& p = pat.panels[pi];
    for (std::size_t li = 0; li < p.loops.size(); ++li) {
      Polyline pts;
      std::vector<int> edges;
      std::vector<std::size_t> first;
      int last_edge = -1;
      for (const auto& s : sample_boundary(p, li, spacing)) {
        if (s.edge != last_edge) first.push_back(pts.size());
        last_edge = s.edge;
        pts.push_back(to_canvas(p, s.p));
        edges.push_back(s.edge);
      }
      work[pi].pts.push_back(std::move(pts));
      work[pi].edge_of.push_back(std::move(edges));
      work[pi].first.push_back(std::move(first));
    }
  }

  // Root: largest Front panel (then largest Back), ties by name.
  std::vector<std::size_t> order(np);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Panel& pa = pat.panels[a];
    const Panel& pb = pat.panels[b];
    if ((pa.side == Side::Front) != (pb.side == Side::Front)) return pa.side == Side::Front;
    const double aa = panel_area(pa), ab = panel_area(pb);
    if (aa != ab) return aa > ab;
    return pa.name < pb.name;
  });
  out.root = static_cast<int>(order.front());

  std::vector<std::vector<std::size_t>> adj(np);
  for (std::size_t si = 0; si < pat.stitches.size(); ++si) {
    const auto& s = pat.stitches[si];
    const auto a = static_cast<std::size_t>(pat.find(s.a.panel));
    const auto b = static_cast<std::size_t>(pat.find(s.b.panel));
    if (a == b) {
      if (!is_dart(pat.panels[a], s))
        throw EncodeError(EncodeStage::Layout, "stitch " + std::to_string(si) + " joins two non-adjacent edges of '" +
                                                   s.a.panel + "'");
      continue;
    }
    adj[a].push_back(si);
    adj[b].push_back(si);
  }

  std::vector<bool> placed(np, false);
  std::vector<std::vector<DataPoint>> pinned(np);  // seam points already matched to a partner
  const auto close_darts = [&](std::size_t pi) {
    const Panel& p = pat.panels[pi];
    std::vector<DataPoint> data = pinned[pi];
    for (const auto& s : pat.stitches) {
      if (s.a.panel != p.name || !is_dart(p, s)) continue;
      const int leg1 = p.edge(s.a.first).end == p.edge(s.b.first).start ? s.a.first : s.b.first;
      const int leg2 = leg1 == s.a.first ? s.b.first : s.a.first;
      std::size_t loop = 0;
      auto i1 = seam_indices(p, work[pi], {p.name, leg1, leg1}, loop);
      auto i2 = seam_indices(p, work[pi], {p.name, leg2, leg2}, loop);
      std::reverse(i1.begin(), i1.end());  // both now run from the tip
      const Polyline l1 = gather(work[pi].pts[loop], i1);
      const Polyline l2 = gather(work[pi].pts[loop], i2);
      const auto f1 = arc_fractions(l1);
      const auto f2 = arc_fractions(l2);
      for (std::size_t k = 0; k < l1.size(); ++k)
        data.push_back({loop, i1[k], 0.5 * (l1[k] + at_fraction(l2, f2, f1[k])) - l1[k]});
      for (std::size_t k = 0; k < l2.size(); ++k)
        data.push_back({loop, i2[k], 0.5 * (l2[k] + at_fraction(l1, f1, f2[k])) - l2[k]});
    }
    if (data.size() > pinned[pi].size()) idw_warp(work[pi], data);
  };

  for (const std::size_t start : order) {
    if (placed[start]) continue;
    placed[start] = true;
    close_darts(start);
    std::queue<std::size_t> queue;
    queue.push(start);
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop();
      for (const std::size_t si : adj[cur]) {
        const auto& s = pat.stitches[si];
        const std::size_t q = static_cast<std::size_t>(pat.find(s.a.panel)) == cur
                                  ? static_cast<std::size_t>(pat.find(s.b.panel))
                                  : static_cast<std::size_t>(pat.find(s.a.panel));
        if (placed[q]) continue;
        // Match every seam of q whose partner is already placed.
        std::vector<DataPoint> data;
        const Panel& qp = pat.panels[q];
        for (const std::size_t sj : adj[q]) {
          const auto& t = pat.stitches[sj];
          const bool q_is_a = t.a.panel == qp.name;
          const EdgeRef& qref = q_is_a ? t.a : t.b;
          const EdgeRef& pref = q_is_a ? t.b : t.a;
          const auto pi = static_cast<std::size_t>(pat.find(pref.panel));
          if (!placed[pi]) continue;
          std::size_t ql = 0, pl = 0;
          const auto qi = seam_indices(qp, work[q], qref, ql);
          const auto pidx = seam_indices(pat.panels[pi], work[pi], pref, pl);
          const Polyline qs = gather(work[q].pts[ql], qi);
          Polyline ps = gather(work[pi].pts[pl], pidx);
          const double same = distance(qs.front(), ps.front()) + distance(qs.back(), ps.back());
          const double rev = distance(qs.front(), ps.back()) + distance(qs.back(), ps.front());
          if (rev <= same) std::reverse(ps.begin(), ps.end());
          const auto fq = arc_fractions(qs);
          const auto fp = arc_fractions(ps);
          for (std::size_t k = 0; k < qs.size(); ++k) data.push_back({ql, qi[k], at_fraction(ps, fp, fq[k]) - qs[k]});
        }
        Point2 mean;
        for (const auto& d : data) mean += d.shift;
        mean = (1.0 / static_cast<double>(data.size())) * mean;
        for (auto& loop : work[q].pts)
          for (auto& pt : loop) pt += mean;
        for (auto& d : data) d.shift = d.shift - mean;
        idw_warp(work[q], data);
        for (auto& d : data) d.shift = {};
        pinned[q] = data;
        placed[q] = true;
        close_darts(q);
        queue.push(q);
      }
    }
  }

  out.panels.resize(np);
  for (std::size_t pi = 0; pi < np; ++pi) {
    const Panel& p = pat.panels[pi];
    AlignedPanel& ap = out.panels[pi];
    ap.side = p.side == Side::Back ? LayerSide::Back : LayerSide::Front;
    ap.loops = work[pi].pts;
    ap.point_edge = work[pi].edge_of;
    for (std::size_t li = 0; li < p.loops.size(); ++li) {
      std::vector<Point2> c;
      for (const auto k : work[pi].first[li]) c.push_back(work[pi].pts[li][k]);
      ap.corners.push_back(std::move(c));
    }
    for (const auto& s : pat.stitches) {
      if (s.a.panel != p.name || !is_dart(p, s)) continue;
      Dart d;
      d.leg1 = p.edge(s.a.first).end == p.edge(s.b.first).start ? s.a.first : s.b.first;
      d.leg2 = d.leg1 == s.a.first ? s.b.first : s.a.first;
      const auto [l1, i1] = p.locate_edge(d.leg1);
      const auto [l2, i2] = p.locate_edge(d.leg2);
      d.tip = ap.corners[l2][i2];
      d.mouth = ap.corners[l1][i1];
      ap.darts.push_back(d);
    }
  }
  for (std::size_t si = 0; si < pat.stitches.size(); ++si) {
    const auto& s = pat.stitches[si];
    const auto a = static_cast<std::size_t>(pat.find(s.a.panel));
    const auto b = static_cast<std::size_t>(pat.find(s.b.panel));
    std::size_t la = 0, lb = 0;
    const auto ia = seam_indices(pat.panels[a], work[a], s.a, la);
    const auto ib = seam_indices(pat.panels[b], work[b], s.b, lb);
    out.seams.push_back({static_cast<int>(si), gather(work[a].pts[la], ia), gather(work[b].pts[lb], ib)});
  }

  // Interior overlap between panels of one side.
  const double step = cfg.cell_size() / 8.0;
  for (std::size_t a = 0; a < np; ++a) {
    for (std::size_t b = a + 1; b < np; ++b) {
      if (out.panels[a].side != out.panels[b].side) continue;
      const auto bbox = [](const std::vector<Polyline>& loops) {
        Point2 lo{1e300, 1e300}, hi{-1e300, -1e300};
        for (const auto& l : loops)
          for (const auto& q : l) {
            lo = {std::min(lo.x, q.x), std::min(lo.y, q.y)};
            hi = {std::max(hi.x, q.x), std::max(hi.y, q.y)};
          }
        return std::pair{lo, hi};
      };
      const auto [alo, ahi] = bbox(out.panels[a].loops);
      const auto [blo, bhi] = bbox(out.panels[b].loops);
      const Point2 lo{std::max(alo.x, blo.x), std::max(alo.y, blo.y)};
      const Point2 hi{std::min(ahi.x, bhi.x), std::min(ahi.y, bhi.y)};
      if (lo.x >= hi.x || lo.y >= hi.y) continue;
      std::size_t hits = 0;
      for (double y = std::floor(lo.y / step) * step + 0.5 * step; y < hi.y; y += step)
        for (double x = std::floor(lo.x / step) * step + 0.5 * step; x < hi.x; x += step)
          if (point_in_loops(out.panels[a].loops, {x, y}, -1.0) && point_in_loops(out.panels[b].loops, {x, y}, -1.0))
            ++hits;
      const double overlap = static_cast<double>(hits) * step * step;
      if (overlap > 0.5 * cfg.cell_size() * cfg.cell_size())
        throw EncodeError(EncodeStage::Overlap, "panels '" + pat.panels[a].name + "' and '" + pat.panels[b].name +
                                                    "' overlap by " + std::to_string(overlap) + " cm^2");
    }
  }
  return out;
}

}  // namespace gimg
