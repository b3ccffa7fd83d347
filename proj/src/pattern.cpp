#include "gimg/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

namespace gimg {

using ojson = nlohmann::ordered_json;

std::string_view to_string(Side s) {
  switch (s) {
    case Side::Front: return "front";
    case Side::Back: return "back";
    case Side::Wrap: return "wrap";
  }
  return "front";
}

// ---------------------------------------------------------------------------
// Panel accessors

std::size_t Panel::edge_count() const {
  std::size_t n = 0;
  for (const auto& l : loops) n += l.size();
  return n;
}

int Panel::global_edge(std::size_t loop, std::size_t i) const {
  std::size_t off = 0;
  for (std::size_t k = 0; k < loop; ++k) off += loops[k].size();
  return static_cast<int>(off + i);
}

std::pair<std::size_t, std::size_t> Panel::locate_edge(int global) const {
  if (global < 0) throw Error("panel '" + name + "': negative edge index");
  auto g = static_cast<std::size_t>(global);
  for (std::size_t k = 0; k < loops.size(); ++k) {
    if (g < loops[k].size()) return {k, g};
    g -= loops[k].size();
  }
  throw Error("panel '" + name + "': edge " + std::to_string(global) + " out of range");
}

const PanelEdge& Panel::edge(int global) const {
  const auto [l, i] = locate_edge(global);
  return loops[l][i];
}

Point2 Panel::control_point(int global) const {
  const PanelEdge& e = edge(global);
  const Point2 a = vertices[static_cast<std::size_t>(e.start)];
  const Point2 b = vertices[static_cast<std::size_t>(e.end)];
  if (!e.control) return lerp(a, b, 0.5);
  const Point2 d = b - a;
  return a + e.control->x * d + e.control->y * perp(d);
}

Point2 Panel::edge_point(int global, double t) const {
  const PanelEdge& e = edge(global);
  const Point2 a = vertices[static_cast<std::size_t>(e.start)];
  const Point2 b = vertices[static_cast<std::size_t>(e.end)];
  if (!e.control) return lerp(a, b, t);
  return quad_bezier(a, control_point(global), b, t);
}

int SewingPattern::find(std::string_view name) const {
  for (std::size_t i = 0; i < panels.size(); ++i)
    if (panels[i].name == name) return static_cast<int>(i);
  return -1;
}

// ---------------------------------------------------------------------------
// Reading

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
  throw SemanticError(path + ": " + msg);
}

double number_at(const ojson& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(path, "non-finite value");
  return v;
}

Point2 point_at(const ojson& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) schema_error(path, "expected [x, y]");
  return {number_at(j[0], path + "[0]"), number_at(j[1], path + "[1]")};
}

int index_at(const ojson& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  return j.get<int>();
}

const ojson& field(const ojson& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(path, std::string("missing field '") + key + "'");
  return *it;
}

Side side_from(const ojson& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected a string");
  const auto s = j.get<std::string>();
  if (s == "front") return Side::Front;
  if (s == "back") return Side::Back;
  if (s == "wrap") return Side::Wrap;
  schema_error(path, "unknown side '" + s + "'");
}

EdgeRef edge_ref_from(const ojson& j, const std::string& path) {
  EdgeRef r;
  const auto& p = field(j, "panel", path);
  if (!p.is_string()) schema_error(path + ".panel", "expected a string");
  r.panel = p.get<std::string>();
  const auto& e = field(j, "edges", path);
  if (!e.is_array() || e.size() != 2) schema_error(path + ".edges", "expected [first, last]");
  r.first = index_at(e[0], path + ".edges[0]");
  r.last = index_at(e[1], path + ".edges[1]");
  return r;
}

}  // namespace

SewingPattern parse_pattern(std::string_view text) {
  ojson doc;
  try {
    doc = ojson::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("syntax error: ") + e.what(), e.byte);
  }

  SewingPattern pat;
  pat.units_per_cm = number_at(field(doc, "units_per_cm", "$"), "$.units_per_cm");
  if (pat.units_per_cm <= 0.0) schema_error("$.units_per_cm", "must be positive");

  const auto& panels = field(doc, "panels", "$");
  if (!panels.is_array()) schema_error("$.panels", "expected an array");
  for (std::size_t pi = 0; pi < panels.size(); ++pi) {
    const std::string path = "$.panels[" + std::to_string(pi) + "]";
    const auto& pj = panels[pi];
    Panel panel;
    const auto& name = field(pj, "name", path);
    if (!name.is_string()) schema_error(path + ".name", "expected a string");
    panel.name = name.get<std::string>();
    panel.side = side_from(field(pj, "side", path), path + ".side");
    panel.placement = point_at(field(pj, "placement", path), path + ".placement");
    if (const auto it = pj.find("wrap_cut"); it != pj.end())
      panel.wrap_cut = number_at(*it, path + ".wrap_cut");
    const auto& verts = field(pj, "vertices", path);
    if (!verts.is_array()) schema_error(path + ".vertices", "expected an array");
    for (std::size_t vi = 0; vi < verts.size(); ++vi)
      panel.vertices.push_back(point_at(verts[vi], path + ".vertices[" + std::to_string(vi) + "]"));
    const auto& loops = field(pj, "loops", path);
    if (!loops.is_array()) schema_error(path + ".loops", "expected an array");
    for (std::size_t li = 0; li < loops.size(); ++li) {
      const std::string lpath = path + ".loops[" + std::to_string(li) + "]";
      if (!loops[li].is_array()) schema_error(lpath, "expected an array");
      std::vector<PanelEdge> loop;
      for (std::size_t ei = 0; ei < loops[li].size(); ++ei) {
        const std::string epath = lpath + "[" + std::to_string(ei) + "]";
        const auto& ej = loops[li][ei];
        const auto& v = field(ej, "v", epath);
        if (!v.is_array() || v.size() != 2) schema_error(epath + ".v", "expected [i, j]");
        PanelEdge e;
        e.start = index_at(v[0], epath + ".v[0]");
        e.end = index_at(v[1], epath + ".v[1]");
        if (const auto it = ej.find("curve"); it != ej.end()) e.control = point_at(*it, epath + ".curve");
        loop.push_back(e);
      }
      panel.loops.push_back(std::move(loop));
    }
    pat.panels.push_back(std::move(panel));
  }

  if (const auto it = doc.find("stitches"); it != doc.end()) {
    if (!it->is_array()) schema_error("$.stitches", "expected an array");
    for (std::size_t si = 0; si < it->size(); ++si) {
      const std::string path = "$.stitches[" + std::to_string(si) + "]";
      Stitch s;
      s.a = edge_ref_from(field((*it)[si], "a", path), path + ".a");
      s.b = edge_ref_from(field((*it)[si], "b", path), path + ".b");
      pat.stitches.push_back(std::move(s));
    }
  }

  check_pattern(pat);
  normalize_orientation(pat);
  return pat;
}

std::string serialize_pattern(const SewingPattern& pattern) {
  ojson doc;
  doc["units_per_cm"] = pattern.units_per_cm;
  doc["panels"] = ojson::array();
  for (const auto& p : pattern.panels) {
    ojson pj;
    pj["name"] = p.name;
    pj["side"] = std::string(to_string(p.side));
    pj["placement"] = {p.placement.x, p.placement.y};
    if (p.wrap_cut) pj["wrap_cut"] = *p.wrap_cut;
    pj["vertices"] = ojson::array();
    for (const auto& v : p.vertices) pj["vertices"].push_back({v.x, v.y});
    pj["loops"] = ojson::array();
    for (const auto& loop : p.loops) {
      ojson lj = ojson::array();
      for (const auto& e : loop) {
        ojson ej;
        ej["v"] = {e.start, e.end};
        if (e.control) ej["curve"] = {e.control->x, e.control->y};
        lj.push_back(std::move(ej));
      }
      pj["loops"].push_back(std::move(lj));
    }
    doc["panels"].push_back(std::move(pj));
  }
  doc["stitches"] = ojson::array();
  for (const auto& s : pattern.stitches) {
    ojson sj;
    sj["a"] = {{"panel", s.a.panel}, {"edges", {s.a.first, s.a.last}}};
    sj["b"] = {{"panel", s.b.panel}, {"edges", {s.b.first, s.b.last}}};
    doc["stitches"].push_back(std::move(sj));
  }
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Invariants

void check_pattern(const SewingPattern& pattern) {
  std::set<std::string> names;
  for (const auto& p : pattern.panels) {
    const std::string who = "panel '" + p.name + "'";
    if (p.name.empty()) throw SemanticError("panel with empty name");
    if (!names.insert(p.name).second) throw SemanticError("duplicate panel name '" + p.name + "'");
    if (p.loops.empty() || p.loops[0].empty()) throw SemanticError(who + ": no outer loop");
    for (const auto& v : p.vertices)
      if (!is_finite(v)) throw SemanticError(who + ": non-finite vertex");
    for (std::size_t li = 0; li < p.loops.size(); ++li) {
      const auto& loop = p.loops[li];
      const std::string lw = who + " loop " + std::to_string(li);
      if (loop.size() < 2) throw SemanticError(lw + ": fewer than 2 edges");
      for (std::size_t i = 0; i < loop.size(); ++i) {
        const auto& e = loop[i];
        const auto nv = static_cast<int>(p.vertices.size());
        if (e.start < 0 || e.start >= nv || e.end < 0 || e.end >= nv)
          throw SemanticError(lw + " edge " + std::to_string(i) + ": vertex index out of range");
        if (e.start == e.end) throw SemanticError(lw + " edge " + std::to_string(i) + ": start equals end");
        if (loop[(i + 1) % loop.size()].start != e.end)
          throw SemanticError(lw + ": open loop at edge " + std::to_string(i));
      }
      if (li == 0 && loop.size() == 2 && !loop[0].control && !loop[1].control)
        throw SemanticError(lw + ": zero-area loop");
    }
    const auto poly = flatten_loop(p, 0);
    if (!is_simple_loop(poly)) throw SemanticError(who + ": outer loop self-intersects");
    if (std::abs(signed_area(poly)) <= 0.0) throw SemanticError(who + ": zero area");
  }

  std::set<std::pair<std::string, int>> used;
  for (std::size_t si = 0; si < pattern.stitches.size(); ++si) {
    const auto& s = pattern.stitches[si];
    const std::string who = "stitch " + std::to_string(si);
    if (s.a == s.b) throw SemanticError(who + ": stitches an edge range to itself");
    for (const EdgeRef* r : {&s.a, &s.b}) {
      const int pi = pattern.find(r->panel);
      if (pi < 0) throw SemanticError(who + ": dangling reference to panel '" + r->panel + "'");
      const Panel& p = pattern.panels[static_cast<std::size_t>(pi)];
      if (r->first > r->last || r->first < 0 || r->last >= static_cast<int>(p.edge_count()))
        throw SemanticError(who + ": invalid edge range on panel '" + r->panel + "'");
      if (p.locate_edge(r->first).first != p.locate_edge(r->last).first)
        throw SemanticError(who + ": edge range spans loops of panel '" + r->panel + "'");
      for (int e = r->first; e <= r->last; ++e)
        if (!used.insert({r->panel, e}).second)
          throw SemanticError(who + ": edge " + std::to_string(e) + " of panel '" + r->panel +
                              "' is already stitched");
    }
  }
}

// ---------------------------------------------------------------------------
// Orientation

void normalize_orientation(SewingPattern& pattern) {
  for (auto& p : pattern.panels) {
    for (std::size_t li = 0; li < p.loops.size(); ++li) {
      const double a = signed_area(flatten_loop(p, li));
      const bool want_ccw = li == 0;
      if ((a > 0) == want_ccw) continue;
      auto& loop = p.loops[li];
      const int n = static_cast<int>(loop.size());
      const int off = p.global_edge(li, 0);
      std::vector<PanelEdge> rev;
      rev.reserve(loop.size());
      for (int k = n - 1; k >= 0; --k) {
        PanelEdge e = loop[static_cast<std::size_t>(k)];
        std::swap(e.start, e.end);
        if (e.control) e.control = Point2{1.0 - e.control->x, -e.control->y};
        rev.push_back(e);
      }
      loop = std::move(rev);
      auto remap = [&](EdgeRef& r) {
        if (r.panel != p.name || r.first < off || r.first >= off + n) return;
        const int f = off + (n - 1 - (r.last - off));
        const int l = off + (n - 1 - (r.first - off));
        r.first = f;
        r.last = l;
      };
      for (auto& s : pattern.stitches) {
        remap(s.a);
        remap(s.b);
      }
    }
  }
}

SewingPattern to_cm(const SewingPattern& pattern) {
  SewingPattern out = pattern;
  const double k = 1.0 / pattern.units_per_cm;
  for (auto& p : out.panels) {
    for (auto& v : p.vertices) v = k * v;
    p.placement = k * p.placement;
    if (p.wrap_cut) *p.wrap_cut *= k;
  }
  out.units_per_cm = 1.0;
  return out;
}

// ---------------------------------------------------------------------------
// Geometry queries

Polyline flatten_loop(const Panel& panel, std::size_t loop, int curve_segments) {
  Polyline out;
  for (std::size_t i = 0; i < panel.loops[loop].size(); ++i) {
    const int g = panel.global_edge(loop, i);
    const auto& e = panel.loops[loop][i];
    if (!e.control) {
      out.push_back(panel.edge_start(g));
      continue;
    }
    for (int k = 0; k < curve_segments; ++k)
      out.push_back(panel.edge_point(g, static_cast<double>(k) / curve_segments));
  }
  return out;
}

std::vector<Polyline> flatten_panel(const Panel& panel, int curve_segments) {
  std::vector<Polyline> loops;
  for (std::size_t l = 0; l < panel.loops.size(); ++l) loops.push_back(flatten_loop(panel, l, curve_segments));
  return loops;
}

double panel_area(const Panel& panel) {
  const auto loops = flatten_panel(panel);
  return area(loops);
}

std::vector<BoundarySample> sample_boundary(const Panel& panel, std::size_t loop, double spacing) {
  if (!(spacing > 0.0)) throw Error("sample_boundary: spacing must be positive");
  if (loop >= panel.loops.size()) throw Error("sample_boundary: panel '" + panel.name + "' has no loop " + std::to_string(loop));
  std::vector<BoundarySample> out;
  double s = 0.0;
  for (std::size_t i = 0; i < panel.loops[loop].size(); ++i) {
    const int g = panel.global_edge(loop, i);
    const Point2 a = panel.edge_start(g);
    const Point2 b = panel.edge_end(g);
    std::vector<Point2> pts;
    if (!panel.loops[loop][i].control) {
      const int n = std::max(1, static_cast<int>(std::ceil(distance(a, b) / spacing - 1e-12)));
      for (int k = 0; k < n; ++k) pts.push_back(lerp(a, b, static_cast<double>(k) / n));
    } else {
      const Point2 c = panel.control_point(g);
      const double rough = distance(a, c) + distance(c, b);
      int n = std::max(1, static_cast<int>(std::ceil(rough / spacing - 1e-12)));
      for (;;) {
        pts.clear();
        bool fits = true;
        Point2 prev = a;
        for (int k = 0; k <= n; ++k) {
          const Point2 q = quad_bezier(a, c, b, static_cast<double>(k) / n);
          if (k > 0 && distance(prev, q) > spacing) fits = false;
          if (k < n) pts.push_back(q);
          prev = q;
        }
        if (fits) break;
        ++n;
      }
    }
    pts.push_back(b);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      out.push_back({pts[k], g, s});
      s += distance(pts[k], pts[k + 1]);
    }
  }
  if (s < 2.0 * spacing)
    throw Error("sample_boundary: loop " + std::to_string(loop) + " of panel '" + panel.name +
                "' is degenerate (length " + std::to_string(s) + ")");
  return out;
}

bool point_in_panel(const Panel& panel, Point2 p) {
  const auto loops = flatten_panel(panel);
  return point_in_loops(loops, p, 1e-9);
}

}  // namespace gimg
