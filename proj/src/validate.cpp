#include "gimg/validate.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "gimg/decoder.hpp"

namespace gimg {

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::NonStitchInF2bChain: return "NONSTITCH_IN_F2B_CHAIN";
    case ViolationKind::NonBoundaryInSbsChain: return "NONBOUNDARY_IN_SBS_CHAIN";
    case ViolationKind::UnpairedF2b: return "UNPAIRED_F2B";
    case ViolationKind::SbsOnOutsideCell: return "SBS_ON_OUTSIDE_CELL";
    case ViolationKind::DanglingBoundary: return "DANGLING_BOUNDARY";
    case ViolationKind::OnehotMalformed: return "ONEHOT_MALFORMED";
  }
  return "UNKNOWN";
}

std::string format_violation(const Violation& v) {
  std::string s = std::string(to_string(v.kind)) + " layer=" + (v.layer == LayerSide::Front ? "f" : "b") +
                  " edge=" + to_string(v.edge);
  if (!v.detail.empty()) s += " " + v.detail;
  return s;
}

std::string format_report(const std::vector<Violation>& vs) {
  std::string out;
  for (const auto& v : vs) out += format_violation(v) + "\n";
  return out;
}

std::string format_fix(const Fix& f) {
  return std::string("layer=") + (f.layer == LayerSide::Front ? "f" : "b") + " edge=" + to_string(f.edge) + " " +
         std::string(to_string(f.from)) + " -> " + std::string(to_string(f.to)) + (f.mirrored ? " (both layers)" : "");
}

namespace {

bool cell_inside(const Layer& l, int x, int y) { return l.inside(x, y); }

std::pair<bool, bool> sides_inside(const Layer& l, const LatticeEdge& e) {
  if (e.horizontal) return {cell_inside(l, e.x, e.y - 1), cell_inside(l, e.x, e.y)};
  return {cell_inside(l, e.x - 1, e.y), cell_inside(l, e.x, e.y)};
}

int sbs_at_vertex(const Layer& l, int vx, int vy, const LatticeEdge& skip) {
  int n = 0;
  for (const LatticeEdge& e : {LatticeEdge{vx - 1, vy, true}, LatticeEdge{vx, vy, true}, LatticeEdge{vx, vy - 1, false},
                               LatticeEdge{vx, vy, false}}) {
    if (e == skip || e.x < 0 || e.y < 0) continue;
    if (l.type(e) == EdgeType::SideBySide) ++n;
  }
  return n;
}

/// Interior NonBoundary edges whose endpoints both end a SideBySide chain.
std::vector<LatticeEdge> sbs_gaps(const Layer& l) {
  std::vector<LatticeEdge> out;
  const int g = l.size();
  for (int y = 0; y < g; ++y) {
    for (int x = 0; x < g; ++x) {
      for (const bool h : {true, false}) {
        const LatticeEdge e{x, y, h};
        if (l.type(e) != EdgeType::NonBoundary) continue;
        const auto [a, b] = sides_inside(l, e);
        if (!a || !b) continue;
        const int x1 = h ? x + 1 : x;
        const int y1 = h ? y : y + 1;
        if (sbs_at_vertex(l, x, y, e) == 1 && sbs_at_vertex(l, x1, y1, e) == 1) out.push_back(e);
      }
    }
  }
  return out;
}

/// NonStitch boundary steps whose two neighbours along the walk are FrontToBack.
std::vector<LatticeEdge> f2b_gaps(const GarmentImage& gi, LayerSide side) {
  std::set<LatticeEdge> out;
  const Layer& l = gi.layer(side);
  for (const auto& c : cluster_panels(gi)) {
    if (c.side != side) continue;
    QuadMesh m;
    try {
      m = cluster_mesh(c, gi);
    } catch (const Error&) {
      continue;
    }
    for (const auto& loop : m.boundary) {
      const std::size_t n = loop.size();
      if (n < 3) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (l.type(loop[j].edge) != EdgeType::NonStitch) continue;
        if (l.type(loop[(j + n - 1) % n].edge) == EdgeType::FrontToBack &&
            l.type(loop[(j + 1) % n].edge) == EdgeType::FrontToBack)
          out.insert(loop[j].edge);
      }
    }
  }
  return {out.begin(), out.end()};
}

bool row_major(const LatticeEdge& a, const LatticeEdge& b) {
  return std::tuple(a.y, a.x, !a.horizontal) < std::tuple(b.y, b.x, !b.horizontal);
}

}  // namespace

std::vector<Violation> validate(const GarmentImage& gi) {
  std::vector<Violation> out;
  const int g = gi.grid_size();
  for (const LayerSide side : {LayerSide::Front, LayerSide::Back}) {
    const Layer& l = gi.layer(side);
    const Layer& other = gi.layer(opposite(side));
    for (int y = 0; y < g; ++y) {
      for (int x = 0; x < g; ++x) {
        if (l.at(x, y).inside && (x == g - 1 || y == g - 1))
          out.push_back({ViolationKind::DanglingBoundary, side, {x, y, true},
                         "inside cell (" + std::to_string(x) + "," + std::to_string(y) + ") in the top/right margin"});
        for (const bool h : {true, false}) {
          const LatticeEdge e{x, y, h};
          const EdgeType t = l.type(e);
          const auto [a, b] = sides_inside(l, e);
          if (!a && !b) {
            if (t == EdgeType::SideBySide)
              out.push_back({ViolationKind::SbsOnOutsideCell, side, e, "between two outside cells"});
            else if (t != EdgeType::NonBoundary)
              out.push_back({ViolationKind::DanglingBoundary, side, e, std::string(to_string(t)) + " between two outside cells"});
          } else if (a != b) {
            if (t == EdgeType::NonBoundary)
              out.push_back({ViolationKind::DanglingBoundary, side, e, "panel boundary typed NON_BOUNDARY"});
            else if (t == EdgeType::SideBySide)
              out.push_back({ViolationKind::SbsOnOutsideCell, side, e, "cell across the seam is outside"});
          } else if (t == EdgeType::FrontToBack) {
            out.push_back({ViolationKind::DanglingBoundary, side, e, "FRONT_TO_BACK between two inside cells"});
          }
          if (t == EdgeType::FrontToBack && other.type(e) != EdgeType::FrontToBack)
            out.push_back({ViolationKind::UnpairedF2b, side, e,
                           "other layer has " + std::string(to_string(other.type(e)))});
        }
      }
    }
    for (const auto& e : sbs_gaps(l))
      out.push_back({ViolationKind::NonBoundaryInSbsChain, side, e, "gap between SIDE_BY_SIDE edges"});
  }
  // A gap shared by both layers is one finding.
  std::set<LatticeEdge> seen;
  for (const LayerSide side : {LayerSide::Front, LayerSide::Back})
    for (const auto& e : f2b_gaps(gi, side))
      if (seen.insert(e).second)
        out.push_back({ViolationKind::NonStitchInF2bChain, side, e, "NON_STITCH between FRONT_TO_BACK edges"});

  std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.layer != b.layer) return a.layer < b.layer;
    return row_major(a.edge, b.edge);
  });
  return out;
}

std::vector<Violation> validate_tensor(const Tensor& t, const Canvas& canvas) {
  std::vector<Violation> out;
  if (t.channels == kChannels && t.rows == t.cols && t.rows >= 2 &&
      t.data.size() == static_cast<std::size_t>(t.channels) * t.plane_size()) {
    for (const LayerSide side : {LayerSide::Front, LayerSide::Back}) {
      const int base = side == LayerSide::Front ? 0 : kLayerChannels;
      for (int y = 0; y < t.rows; ++y) {
        for (int x = 0; x < t.cols; ++x) {
          const float f = t.at(base + channel::kFlag, y, x);
          if (f != 0.0f && f != 1.0f)
            out.push_back({ViolationKind::OnehotMalformed, side, {x, y, true}, "flag " + std::to_string(f) + " is not 0 or 1"});
          for (const bool h : {true, false}) {
            const int c0 = base + (h ? channel::kBottomType : channel::kLeftType);
            int ones = 0, zeros = 0;
            for (int k = 0; k < kEdgeTypeCount; ++k) {
              const float v = t.at(c0 + k, y, x);
              ones += v == 1.0f;
              zeros += v == 0.0f;
            }
            if (ones != 1 || zeros != kEdgeTypeCount - 1)
              out.push_back({ViolationKind::OnehotMalformed, side, {x, y, h}, "edge type group is not one-hot"});
          }
        }
      }
    }
  }
  const GarmentImage gi = from_tensor(t, canvas);
  for (auto& v : validate(gi)) out.push_back(std::move(v));
  return out;
}

RepairResult repair(const GarmentImage& input) {
  RepairResult r;
  r.image = input;
  GarmentImage& gi = r.image;
  const int g = gi.grid_size();
  const int limit = 2 * g * g + 2;
  for (int iter = 0; iter < limit; ++iter) {
    bool changed = false;
    for (const LayerSide side : {LayerSide::Front, LayerSide::Back}) {
      auto gaps = f2b_gaps(gi, side);
      std::sort(gaps.begin(), gaps.end(), row_major);
      for (const auto& e : gaps) {
        Layer& l = gi.layer(side);
        if (l.type(e) != EdgeType::NonStitch) continue;
        Fix f{side, e, EdgeType::NonStitch, EdgeType::FrontToBack, false};
        l.set_type(e, EdgeType::FrontToBack);
        Layer& o = gi.layer(opposite(side));
        const auto [a, b] = sides_inside(o, e);
        if (o.type(e) == EdgeType::NonStitch && a != b) {
          o.set_type(e, EdgeType::FrontToBack);
          f.mirrored = true;
        }
        r.fixes.push_back(f);
        changed = true;
      }
    }
    for (const LayerSide side : {LayerSide::Front, LayerSide::Back}) {
      Layer& l = gi.layer(side);
      for (const auto& e : sbs_gaps(l)) {
        l.set_type(e, EdgeType::SideBySide);
        r.fixes.push_back({side, e, EdgeType::NonBoundary, EdgeType::SideBySide, false});
        changed = true;
      }
    }
    if (!changed) break;
  }
  r.remaining = validate(gi);
  return r;
}

}  // namespace gimg
