#include "gimg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gimg/kernels/kernels.hpp"

namespace gimg {

namespace {

double quantize(double v) { return std::round(v * 1e9) / 1e9; }

std::vector<Polyline> centred_loops(const Panel& p) {
  std::vector<Polyline> loops = flatten_panel(p);
  if (std::abs(area(loops)) <= 0.0) throw Error("panel '" + p.name + "' has zero area");
  const Point2 c = area_centroid(std::span<const Polyline>(loops));
  for (auto& l : loops)
    for (auto& q : l) q = {quantize(q.x - c.x), quantize(q.y - c.y)};
  return loops;
}

double max_extent(const std::vector<Polyline>& loops) {
  double m = 0.0;
  for (const auto& l : loops)
    for (const auto& q : l) m = std::max({m, std::abs(q.x), std::abs(q.y)});
  return m;
}

double point_polyline_distance(Point2 p, const Polyline& l) {
  double best = 1e300;
  for (std::size_t i = 0, j = l.size() - 1; i < l.size(); j = i++) best = std::min(best, point_segment_distance(p, l[j], l[i]));
  return best;
}

}  // namespace

Bitmap rasterize_loops(const std::vector<Polyline>& loops, double half, int res) {
  Bitmap bm;
  bm.res = res;
  bm.words_per_row = (res + 63) / 64;
  bm.bits.assign(static_cast<std::size_t>(bm.words_per_row) * static_cast<std::size_t>(res), 0);
  const double px = 2.0 * half / res;
  std::vector<double> xs;
  for (int row = 0; row < res; ++row) {
    const double y = -half + (row + 0.5) * px;
    xs.clear();
    for (const auto& l : loops) {
      for (std::size_t i = 0, j = l.size() - 1; i < l.size(); j = i++) {
        const Point2 a = l[j], b = l[i];
        if ((a.y > y) != (b.y > y)) xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
      }
    }
    std::sort(xs.begin(), xs.end());
    std::uint64_t* words = bm.bits.data() + static_cast<std::size_t>(row) * static_cast<std::size_t>(bm.words_per_row);
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      // Pixel centres x_c = -half + (c + 0.5) px with xs[k] <= x_c < xs[k+1].
      const int c0 = std::max(0, static_cast<int>(std::ceil((xs[k] + half) / px - 0.5)));
      const int c1 = std::min(res, static_cast<int>(std::ceil((xs[k + 1] + half) / px - 0.5)));
      for (int c = c0; c < c1; ++c) words[c / 64] |= std::uint64_t{1} << (c % 64);
    }
  }
  return bm;
}

double panel_iou(const Panel& a, const Panel& b, int raster_res) {
  if (raster_res < 64) throw Error("raster resolution must be at least 64");
  const auto la = centred_loops(a);
  const auto lb = centred_loops(b);
  const double half = 1.02 * std::max(max_extent(la), max_extent(lb));
  const Bitmap ba = rasterize_loops(la, half, raster_res);
  const Bitmap bb = rasterize_loops(lb, half, raster_res);
  const auto c = kernels::and_or_popcount(ba.bits, bb.bits);
  if (c.unite == 0) return 0.0;
  return static_cast<double>(c.intersection) / static_cast<double>(c.unite);
}

double boundary_hausdorff(const Panel& a, const Panel& b) {
  const auto la = centred_loops(a);
  const auto lb = centred_loops(b);
  const auto one_way = [](const std::vector<Polyline>& from, const std::vector<Polyline>& to) {
    double worst = 0.0;
    for (const auto& l : from) {
      for (std::size_t i = 0; i < l.size(); ++i) {
        const Point2 p0 = l[i], p1 = l[(i + 1) % l.size()];
        for (int s = 0; s < 4; ++s) {
          const Point2 p = lerp(p0, p1, s / 4.0);
          double best = 1e300;
          for (const auto& m : to) best = std::min(best, point_polyline_distance(p, m));
          worst = std::max(worst, best);
        }
      }
    }
    return worst;
  };
  return std::max(one_way(la, lb), one_way(lb, la));
}

PatternIou pattern_iou(const SewingPattern& pred, const SewingPattern& gt, int raster_res) {
  const std::size_t np = pred.panels.size(), ng = gt.panels.size();
  std::vector<double> m(np * ng, 0.0);
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = 0; j < ng; ++j) m[i * ng + j] = panel_iou(pred.panels[i], gt.panels[j], raster_res);
  std::vector<bool> pu(np, false), gu(ng, false);
  PatternIou r;
  // Same-side pairs first; leftovers may then match across sides.
  for (const bool same_side : {true, false}) {
    for (;;) {
      double best = -1.0;
      std::size_t bi = 0, bj = 0;
      for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < ng; ++j)
          if (!pu[i] && !gu[j] && (!same_side || pred.panels[i].side == gt.panels[j].side) &&
              m[i * ng + j] > best) {
            best = m[i * ng + j];
            bi = i;
            bj = j;
          }
      if (best < 0.0) break;
      pu[bi] = gu[bj] = true;
      r.matches.push_back({pred.panels[bi].name, gt.panels[bj].name, best});
    }
  }
  for (std::size_t i = 0; i < np; ++i)
    if (!pu[i]) r.matches.push_back({pred.panels[i].name, "", 0.0});
  for (std::size_t j = 0; j < ng; ++j)
    if (!gu[j]) r.matches.push_back({"", gt.panels[j].name, 0.0});
  double sum = 0.0;
  for (const auto& x : r.matches) sum += x.iou;
  r.mean = r.matches.empty() ? 0.0 : sum / static_cast<double>(r.matches.size());
  return r;
}

std::string format_iou_report(const PatternIou& r) {
  std::string out = "pred,gt,iou\n";
  char buf[64];
  for (const auto& m : r.matches) {
    std::snprintf(buf, sizeof buf, "%.6f", m.iou);
    out += m.pred + "," + m.gt + "," + buf + "\n";
  }
  std::snprintf(buf, sizeof buf, "%.6f", r.mean);
  out += std::string("mean,,") + buf + "\n";
  return out;
}

namespace {

using Multigraph = std::vector<std::vector<int>>;

Multigraph adjacency(const SewingPattern& p) {
  const std::size_t n = p.panels.size();
  Multigraph g(n, std::vector<int>(n, 0));
  for (const auto& s : p.stitches) {
    const int a = p.find(s.a.panel), b = p.find(s.b.panel);
    if (a < 0 || b < 0) throw Error("stitch references an unknown panel");
    ++g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    if (a != b) ++g[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
  }
  return g;
}

bool extend(const Multigraph& a, const Multigraph& b, std::vector<int>& map, std::vector<bool>& used, std::size_t i,
            const std::vector<std::vector<int>>& sig_a, const std::vector<std::vector<int>>& sig_b) {
  const std::size_t n = a.size();
  if (i == n) return true;
  for (std::size_t j = 0; j < n; ++j) {
    if (used[j] || sig_a[i] != sig_b[j]) continue;
    bool ok = a[i][i] == b[j][j];
    for (std::size_t k = 0; ok && k < i; ++k)
      ok = a[i][k] == b[j][static_cast<std::size_t>(map[k])];
    if (!ok) continue;
    map[i] = static_cast<int>(j);
    used[j] = true;
    if (extend(a, b, map, used, i + 1, sig_a, sig_b)) return true;
    used[j] = false;
  }
  return false;
}

std::vector<std::vector<int>> signatures(const Multigraph& g) {
  std::vector<std::vector<int>> s;
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::vector<int> row = g[i];
    std::sort(row.begin(), row.end());
    row.push_back(g[i][i]);
    s.push_back(std::move(row));
  }
  return s;
}

}  // namespace

bool stitch_graph_isomorphic(const SewingPattern& a, const SewingPattern& b) {
  if (a.panels.size() > kMaxIsomorphismNodes || b.panels.size() > kMaxIsomorphismNodes)
    throw Error("stitch graph has more than " + std::to_string(kMaxIsomorphismNodes) + " panels");
  if (a.panels.size() != b.panels.size() || a.stitches.size() != b.stitches.size()) return false;
  const Multigraph ga = adjacency(a), gb = adjacency(b);
  const auto sa = signatures(ga), sb = signatures(gb);
  auto ssa = sa, ssb = sb;
  std::sort(ssa.begin(), ssa.end());
  std::sort(ssb.begin(), ssb.end());
  if (ssa != ssb) return false;
  std::vector<int> map(ga.size(), -1);
  std::vector<bool> used(ga.size(), false);
  return extend(ga, gb, map, used, 0, sa, sb);
}

}  // namespace gimg
