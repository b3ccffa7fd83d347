#include <doctest.h>

#include "gimg/metrics.hpp"
#include "support.hpp"

using namespace gimg;
using gimg::test::rect_panel;

namespace {

/// Raster error bound: boundary length times one pixel, over the union area.
double raster_tol(double perimeter, double union_area, double extent, int res = kDefaultRasterRes) {
  const double pixel = 2.0 * 1.02 * extent / res;
  return perimeter * pixel / union_area;
}

}  // namespace

TEST_CASE("IoU of identical and translated panels is one") {
  const Panel a = rect_panel("a", Side::Front, 10, 10, {0, 0});
  const Panel b = rect_panel("b", Side::Back, 10, 10, {37, -5});
  CHECK(panel_iou(a, a) == 1.0);
  CHECK(panel_iou(a, b) == 1.0);
}

TEST_CASE("IoU of nested rectangles matches the area ratio") {
  const Panel a = rect_panel("a", Side::Front, 10, 10, {0, 0});
  const Panel b = rect_panel("b", Side::Front, 10, 20, {0, 0});
  const Panel c = rect_panel("c", Side::Front, 20, 20, {0, 0});
  // Centroid aligned: a lies inside b and c.
  CHECK(panel_iou(a, b) == doctest::Approx(0.5).epsilon(raster_tol(100, 200, 20)));
  CHECK(panel_iou(a, c) == doctest::Approx(0.25).epsilon(raster_tol(120, 400, 20)));
  CHECK(panel_iou(b, a) == panel_iou(a, b));
}

TEST_CASE("IoU of crossed rectangles") {
  // 30x10 and 10x30 centred on each other: cross of area 500, overlap 100.
  const Panel a = rect_panel("a", Side::Front, 30, 10, {0, 0});
  const Panel b = rect_panel("b", Side::Front, 10, 30, {0, 0});
  CHECK(panel_iou(a, b) == doctest::Approx(100.0 / 500.0).epsilon(raster_tol(160, 500, 30)));
}

TEST_CASE("IoU with a hole") {
  Panel ring = rect_panel("r", Side::Front, 20, 20, {0, 0});
  ring.vertices.insert(ring.vertices.end(), {{5, 5}, {5, 15}, {15, 15}, {15, 5}});
  ring.loops.push_back({{4, 5, std::nullopt}, {5, 6, std::nullopt}, {6, 7, std::nullopt}, {7, 4, std::nullopt}});
  const Panel full = rect_panel("f", Side::Front, 20, 20, {0, 0});
  CHECK(panel_iou(ring, full) == doctest::Approx(300.0 / 400.0).epsilon(raster_tol(120, 400, 20)));
}

TEST_CASE("IoU errors") {
  Panel flat = rect_panel("z", Side::Front, 10, 0, {0, 0});
  const Panel a = rect_panel("a", Side::Front, 10, 10, {0, 0});
  CHECK_THROWS_AS(panel_iou(a, flat), Error);
  CHECK_THROWS_AS(panel_iou(a, a, 32), Error);
}

TEST_CASE("rasterize_loops samples pixel centres") {
  // Square [-1, 1]^2 in a half-width 2 frame at res 4: the 2x2 central pixels.
  const std::vector<Polyline> loops = {{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
  const Bitmap b = rasterize_loops(loops, 2.0, 4);
  int count = 0;
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) count += b.get(x, y);
  CHECK(count == 4);
  CHECK(b.get(1, 1));
  CHECK(b.get(2, 2));
  CHECK_FALSE(b.get(0, 0));
}

TEST_CASE("boundary Hausdorff of nested squares") {
  const Panel a = rect_panel("a", Side::Front, 10, 10, {0, 0});
  const Panel c = rect_panel("c", Side::Front, 20, 20, {3, 3});
  // Corner (10, 10) of the big square is sqrt(50) from corner (5, 5).
  CHECK(boundary_hausdorff(a, c) == doctest::Approx(std::sqrt(50.0)).epsilon(1e-9));
  CHECK(boundary_hausdorff(a, a) == 0.0);
}

TEST_CASE("pattern IoU matching and report") {
  SewingPattern gt, pred;
  gt.panels = {rect_panel("g0", Side::Front, 10, 10, {0, 0}), rect_panel("g1", Side::Front, 10, 20, {20, 0})};
  pred.panels = {rect_panel("p0", Side::Front, 10, 20, {-5, 0})};
  const PatternIou r = pattern_iou(pred, gt);
  REQUIRE(r.matches.size() == 2);
  CHECK(r.matches[0].pred == "p0");
  CHECK(r.matches[0].gt == "g1");
  CHECK(r.matches[0].iou == 1.0);
  CHECK(r.matches[1].pred.empty());
  CHECK(r.matches[1].gt == "g0");
  CHECK(r.matches[1].iou == 0.0);
  CHECK(r.mean == 0.5);
  CHECK(format_iou_report(r) == "pred,gt,iou\np0,g1,1.000000\n,g0,0.000000\nmean,,0.500000\n");
}

TEST_CASE("pattern IoU prefers panels on the same side") {
  SewingPattern gt, pred;
  gt.panels = {rect_panel("gf", Side::Front, 10, 10, {0, 0}), rect_panel("gb", Side::Back, 10, 11, {0, 0})};
  // The front prediction fits the back panel better, but sides win.
  pred.panels = {rect_panel("pf", Side::Front, 10, 11, {0, 0}), rect_panel("pb", Side::Back, 10, 10, {0, 0})};
  const PatternIou r = pattern_iou(pred, gt);
  REQUIRE(r.matches.size() == 2);
  for (const PanelMatch& m : r.matches) CHECK(m.pred.substr(1) == m.gt.substr(1));
  CHECK(r.matches[0].iou == doctest::Approx(10.0 / 11.0).epsilon(0.01));

  // A panel without a same-side partner still matches across sides.
  pred.panels = {rect_panel("pf", Side::Front, 10, 10, {0, 0})};
  gt.panels = {rect_panel("gb", Side::Back, 10, 10, {0, 0})};
  const PatternIou x = pattern_iou(pred, gt);
  REQUIRE(x.matches.size() == 1);
  CHECK(x.matches[0].iou == 1.0);
}

TEST_CASE("stitch graph isomorphism") {
  auto make = [](std::vector<std::string> names, std::vector<std::pair<int, int>> edges) {
    SewingPattern p;
    for (const auto& n : names) p.panels.push_back(rect_panel(n, Side::Front, 1, 1, {0, 0}));
    for (auto [a, b] : edges) p.stitches.push_back({{names[a], 0, 0}, {names[b], 1, 1}});
    return p;
  };
  const SewingPattern a = make({"x", "y", "z"}, {{0, 1}, {1, 2}, {1, 2}});
  const SewingPattern b = make({"p", "q", "r"}, {{2, 0}, {0, 1}, {2, 0}});  // relabelled
  const SewingPattern c = make({"p", "q", "r"}, {{0, 1}, {1, 2}, {0, 2}});  // triangle
  const SewingPattern d = make({"p", "q", "r"}, {{0, 1}, {1, 2}, {1, 1}});  // self-loop instead
  CHECK(stitch_graph_isomorphic(a, a));
  CHECK(stitch_graph_isomorphic(a, b));
  CHECK_FALSE(stitch_graph_isomorphic(a, c));
  CHECK_FALSE(stitch_graph_isomorphic(a, d));
  CHECK_FALSE(stitch_graph_isomorphic(a, make({"p", "q"}, {{0, 1}})));

  std::vector<std::string> many;
  for (int i = 0; i < 13; ++i) many.push_back("n" + std::to_string(i));
  CHECK_THROWS_AS(stitch_graph_isomorphic(make(many, {}), make(many, {})), Error);
}
