#include <doctest.h>

#include "gimg/decoder.hpp"
#include "gimg/encoder.hpp"
#include "gimg/generator.hpp"
#include "gimg/metrics.hpp"
#include "support.hpp"

using namespace gimg;
using gimg::test::cell_square;
using gimg::test::single;

namespace {

/// Marks a block inside with identity deformation and types its outline.
void paint_block(Layer& l, int x0, int y0, int w, int h, EdgeType outline = EdgeType::NonStitch) {
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x) {
      Cell& c = l.at(x, y);
      c.inside = true;
      c.deform = {DeformVec{1, 0}, {0, 1}, {1, 0}, {0, 1}};
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

}  // namespace

TEST_CASE("clusters") {
  GarmentImage gi(16, Canvas{});
  CHECK(cluster_panels(gi).empty());
  paint_block(gi.front(), 3, 3, 2, 2);
  auto cl = cluster_panels(gi);
  REQUIRE(cl.size() == 1);
  CHECK(cl[0].cells.size() == 4);
  CHECK(cl[0].side == LayerSide::Front);

  // Top and skirt separated by a SideBySide chain.
  GarmentImage two(16, Canvas{});
  paint_block(two.front(), 3, 3, 3, 4);
  for (int x = 3; x < 6; ++x) two.front().set_type({x, 5, true}, EdgeType::SideBySide);
  cl = cluster_panels(two);
  REQUIRE(cl.size() == 2);
  CHECK(cl[0].cells.size() == 6);
  CHECK(cl[0].cells.front() == CellCoord{3, 3});
  CHECK(cl[1].cells.size() == 6);
}

TEST_CASE("identity-encoded square is reproduced") {
  const Panel sq = cell_square("sq", 6, 6);
  const SewingPattern d = decode(encode(single(sq)));
  REQUIRE(d.panels.size() == 1);
  CHECK(d.stitches.empty());
  const Panel& p = d.panels[0];
  CHECK(p.side == Side::Front);
  CHECK(p.loops.size() == 1);
  const Canvas c;
  for (Point2 v : p.vertices) {
    const Point2 g = c.to_grid(v + p.placement);
    CHECK(std::abs(g.x - std::round(g.x)) <= 1e-6);
    CHECK(std::abs(g.y - std::round(g.y)) <= 1e-6);
    CHECK(g.x >= 6 - 1e-6);
    CHECK(g.x <= 8 + 1e-6);
  }
  CHECK(panel_area(p) == doctest::Approx(256.0).epsilon(1e-6));
  CHECK(p.placement.x == doctest::Approx(-16.0));
  CHECK(p.placement.y == doctest::Approx(-72.0));
}

TEST_CASE("zero deformation collapses and is flagged") {
  GarmentImage gi(16, Canvas{});
  paint_block(gi.front(), 5, 5, 1, 1);
  gi.front().at(5, 5).deform = {};
  const auto cl = cluster_panels(gi);
  REQUIRE(cl.size() == 1);
  const DecodedPanel d = decode_panel(cl[0], gi);
  CHECK(d.degenerate);
  // Still centred on the cell.
  const Polyline l = flatten_loop(d.panel, 0);
  const Point2 centroid = area_centroid(l) + d.panel.placement;
  CHECK(distance(centroid, Canvas{}.to_cm({5.5, 5.5})) <= 1e-9);

  GarmentImage ok(16, Canvas{});
  paint_block(ok.front(), 5, 5, 1, 1);
  CHECK_FALSE(decode_panel(cluster_panels(ok)[0], ok).degenerate);
}

TEST_CASE("hole ring decodes as a hole loop") {
  GarmentImage gi(16, Canvas{});
  paint_block(gi.front(), 4, 4, 4, 4);
  for (int y = 5; y < 7; ++y)
    for (int x = 5; x < 7; ++x) gi.front().at(x, y) = Cell{};
  for (int k = 5; k < 7; ++k) {
    gi.front().set_type({k, 5, true}, EdgeType::NonStitch);
    gi.front().set_type({k, 7, true}, EdgeType::NonStitch);
    gi.front().set_type({5, k, false}, EdgeType::NonStitch);
    gi.front().set_type({7, k, false}, EdgeType::NonStitch);
  }
  const SewingPattern d = decode(gi);
  REQUIRE(d.panels.size() == 1);
  CHECK(d.panels[0].loops.size() == 2);
  CHECK(panel_area(d.panels[0]) == doctest::Approx(12.0 * 64.0).epsilon(1e-6));
}

TEST_CASE("front/back seam decodes to one stitch") {
  // Adjacent seams with the same partner form one unbroken FrontToBack run,
  // so the silhouette is declared as a single seam over three edges.
  SewingPattern p;
  Panel f = cell_square("front", 6, 6);
  Panel b = f;
  b.name = "back";
  b.side = Side::Back;
  b.placement = {-(f.placement.x + 16.0), f.placement.y};
  p.panels = {f, b};
  p.stitches = {{{"front", 1, 3}, {"back", 1, 3}}};
  const SewingPattern d = decode(encode(p));
  REQUIRE(d.panels.size() == 2);
  CHECK(d.panels[0].side == Side::Front);
  CHECK(d.panels[1].side == Side::Back);
  CHECK(d.stitches.size() == 1);
  CHECK(stitch_graph_isomorphic(d, p));
  check_pattern(d);
}

TEST_CASE("unpaired FrontToBack is an error") {
  GarmentImage gi(16, Canvas{});
  paint_block(gi.front(), 3, 3, 2, 2);
  gi.front().set_type({3, 3, false}, EdgeType::FrontToBack);
  CHECK_THROWS_AS(decode(gi), DecodeError);
}

TEST_CASE("template round trips: topology, simple loops, shape") {
  DecodeOptions fine;
  fine.anchor_weight = 0.01;
  for (Template t : kAllTemplates) {
    CAPTURE(to_string(t));
    const SewingPattern p = gen_pattern(midpoint_params(t));
    const SewingPattern gt = classify_and_split(p);
    const GarmentImage gi = encode(p);
    const SewingPattern d = decode(gi);
    CHECK(stitch_graph_isomorphic(d, gt));
    CHECK(decode(gi) == d);
    for (const Panel& panel : d.panels) CHECK(is_simple_loop(flatten_loop(panel, 0)));
    const PatternIou iou = pattern_iou(decode(gi, fine), gt);
    for (const PanelMatch& m : iou.matches) CHECK(m.iou >= 0.9);
  }
}

TEST_CASE("dress boundary within one cell at unit anchor weight") {
  const SewingPattern p = gen_pattern(midpoint_params(Template::OnePanelDress));
  const SewingPattern gt = classify_and_split(p);
  const SewingPattern d = decode(encode(p));
  const PatternIou iou = pattern_iou(d, gt);
  for (const PanelMatch& m : iou.matches) {
    const Panel& a = d.panels[static_cast<std::size_t>(d.find(m.pred))];
    const Panel& b = gt.panels[static_cast<std::size_t>(gt.find(m.gt))];
    CHECK(boundary_hausdorff(a, b) <= 8.0);
  }
}

TEST_CASE("smoothing keeps topology") {
  DecodeOptions smooth;
  smooth.smooth = true;
  const SewingPattern p = gen_pattern(midpoint_params(Template::TopSkirt));
  const SewingPattern d = decode(encode(p), smooth);
  CHECK(stitch_graph_isomorphic(d, classify_and_split(p)));
}
