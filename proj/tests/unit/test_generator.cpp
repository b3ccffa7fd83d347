#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "gimg/encoder.hpp"
#include "gimg/generator.hpp"
#include "gimg/metrics.hpp"

using namespace gimg;

namespace {

int front_back_stitches(const SewingPattern& p) {
  int n = 0;
  for (const Stitch& s : p.stitches) {
    const Side a = p.panels[static_cast<std::size_t>(p.find(s.a.panel))].side;
    const Side b = p.panels[static_cast<std::size_t>(p.find(s.b.panel))].side;
    n += a != b;
  }
  return n;
}

}  // namespace

TEST_CASE("template names round trip") {
  for (Template t : kAllTemplates) CHECK(template_from_string(to_string(t)) == t);
  CHECK(to_string(Template::TopPants) == "top_pants");
  CHECK_THROWS_AS(template_from_string("cape"), Error);
}

TEST_CASE("midpoint patterns are valid for every template") {
  for (Template t : kAllTemplates) {
    const SewingPattern p = gen_pattern(midpoint_params(t));
    CHECK_NOTHROW(check_pattern(p));
    CHECK_NOTHROW(encode(p));
  }
}

TEST_CASE("one-panel dress splits into front and back") {
  const SewingPattern p = gen_pattern(midpoint_params(Template::OnePanelDress));
  REQUIRE(p.panels.size() == 1);
  CHECK(p.panels[0].side == Side::Wrap);
  const SewingPattern s = classify_and_split(p);
  REQUIRE(s.panels.size() == 2);
  CHECK(s.panels[0].side != s.panels[1].side);
  CHECK(front_back_stitches(s) >= 2);
}

TEST_CASE("top and pants golden counts") {
  const SewingPattern p = gen_pattern(midpoint_params(Template::TopPants));
  CHECK(p.panels.size() == 6);
  CHECK(p.stitches.size() == 14);
}

TEST_CASE("seeds change dimensions but not topology") {
  for (Template t : kAllTemplates) {
    TemplateParams a = midpoint_params(t);
    TemplateParams b = a;
    b.seed = 1;
    const SewingPattern pa = gen_pattern(a);
    const SewingPattern pb = gen_pattern(b);
    CHECK(stitch_graph_isomorphic(pa, pb));
    CHECK(pa != pb);
    CHECK(gen_pattern(a) == pa);
  }
}

TEST_CASE("sampled parameters stay inside their ranges") {
  for (Template t : kAllTemplates)
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const TemplateParams p = sample_params(t, seed);
      CHECK(p.torso_width >= 38.0);
      CHECK(p.torso_width <= 50.0);
      CHECK(p.dart_count >= 0);
      CHECK(p.dart_count <= 2);
      CHECK_NOTHROW(gen_pattern(p));
    }
}

TEST_CASE("out-of-range parameters are named") {
  TemplateParams p = midpoint_params(Template::TopSkirt);
  p.torso_width = 80.0;
  p.skirt_length = -1.0;
  try {
    gen_pattern(p);
    FAIL("expected an error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("torso_width") != std::string::npos);
    CHECK(msg.find("skirt_length") != std::string::npos);
    CHECK(msg.find("neck_width") == std::string::npos);
  }
  p = midpoint_params(Template::ShirtDarts);
  p.dart_count = 5;
  CHECK_THROWS_WITH_AS(gen_pattern(p), doctest::Contains("dart_count"), Error);
}

TEST_CASE("feature fixtures") {
  const SewingPattern wb = feature_fixture("waistband");
  CHECK(wb.panels.size() == 6);
  const SewingPattern hole = feature_fixture("hole");
  bool has_hole = false;
  for (const Panel& pn : hole.panels) has_hole |= pn.loops.size() > 1;
  CHECK(has_hole);
  const SewingPattern darts = feature_fixture("darts");
  CHECK(darts.stitches.size() > 4);
  for (const char* n : {"waistband", "hole", "darts"}) CHECK_NOTHROW(encode(feature_fixture(n)));
  CHECK_THROWS_AS(feature_fixture("pocket"), Error);
}

TEST_CASE("corpus is deterministic and described by its manifest") {
  const std::vector<std::pair<Template, int>> plan = {{Template::OnePanelDress, 2}, {Template::TopPants, 3}};
  const Corpus a = gen_corpus(plan, 7);
  const Corpus b = gen_corpus(plan, 7);
  CHECK(a.documents == b.documents);
  REQUIRE(a.entries.size() == 5);
  CHECK(a.entries[0].file == "one_panel_dress_0000.json");
  CHECK(a.entries[4].file == "top_pants_0004.json");
  CHECK(a.entries[3].seed == splitmix64(7 + 3));

  const std::string m = format_manifest(a);
  std::istringstream is(m);
  std::string line;
  std::getline(is, line);
  CHECK(line == "GICORPUS1");
  std::getline(is, line);
  CHECK(line == "one_panel_dress_0000.json,one_panel_dress," + std::to_string(splitmix64(7)));

  CHECK(gen_corpus(plan, 8).documents != a.documents);

  const auto dir = std::filesystem::temp_directory_path() / "gimg_corpus_test";
  std::filesystem::remove_all(dir);
  write_corpus(a, dir.string());
  std::ifstream in(dir / "manifest.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == m);
  CHECK(std::filesystem::exists(dir / "top_pants_0002.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("splitmix64 reference values") {
  // First outputs of the reference generator seeded with 0.
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
}
