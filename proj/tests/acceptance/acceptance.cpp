// One PASS/FAIL line per acceptance criterion. Exit status 0 only when all
// criteria pass.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gimg/decoder.hpp"
#include "gimg/encoder.hpp"
#include "gimg/generator.hpp"
#include "gimg/grid.hpp"
#include "gimg/lsq_solver.hpp"
#include "gimg/metrics.hpp"
#include "gimg/validate.hpp"
#include "solver_oracle.hpp"
#include "support.hpp"

using namespace gimg;

namespace {

constexpr std::uint64_t kCorpusSeed = 20240601;
constexpr std::uint64_t kSuccessSeed = 777;
/// Decoder anchor weight for the geometry criterion; the default (1.0) is
/// reported alongside.
constexpr double kRoundTripAnchor = 0.01;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Sample {
  std::string name;
  SewingPattern pattern;
};

/// 97 generator samples over four templates plus the waistband, hole and
/// dart fixtures.
std::vector<Sample> round_trip_corpus() {
  const Corpus c = gen_corpus({{Template::OnePanelDress, 24},
                               {Template::Jumpsuit, 24},
                               {Template::TopPants, 24},
                               {Template::TopSkirt, 25}},
                              kCorpusSeed);
  std::vector<Sample> out;
  for (std::size_t i = 0; i < c.entries.size(); ++i) out.push_back({c.entries[i].file, parse_pattern(c.documents[i])});
  for (const char* f : {"waistband", "hole", "darts"}) out.push_back({std::string("fixture_") + f, feature_fixture(f)});
  return out;
}

/// Structurally valid images from encoded generator samples.
std::vector<GarmentImage> valid_images(int count, std::uint64_t seed) {
  std::vector<GarmentImage> out;
  for (std::uint64_t i = 0; static_cast<int>(out.size()) < count; ++i) {
    const Template t = kAllTemplates[i % std::size(kAllTemplates)];
    try {
      out.push_back(encode(gen_pattern(sample_params(t, splitmix64(seed + i)))));
    } catch (const EncodeError&) {
    }
  }
  return out;
}

std::string tensor_bytes(const Tensor& t) {
  std::ostringstream os;
  write_tensor(os, t);
  return os.str();
}

Outcome tensor_contract() {
  int shape_bad = 0;
  int encoded = 0;
  for (const Sample& s : round_trip_corpus()) {
    try {
      const Tensor t = to_tensor(encode(s.pattern));
      ++encoded;
      shape_bad += !(t.channels == 34 && t.rows == 16 && t.cols == 16);
    } catch (const EncodeError&) {
    }
  }
  int mismatches = 0;
  for (const GarmentImage& gi : valid_images(100, 11)) {
    const Tensor t = to_tensor(gi);
    const GarmentImage back = from_tensor(t);
    const Tensor t2 = to_tensor(back);
    mismatches += !(back == gi && t.data.size() == t2.data.size() &&
                    std::memcmp(t.data.data(), t2.data.data(), t.data.size() * sizeof(float)) == 0 &&
                    tensor_bytes(t) == tensor_bytes(t2));
  }
  std::ostringstream d;
  d << encoded << " fixtures shape 34x16x16 (" << shape_bad << " wrong), 100 round trips, " << mismatches
    << " mismatches";
  return {shape_bad == 0 && encoded > 0 && mismatches == 0, d.str()};
}

Outcome solver_oracle() {
  using namespace gimg::test;
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> lw(-3.0, 1.0);
  double worst = 0.0;
  constexpr int kMeshes = 200;
  for (int trial = 0; trial < kMeshes; ++trial) {
    const QuadMesh m = build_quad_mesh(random_cells(rng, 100));
    std::vector<VertexTarget> cons;
    std::set<int> used;
    for (int i = 0, k = 1 + static_cast<int>(rng() % 6); i < k; ++i) {
      const int v = static_cast<int>(rng() % m.vertices.size());
      if (used.insert(v).second) cons.push_back({v, {u(rng), u(rng)}});
    }
    worst = std::max(worst, max_diff(solve_constrained(m, cons), dense_constrained(m, cons)));
    std::vector<Point2> f;
    for (std::size_t e = 0; e < m.edges.size(); ++e) f.push_back({u(rng), u(rng)});
    const double w = trial % 2 ? 1.0 : std::pow(10.0, lw(rng));
    worst = std::max(worst, max_diff(solve_anchored(m, f, w), dense_anchored(m, f, w)));
  }

  double analytic = 0.0;
  std::vector<CellCoord> block;
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) block.push_back({x, y});
  const QuadMesh b = build_quad_mesh(block);
  const std::vector<VertexTarget> pin = {{0, b.vertices[0]}};
  for (const auto& x : {solve_constrained(b, pin), solve_anchored(b, nominal_edges(b), 1.0)})
    for (std::size_t i = 0; i < x.size(); ++i) analytic = std::max(analytic, distance(x[i], b.vertices[i]));
  std::vector<VertexTarget> rim;
  for (int v = 0; v < static_cast<int>(b.vertices.size()); ++v)
    if (b.is_boundary_vertex(v)) rim.push_back({v, 2.0 * b.vertices[static_cast<std::size_t>(v)]});
  const auto doubled = solve_constrained(b, rim);
  for (std::size_t i = 0; i < doubled.size(); ++i) analytic = std::max(analytic, distance(doubled[i], 2.0 * b.vertices[i]));

  char d[160];
  std::snprintf(d, sizeof d, "%d meshes, max diff vs dense %.3g; identity/x2 max error %.3g", kMeshes, worst, analytic);
  return {worst <= 1e-8 && analytic <= 1e-9, d};
}

struct RoundTrip {
  int encode_failures = 0;
  int isomorphic = 0;
  int panels = 0;
  int panels_below = 0;
  double min_iou = 1.0;
  double sum_iou = 0.0;
  double unit_min = 1.0;
  double unit_sum = 0.0;
  std::vector<std::string> problems;
};

RoundTrip round_trip() {
  RoundTrip r;
  DecodeOptions fine;
  fine.anchor_weight = kRoundTripAnchor;
  for (const Sample& s : round_trip_corpus()) {
    const SewingPattern gt = classify_and_split(s.pattern);
    GarmentImage gi;
    try {
      gi = encode(s.pattern);
    } catch (const EncodeError& e) {
      ++r.encode_failures;
      r.problems.push_back(s.name + ": encode " + e.reason());
      continue;
    }
    const SewingPattern d = decode(gi, fine);
    if (stitch_graph_isomorphic(d, gt))
      ++r.isomorphic;
    else
      r.problems.push_back(s.name + ": stitch graph differs");
    const PatternIou iou = pattern_iou(d, gt);
    const PatternIou unit = pattern_iou(decode(gi), gt);
    for (const PanelMatch& m : iou.matches) {
      ++r.panels;
      r.sum_iou += m.iou;
      r.min_iou = std::min(r.min_iou, m.iou);
      if (m.iou < 0.90) {
        ++r.panels_below;
        r.problems.push_back(s.name + ": panel " + m.gt + " iou " + std::to_string(m.iou));
      }
    }
    for (const PanelMatch& m : unit.matches) {
      r.unit_sum += m.iou;
      r.unit_min = std::min(r.unit_min, m.iou);
    }
  }
  return r;
}

Outcome geometry(const RoundTrip& r) {
  const double mean = r.panels ? r.sum_iou / r.panels : 0.0;
  const double unit_mean = r.panels ? r.unit_sum / r.panels : 0.0;
  char d[256];
  std::snprintf(d, sizeof d,
                "anchor %.2g: %d panels, min iou %.4f, mean %.4f, %d below 0.90, %d encode failures "
                "(anchor 1: min %.4f, mean %.4f)",
                kRoundTripAnchor, r.panels, r.min_iou, mean, r.panels_below, r.encode_failures, r.unit_min, unit_mean);
  return {r.encode_failures == 0 && r.panels_below == 0 && mean >= 0.95, d};
}

Outcome topology(const RoundTrip& r) {
  const int total = 100;
  return {r.isomorphic == total, std::to_string(r.isomorphic) + "/" + std::to_string(total) + " isomorphic"};
}

Outcome validation_repair() {
  bool ok = true;
  std::ostringstream d;
  const struct {
    GarmentImage image;
    ViolationKind kind;
    const char* name;
  } cases[] = {{test::ns_in_f2b_chain(), ViolationKind::NonStitchInF2bChain, "ns_in_f2b_chain"},
              {test::nb_in_sbs_chain(), ViolationKind::NonBoundaryInSbsChain, "nb_in_sbs_chain"}};
  for (const auto& f : cases) {
    const auto vs = validate(f.image);
    const RepairResult r = repair(f.image);
    const bool one = vs.size() == 1 && vs[0].kind == f.kind;
    const bool fixed = r.fixes.size() == 1 && r.remaining.empty() && validate(r.image).empty();
    ok &= one && fixed;
    d << f.name << ' ' << (one ? "1 violation" : "wrong violations") << ", " << (fixed ? "fixed" : "not fixed")
      << "; ";
  }
  int non_idempotent = 0;
  for (const GarmentImage& gi : valid_images(100, 23)) {
    const RepairResult once = repair(gi);
    const RepairResult twice = repair(once.image);
    non_idempotent += !(once.image == gi && once.fixes.empty() && twice.image == once.image);
  }
  ok &= non_idempotent == 0;
  d << "100 valid images, " << non_idempotent << " changed by repair";
  return {ok, d.str()};
}

Outcome success_rate() {
  int ok = 0;
  int unnamed = 0;
  std::map<std::string, int> reasons;
  constexpr int kSamples = 250;
  const int per_template = kSamples / static_cast<int>(std::size(kAllTemplates));
  std::vector<std::pair<Template, int>> plan;
  for (Template t : kAllTemplates) plan.push_back({t, per_template});
  const Corpus c = gen_corpus(plan, kSuccessSeed);
  for (std::size_t i = 0; i < c.documents.size(); ++i) {
    try {
      if (validate(encode(parse_pattern(c.documents[i]))).empty())
        ++ok;
      else
        ++reasons["UNREPORTED_VIOLATION"], ++unnamed;
    } catch (const EncodeError& e) {
      const std::string why = std::string(to_string(e.stage())) + "/" + e.reason();
      unnamed += e.reason().empty();
      ++reasons[why];
    }
  }
  const double rate = static_cast<double>(ok) / static_cast<double>(c.documents.size());
  char d[96];
  std::snprintf(d, sizeof d, "%d/%zu encoded (%.1f%%)", ok, c.documents.size(), 100.0 * rate);
  std::string detail = d;
  for (const auto& [why, n] : reasons) detail += ", " + why + " x" + std::to_string(n);
  return {rate >= 0.85 && unnamed == 0, detail};
}

/// Every artefact of gen -> encode -> decode -> metrics, concatenated.
std::string pipeline_bytes() {
  const Corpus c = gen_corpus({{Template::OnePanelDress, 5},
                               {Template::Jumpsuit, 5},
                               {Template::TopPants, 5},
                               {Template::TopSkirt, 5},
                               {Template::ShirtDarts, 5}},
                              kCorpusSeed);
  std::string all = format_manifest(c);
  for (const std::string& doc : c.documents) {
    all += doc;
    const SewingPattern p = parse_pattern(doc);
    try {
      const GarmentImage gi = encode(p);
      all += tensor_bytes(to_tensor(gi));
      const SewingPattern d = decode(gi);
      all += serialize_pattern(d);
      all += format_iou_report(pattern_iou(d, classify_and_split(p)));
    } catch (const EncodeError& e) {
      all += e.what();
    }
  }
  return all;
}

Outcome determinism() {
  const std::string a = pipeline_bytes();
  const std::string b = pipeline_bytes();
  return {a == b, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "differ")};
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  bool all = true;
  RoundTrip rt;
  double rt_seconds = 0.0;
  auto report = [&](int n, double limit_s, const std::function<Outcome()>& f) {
    const auto t0 = Clock::now();
    const Outcome o = f();
    const double s = std::chrono::duration<double>(Clock::now() - t0).count() + (n == 3 || n == 4 ? rt_seconds : 0.0);
    const bool pass = o.pass && s < limit_s;
    all &= pass;
    std::printf("criterion %d: %s (%.2fs, limit %.0fs) %s\n", n, pass ? "PASS" : "FAIL", s, limit_s, o.detail.c_str());
    std::fflush(stdout);
  };
  report(1, 5, tensor_contract);
  report(2, 30, solver_oracle);
  {
    const auto t0 = Clock::now();
    rt = round_trip();
    rt_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  }
  report(3, 120, [&] { return geometry(rt); });
  report(4, 120, [&] { return topology(rt); });
  for (const std::string& p : rt.problems) std::printf("  %s\n", p.c_str());
  report(5, 5, validation_repair);
  report(6, 180, success_rate);
  report(7, 180, determinism);
  return all ? 0 : 1;
}
