#include "gimg/generator.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace gimg {

namespace {

struct NumericField {
  const char* name;
  double lo;
  double hi;
  double TemplateParams::*member;
};

const std::vector<NumericField>& numeric_fields() {
  static const std::vector<NumericField> f = {
      {"torso_width", 38.0, 50.0, &TemplateParams::torso_width},
      {"torso_length", 36.0, 44.0, &TemplateParams::torso_length},
      {"armhole_depth", 16.0, 24.0, &TemplateParams::armhole_depth},
      {"neck_width", 16.0, 20.0, &TemplateParams::neck_width},
      {"neck_depth", 6.0, 12.0, &TemplateParams::neck_depth},
      {"skirt_length", 40.0, 60.0, &TemplateParams::skirt_length},
      {"hem_flare", 0.0, 12.0, &TemplateParams::hem_flare},
      {"sleeve_length", 0.0, 30.0, &TemplateParams::sleeve_length},
      {"pants_length", 56.0, 72.0, &TemplateParams::pants_length},
      {"crotch_depth", 20.0, 28.0, &TemplateParams::crotch_depth},
      {"leg_gap", 8.0, 14.0, &TemplateParams::leg_gap},
      {"dart_depth", 16.0, 24.0, &TemplateParams::dart_depth},
      {"dart_width", 4.0, 6.0, &TemplateParams::dart_width},
  };
  return f;
}

constexpr int kMaxDarts = 2;
constexpr double kSleeveMin = 6.0;
constexpr double kArmholeInset = 3.0;
constexpr double kMinShoulder = 6.0;
constexpr double kBackNeckDepth = 2.5;
constexpr double kWaistbandHeight = 16.0;
constexpr double kWaistbandRatio = 0.8;
constexpr double kShirtHip = 12.0;
constexpr double kMinLegHem = 18.0;
constexpr double kJitter = 0.03;  // fraction of each range

double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Builds one panel in own-view body coordinates and records edge names.
class Builder {
 public:
  Builder(std::string name, Side side) {
    panel_.name = std::move(name);
    panel_.side = side;
    panel_.loops.emplace_back();
  }

  void start(Point2 p) { panel_.vertices.push_back(p); }

  /// Edge from the last vertex to `p`. `bulge` is the curve's offset to the
  /// left of travel at its middle, in cm.
  void to(Point2 p, const std::string& name, double bulge = 0.0) {
    const int a = static_cast<int>(panel_.vertices.size()) - 1;
    panel_.vertices.push_back(p);
    add_edge(a, a + 1, name, bulge);
  }

  void close(const std::string& name, double bulge = 0.0) {
    const int a = static_cast<int>(panel_.vertices.size()) - 1;
    add_edge(a, 0, name, bulge);
  }

  void add_hole(const std::vector<Point2>& pts) {
    const int base = static_cast<int>(panel_.vertices.size());
    std::vector<PanelEdge> loop;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      panel_.vertices.push_back(pts[i]);
      loop.push_back({base + static_cast<int>(i), base + static_cast<int>((i + 1) % pts.size()), std::nullopt});
    }
    panel_.loops.push_back(std::move(loop));
  }

  int edge(const std::string& name) const { return names_.at(name); }
  bool has(const std::string& name) const { return names_.count(name) != 0; }

  /// Moves vertices so that the minimum corner becomes the placement.
  Panel finish() {
    Point2 lo{1e300, 1e300};
    for (const Point2& v : panel_.vertices) lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
    for (Point2& v : panel_.vertices) v = v - lo;
    panel_.placement = lo;
    if (panel_.wrap_cut) *panel_.wrap_cut -= lo.x;
    return panel_;
  }

  Panel& raw() { return panel_; }
  const std::string& name() const { return panel_.name; }

 private:
  void add_edge(int a, int b, const std::string& name, double bulge) {
    PanelEdge e{a, b, std::nullopt};
    if (bulge != 0.0) {
      const double len = distance(panel_.vertices[static_cast<std::size_t>(a)], panel_.vertices[static_cast<std::size_t>(b)]);
      e.control = Point2{0.5, 2.0 * bulge / len};
    }
    names_[name] = static_cast<int>(panel_.loops[0].size());
    panel_.loops[0].push_back(e);
  }

  Panel panel_;
  std::map<std::string, int> names_;
};

struct BodiceSpec {
  double w = 0.0;       // width
  double hem = 0.0;     // y of the bottom edge (negative)
  double armhole = 0.0;
  double neck_w = 0.0;
  double neck_d = 0.0;
  double sleeve = 0.0;  // 0 = sleeveless
  bool split_waist = false;
  std::vector<double> darts;  // dart centres
  double dart_w = 0.0;
  double dart_d = 0.0;
};

/// Bodice outline, counter-clockwise from the bottom-left corner. Edge names:
/// waist (or waist_l/waist_r, or waist_0.. with dart_k_a/dart_k_b), side_r,
/// sleeve_r, cuff_r or armhole_r, top_r, neck, top_l, cuff_l, sleeve_l or
/// armhole_l, side_l.
Builder bodice(const std::string& name, Side side, const BodiceSpec& s) {
  Builder b(name, side);
  const double h = s.w / 2.0;
  b.start({-h, s.hem});
  if (s.split_waist) {
    b.to({0.0, s.hem}, "waist_l");
    b.to({h, s.hem}, "waist_r");
  } else if (!s.darts.empty()) {
    for (std::size_t k = 0; k < s.darts.size(); ++k) {
      const double cx = s.darts[k];
      const std::string id = std::to_string(k);
      b.to({cx - s.dart_w / 2.0, s.hem}, "waist_" + id);
      b.to({cx, s.hem + s.dart_d}, "dart_" + id + "_a");
      b.to({cx + s.dart_w / 2.0, s.hem}, "dart_" + id + "_b");
    }
    b.to({h, s.hem}, "waist_" + std::to_string(s.darts.size()));
  } else {
    b.to({h, s.hem}, "waist");
  }
  b.to({h, -s.armhole}, "side_r");
  if (s.sleeve > 0.0) {
    b.to({h + s.sleeve, -s.armhole}, "sleeve_r");
    b.to({h + s.sleeve, 0.0}, "cuff_r");
  } else {
    b.to({h - kArmholeInset, 0.0}, "armhole_r", 1.5);
  }
  b.to({s.neck_w / 2.0, 0.0}, "top_r");
  b.to({-s.neck_w / 2.0, 0.0}, "neck", s.neck_d);
  if (s.sleeve > 0.0) {
    b.to({-h - s.sleeve, 0.0}, "top_l");
    b.to({-h - s.sleeve, -s.armhole}, "cuff_l");
    b.to({-h, -s.armhole}, "sleeve_l");
  } else {
    b.to({-h + kArmholeInset, 0.0}, "top_l");
    b.to({-h, -s.armhole}, "armhole_l", 1.5);
  }
  b.close("side_l");
  return b;
}

Stitch stitch(const Builder& a, const std::string& ea_first, const std::string& ea_last, const Builder& b,
              const std::string& eb_first, const std::string& eb_last) {
  return {{a.name(), a.edge(ea_first), a.edge(ea_last)}, {b.name(), b.edge(eb_first), b.edge(eb_last)}};
}

Stitch stitch(const Builder& a, const std::string& ea, const Builder& b, const std::string& eb) {
  return stitch(a, ea, ea, b, eb, eb);
}

/// Side seam range of a bodice-like builder, as seen from its own side.
std::pair<std::string, std::string> side_range(const Builder& b, bool right) {
  if (right) return {"side_r", b.has("sleeve_r") ? "sleeve_r" : "side_r"};
  return {b.has("sleeve_l") ? "sleeve_l" : "side_l", "side_l"};
}

/// The four front/back seams shared by every upper body: both side seams
/// and both shoulder lines. The back's own right is the front's left.
void upper_seams(const Builder& f, const Builder& bk, std::vector<Stitch>& out) {
  auto fr = side_range(f, true);
  auto fl = side_range(f, false);
  auto br = side_range(bk, true);
  auto bl = side_range(bk, false);
  out.push_back(stitch(f, fr.first, fr.second, bk, bl.first, bl.second));
  out.push_back(stitch(f, fl.first, fl.second, bk, br.first, br.second));
  out.push_back(stitch(f, "top_r", bk, "top_l"));
  out.push_back(stitch(f, "top_l", bk, "top_r"));
}

double effective_sleeve(const TemplateParams& p) { return p.sleeve_length < kSleeveMin ? 0.0 : p.sleeve_length; }

BodiceSpec upper_spec(const TemplateParams& p, double hem, bool front) {
  BodiceSpec s;
  s.w = p.torso_width;
  s.hem = hem;
  s.armhole = p.armhole_depth;
  s.neck_w = p.neck_width;
  s.neck_d = front ? p.neck_depth : kBackNeckDepth;
  s.sleeve = effective_sleeve(p);
  return s;
}

SewingPattern make_dress(const TemplateParams& p) {
  const double w = p.torso_width;
  const double h = p.torso_length + p.skirt_length;
  const double a = p.armhole_depth;
  const double n = p.neck_width;
  const double in = kArmholeInset;
  Builder b("dress", Side::Wrap);
  // Local coordinates: front part x in [0, w], back part x in [w, 2w].
  b.start({0.0, 0.0});
  b.to({2.0 * w, 0.0}, "hem");
  b.to({2.0 * w, h - a}, "side_b");
  b.to({2.0 * w - in, h}, "armhole_b2", 1.5);
  b.to({1.5 * w + n / 2.0, h}, "shoulder_b2");
  b.to({1.5 * w - n / 2.0, h}, "neck_b", kBackNeckDepth);
  b.to({w + in, h}, "shoulder_b1");
  b.to({w, h - a}, "armhole_b1", 1.5);
  b.to({w - in, h}, "armhole_f1", 1.5);
  b.to({w / 2.0 + n / 2.0, h}, "shoulder_f1");
  b.to({w / 2.0 - n / 2.0, h}, "neck_f", p.neck_depth);
  b.to({in, h}, "shoulder_f2");
  b.to({0.0, h - a}, "armhole_f2", 1.5);
  b.close("side_f");
  if (p.hole) {
    const double cx = 1.5 * w;
    const double top = h - 12.0;
    const double bottom = top - 24.0;
    b.add_hole({{cx - 10.0, top}, {cx + 10.0, top}, {cx + 10.0, bottom}, {cx - 10.0, bottom}});
  }
  Panel& raw = b.raw();
  raw.wrap_cut = w;
  SewingPattern pat;
  pat.stitches.push_back(stitch(b, "side_f", b, "side_b"));
  pat.stitches.push_back(stitch(b, "shoulder_f1", b, "shoulder_b1"));
  pat.stitches.push_back(stitch(b, "shoulder_f2", b, "shoulder_b2"));
  Panel panel = b.finish();
  // The front part spans [-w/2, w/2] with the shoulders at y = 0.
  panel.placement = {-w / 2.0, -h};
  pat.panels.push_back(std::move(panel));
  return pat;
}

SewingPattern make_top_skirt(const TemplateParams& p) {
  const double l = p.torso_length;
  const double w = p.torso_width;
  Builder tf = bodice("top_front", Side::Front, upper_spec(p, -l, true));
  Builder tb = bodice("top_back", Side::Back, upper_spec(p, -l, false));
  const double skirt_top = p.waistband ? -l - kWaistbandHeight : -l;
  const double hem = skirt_top - p.skirt_length;
  auto skirt = [&](const std::string& name, Side side) {
    Builder s(name, side);
    s.start({-w / 2.0 - p.hem_flare, hem});
    s.to({w / 2.0 + p.hem_flare, hem}, "hem");
    s.to({w / 2.0, skirt_top}, "side_r");
    s.to({-w / 2.0, skirt_top}, "waist");
    s.close("side_l");
    return s;
  };
  Builder sf = skirt("skirt_front", Side::Front);
  Builder sb = skirt("skirt_back", Side::Back);
  SewingPattern pat;
  upper_seams(tf, tb, pat.stitches);
  pat.stitches.push_back(stitch(sf, "side_r", sb, "side_l"));
  pat.stitches.push_back(stitch(sf, "side_l", sb, "side_r"));
  std::vector<Builder> extra;
  if (p.waistband) {
    const double bw = kWaistbandRatio * w / 2.0;
    auto band = [&](const std::string& name, Side side) {
      Builder s(name, side);
      s.start({-bw, skirt_top});
      s.to({bw, skirt_top}, "bottom");
      s.to({bw, -l}, "side_r");
      s.to({-bw, -l}, "top");
      s.close("side_l");
      return s;
    };
    Builder bf = band("waistband_front", Side::Front);
    Builder bb = band("waistband_back", Side::Back);
    pat.stitches.push_back(stitch(bf, "side_r", bb, "side_l"));
    pat.stitches.push_back(stitch(bf, "side_l", bb, "side_r"));
    pat.stitches.push_back(stitch(tf, "waist", bf, "top"));
    pat.stitches.push_back(stitch(bf, "bottom", sf, "waist"));
    pat.stitches.push_back(stitch(tb, "waist", bb, "top"));
    pat.stitches.push_back(stitch(bb, "bottom", sb, "waist"));
    extra.push_back(std::move(bf));
    extra.push_back(std::move(bb));
  } else {
    pat.stitches.push_back(stitch(tf, "waist", sf, "waist"));
    pat.stitches.push_back(stitch(tb, "waist", sb, "waist"));
  }
  pat.panels.push_back(tf.finish());
  if (!extra.empty()) pat.panels.push_back(extra[0].finish());
  pat.panels.push_back(sf.finish());
  pat.panels.push_back(tb.finish());
  if (!extra.empty()) pat.panels.push_back(extra[1].finish());
  pat.panels.push_back(sb.finish());
  return pat;
}

double leg_outer(const TemplateParams& p) {
  return std::max(p.torso_width / 2.0 + 0.25 * p.hem_flare, p.leg_gap + kMinLegHem);
}

SewingPattern make_top_pants(const TemplateParams& p) {
  const double l = p.torso_length;
  const double w = p.torso_width;
  BodiceSpec fs = upper_spec(p, -l, true);
  BodiceSpec bs = upper_spec(p, -l, false);
  fs.split_waist = bs.split_waist = true;
  Builder tf = bodice("top_front", Side::Front, fs);
  Builder tb = bodice("top_back", Side::Back, bs);
  const double hem = -l - p.pants_length;
  const double crotch = -l - p.crotch_depth;
  const double ox = leg_outer(p);
  // Left leg in own view; the right leg is its mirror image.
  auto leg = [&](const std::string& name, Side side, bool right) {
    Builder s(name, side);
    if (!right) {
      s.start({-ox, hem});
      s.to({-p.leg_gap, hem}, "hem");
      s.to({0.0, crotch}, "inseam");
      s.to({0.0, -l}, "crotch");
      s.to({-w / 2.0, -l}, "waist");
      s.close("outer");
    } else {
      s.start({p.leg_gap, hem});
      s.to({ox, hem}, "hem");
      s.to({w / 2.0, -l}, "outer");
      s.to({0.0, -l}, "waist");
      s.to({0.0, crotch}, "crotch");
      s.close("inseam");
    }
    return s;
  };
  Builder fl = leg("leg_front_left", Side::Front, false);
  Builder fr = leg("leg_front_right", Side::Front, true);
  Builder bl = leg("leg_back_left", Side::Back, false);
  Builder br = leg("leg_back_right", Side::Back, true);
  SewingPattern pat;
  upper_seams(tf, tb, pat.stitches);
  pat.stitches.push_back(stitch(tf, "waist_l", fl, "waist"));
  pat.stitches.push_back(stitch(tf, "waist_r", fr, "waist"));
  pat.stitches.push_back(stitch(tb, "waist_l", bl, "waist"));
  pat.stitches.push_back(stitch(tb, "waist_r", br, "waist"));
  pat.stitches.push_back(stitch(fl, "crotch", fr, "crotch"));
  pat.stitches.push_back(stitch(bl, "crotch", br, "crotch"));
  pat.stitches.push_back(stitch(fl, "outer", br, "outer"));
  pat.stitches.push_back(stitch(fr, "outer", bl, "outer"));
  pat.stitches.push_back(stitch(fl, "inseam", br, "inseam"));
  pat.stitches.push_back(stitch(fr, "inseam", bl, "inseam"));
  pat.panels.push_back(tf.finish());
  pat.panels.push_back(fl.finish());
  pat.panels.push_back(fr.finish());
  pat.panels.push_back(tb.finish());
  pat.panels.push_back(bl.finish());
  pat.panels.push_back(br.finish());
  return pat;
}

Builder jumpsuit_panel(const std::string& name, Side side, const TemplateParams& p, bool front) {
  const double l = p.torso_length;
  const double h = p.torso_width / 2.0;
  const double hem = -l - p.pants_length;
  const double crotch = -l - p.crotch_depth;
  const double ox = leg_outer(p);
  const double sl = effective_sleeve(p);
  const double a = p.armhole_depth;
  Builder b(name, side);
  b.start({-ox, hem});
  b.to({-p.leg_gap, hem}, "hem_l");
  b.to({0.0, crotch}, "inseam_l");
  b.to({p.leg_gap, hem}, "inseam_r");
  b.to({ox, hem}, "hem_r");
  b.to({h, -a}, "side_r");
  if (sl > 0.0) {
    b.to({h + sl, -a}, "sleeve_r");
    b.to({h + sl, 0.0}, "cuff_r");
  } else {
    b.to({h - kArmholeInset, 0.0}, "armhole_r", 1.5);
  }
  b.to({p.neck_width / 2.0, 0.0}, "top_r");
  b.to({-p.neck_width / 2.0, 0.0}, "neck", front ? p.neck_depth : kBackNeckDepth);
  if (sl > 0.0) {
    b.to({-h - sl, 0.0}, "top_l");
    b.to({-h - sl, -a}, "cuff_l");
    b.to({-h, -a}, "sleeve_l");
  } else {
    b.to({-h + kArmholeInset, 0.0}, "top_l");
    b.to({-h, -a}, "armhole_l", 1.5);
  }
  b.close("side_l");
  return b;
}

SewingPattern make_jumpsuit(const TemplateParams& p) {
  Builder f = jumpsuit_panel("jumpsuit_front", Side::Front, p, true);
  Builder bk = jumpsuit_panel("jumpsuit_back", Side::Back, p, false);
  SewingPattern pat;
  upper_seams(f, bk, pat.stitches);
  pat.stitches.push_back(stitch(f, "inseam_l", "inseam_r", bk, "inseam_l", "inseam_r"));
  pat.panels.push_back(f.finish());
  pat.panels.push_back(bk.finish());
  return pat;
}

SewingPattern make_shirt(const TemplateParams& p) {
  const double hem = -p.torso_length - kShirtHip;
  BodiceSpec fs = upper_spec(p, hem, true);
  const double q = p.torso_width / 4.0;
  if (p.dart_count == 1) fs.darts = {-q};
  if (p.dart_count == 2) fs.darts = {-q, q};
  fs.dart_w = p.dart_width;
  fs.dart_d = p.dart_depth;
  Builder f = bodice("shirt_front", Side::Front, fs);
  Builder bk = bodice("shirt_back", Side::Back, upper_spec(p, hem, false));
  SewingPattern pat;
  upper_seams(f, bk, pat.stitches);
  for (int k = 0; k < p.dart_count; ++k) {
    const std::string id = std::to_string(k);
    pat.stitches.push_back(stitch(f, "dart_" + id + "_a", f, "dart_" + id + "_b"));
  }
  pat.panels.push_back(f.finish());
  pat.panels.push_back(bk.finish());
  return pat;
}

void check_params(const TemplateParams& p) {
  std::vector<std::string> bad;
  for (const NumericField& f : numeric_fields()) {
    const double v = p.*(f.member);
    if (!std::isfinite(v) || v < f.lo || v > f.hi) bad.push_back(f.name);
  }
  if (p.dart_count < 0 || p.dart_count > kMaxDarts) bad.push_back("dart_count");
  if (!bad.empty()) {
    std::string msg = "parameter out of range:";
    for (const std::string& b : bad) msg += " " + b;
    throw Error(msg);
  }
  const double shoulder = p.torso_width / 2.0 - p.neck_width / 2.0 - kArmholeInset;
  if (shoulder < kMinShoulder) throw Error("shoulder too narrow: torso_width, neck_width");
  if (p.neck_depth >= p.armhole_depth) throw Error("neckline below the armhole: neck_depth, armhole_depth");
}

}  // namespace

std::string_view to_string(Template t) {
  switch (t) {
    case Template::OnePanelDress: return "one_panel_dress";
    case Template::Jumpsuit: return "jumpsuit";
    case Template::TopPants: return "top_pants";
    case Template::TopSkirt: return "top_skirt";
    case Template::ShirtDarts: return "shirt_darts";
  }
  return "?";
}

Template template_from_string(std::string_view s) {
  for (Template t : kAllTemplates)
    if (to_string(t) == s) return t;
  throw Error("unknown template: " + std::string(s));
}

const std::vector<ParamRange>& param_ranges() {
  static const std::vector<ParamRange> r = [] {
    std::vector<ParamRange> out;
    for (const NumericField& f : numeric_fields()) out.push_back({f.name, f.lo, f.hi});
    out.push_back({"dart_count", 0.0, static_cast<double>(kMaxDarts)});
    return out;
  }();
  return r;
}

TemplateParams midpoint_params(Template t) {
  TemplateParams p;
  p.tmpl = t;
  for (const NumericField& f : numeric_fields()) p.*(f.member) = 0.5 * (f.lo + f.hi);
  p.dart_count = 1;
  return p;
}

TemplateParams sample_params(Template t, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TemplateParams p;
  p.tmpl = t;
  p.seed = seed;
  for (const NumericField& f : numeric_fields()) p.*(f.member) = f.lo + unit_double(rng) * (f.hi - f.lo);
  p.dart_count = static_cast<int>(rng() % (kMaxDarts + 1));
  p.waistband = (rng() & 1U) != 0;
  p.hole = (rng() & 1U) != 0;
  if (t == Template::ShirtDarts && p.dart_count == 0) p.dart_count = 1;
  return p;
}

SewingPattern gen_pattern(const TemplateParams& params) {
  check_params(params);
  TemplateParams p = params;
  std::mt19937_64 rng(splitmix64(params.seed ^ 0x9e3779b97f4a7c15ULL));
  for (const NumericField& f : numeric_fields()) {
    const double j = (unit_double(rng) - 0.5) * 2.0 * kJitter * (f.hi - f.lo);
    p.*(f.member) = std::clamp(p.*(f.member) + j, f.lo, f.hi);
  }
  check_params(p);
  SewingPattern pat;
  switch (p.tmpl) {
    case Template::OnePanelDress: pat = make_dress(p); break;
    case Template::Jumpsuit: pat = make_jumpsuit(p); break;
    case Template::TopPants: pat = make_top_pants(p); break;
    case Template::TopSkirt: pat = make_top_skirt(p); break;
    case Template::ShirtDarts: pat = make_shirt(p); break;
  }
  try {
    check_pattern(pat);
  } catch (const SemanticError& e) {
    throw Error(std::string("invalid geometry for ") + std::string(to_string(p.tmpl)) + ": " + e.what());
  }
  normalize_orientation(pat);
  return pat;
}

SewingPattern feature_fixture(std::string_view name) {
  if (name == "waistband") {
    TemplateParams p = midpoint_params(Template::TopSkirt);
    p.waistband = true;
    return gen_pattern(p);
  }
  if (name == "hole") {
    TemplateParams p = midpoint_params(Template::OnePanelDress);
    p.hole = true;
    return gen_pattern(p);
  }
  if (name == "darts") {
    TemplateParams p = midpoint_params(Template::ShirtDarts);
    p.dart_count = 2;
    return gen_pattern(p);
  }
  throw Error("unknown fixture: " + std::string(name));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Corpus gen_corpus(const std::vector<std::pair<Template, int>>& plan, std::uint64_t seed) {
  Corpus c;
  std::uint64_t i = 0;
  for (const auto& [t, count] : plan) {
    if (count < 0) throw Error("negative sample count");
    for (int k = 0; k < count; ++k, ++i) {
      const std::uint64_t s = splitmix64(seed + i);
      char file[64];
      std::snprintf(file, sizeof file, "%s_%04llu.json", std::string(to_string(t)).c_str(),
                    static_cast<unsigned long long>(i));
      c.entries.push_back({file, t, s});
      c.documents.push_back(serialize_pattern(gen_pattern(sample_params(t, s))));
    }
  }
  return c;
}

std::string format_manifest(const Corpus& c) {
  std::ostringstream os;
  os << "GICORPUS1\n";
  for (const CorpusEntry& e : c.entries) os << e.file << ',' << to_string(e.tmpl) << ',' << e.seed << '\n';
  return os.str();
}

void write_corpus(const Corpus& c, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    out << text;
    if (!out) throw Error("cannot write " + (fs::path(dir) / name).string());
  };
  for (std::size_t i = 0; i < c.entries.size(); ++i) write(c.entries[i].file, c.documents[i]);
  write("manifest.csv", format_manifest(c));
}

}  // namespace gimg
