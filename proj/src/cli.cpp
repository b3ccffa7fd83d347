#include "gimg/cli.hpp"

#include <CLI11.hpp>

#include <array>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "gimg/generator.hpp"
#include "gimg/metrics.hpp"
#include "gimg/svg.hpp"
#include "gimg/validate.hpp"

namespace gimg {

GridConfig CliConfig::grid() const {
  GridConfig g;
  g.grid_size = grid_size;
  g.origin = {origin_x, origin_y};
  g.extent = extent;
  g.margin_cells = margin_cells;
  g.check();
  return g;
}

DecodeOptions CliConfig::decode_options() const { return {anchor_weight, smooth}; }

namespace {

/// Operational failure: reported on the error stream, exit status 1.
struct Failure {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{"cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Failure{"cannot write " + path};
}

bool looks_like_tensor(const std::string& path) { return read_file(path).rfind("GIMG1", 0) == 0; }

Canvas canvas_for(const CliConfig& cfg, const Tensor& t) {
  return {{cfg.origin_x, cfg.origin_y}, cfg.extent / (t.rows > 0 ? t.rows : cfg.grid_size)};
}

GarmentImage load_image(const CliConfig& cfg, const std::string& path) {
  const Tensor t = load_tensor(path);
  return from_tensor(t, canvas_for(cfg, t));
}

void print_encode_error(const EncodeError& e, std::ostream& err) {
  err << "encode failed: stage=" << to_string(e.stage()) << " reason=" << e.reason() << ": " << e.what() << '\n';
  err << format_report(e.violations());
}

int cmd_encode(const CliConfig& cfg, const std::string& in, const std::string& out_path, std::ostream& err) {
  const SewingPattern p = parse_pattern(read_file(in));
  try {
    save_tensor(out_path, to_tensor(encode(p, cfg.grid())));
  } catch (const EncodeError& e) {
    print_encode_error(e, err);
    return 1;
  }
  return 0;
}

int cmd_decode(const CliConfig& cfg, const std::string& in, const std::string& out_path) {
  const SewingPattern p = decode(load_image(cfg, in), cfg.decode_options());
  write_file(out_path, serialize_pattern(p));
  return 0;
}

int cmd_roundtrip(const CliConfig& cfg, const std::string& in, double min_iou, std::ostream& out, std::ostream& err) {
  const SewingPattern p = parse_pattern(read_file(in));
  GarmentImage gi;
  try {
    gi = encode(p, cfg.grid());
  } catch (const EncodeError& e) {
    print_encode_error(e, err);
    return 1;
  }
  const SewingPattern gt = classify_and_split(p);
  const SewingPattern pred = decode(gi, cfg.decode_options());
  const PatternIou iou = pattern_iou(pred, gt, cfg.raster_res);
  out << format_iou_report(iou);
  const bool iso = stitch_graph_isomorphic(pred, gt);
  out << "stitch_graph: " << (iso ? "isomorphic" : "not isomorphic") << '\n';
  bool ok = iso;
  for (const PanelMatch& m : iou.matches) ok = ok && m.iou >= min_iou;
  return ok ? 0 : 1;
}

int cmd_validate(const CliConfig& cfg, const std::string& in, std::ostream& out) {
  const Tensor t = load_tensor(in);
  const std::vector<Violation> vs = validate_tensor(t, canvas_for(cfg, t));
  out << format_report(vs);
  return vs.empty() ? 0 : 1;
}

int cmd_repair(const CliConfig& cfg, const std::string& in, const std::string& out_path, std::ostream& out) {
  const RepairResult r = repair(load_image(cfg, in));
  for (const Fix& f : r.fixes) out << format_fix(f) << '\n';
  out << format_report(r.remaining);
  save_tensor(out_path, to_tensor(r.image));
  return r.remaining.empty() ? 0 : 1;
}

int cmd_iou(const CliConfig& cfg, const std::string& pred, const std::string& gt, std::ostream& out) {
  const SewingPattern a = parse_pattern(read_file(pred));
  const SewingPattern b = classify_and_split(parse_pattern(read_file(gt)));
  out << format_iou_report(pattern_iou(a, b, cfg.raster_res));
  return 0;
}

int cmd_gen(const std::string& tmpl, int count, std::uint64_t seed, const std::string& dir, std::ostream& out) {
  std::string name = tmpl;
  for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const Corpus c = gen_corpus({{template_from_string(name), count}}, seed);
  write_corpus(c, dir);
  out << "wrote " << c.entries.size() << " patterns to " << dir << '\n';
  return 0;
}

int cmd_render(const CliConfig& cfg, const std::string& in, const std::string& out_path) {
  if (looks_like_tensor(in))
    write_file(out_path, render_image_svg(load_image(cfg, in)));
  else
    write_file(out_path, render_pattern_svg(parse_pattern(read_file(in))));
  return 0;
}

int cmd_info(const std::string& in, std::ostream& out) {
  const Tensor t = load_tensor(in);
  out << "shape " << t.channels << 'x' << t.rows << 'x' << t.cols << '\n';
  const GarmentImage gi = from_tensor(t);
  for (LayerSide side : {LayerSide::Front, LayerSide::Back}) {
    const Layer& layer = gi.layer(side);
    const int g = layer.size();
    int inside = 0;
    std::array<int, kEdgeTypeCount> hist{};
    for (int y = 0; y < g; ++y)
      for (int x = 0; x < g; ++x) {
        inside += layer.at(x, y).inside ? 1 : 0;
        for (bool h : {true, false}) ++hist[static_cast<std::size_t>(layer.type({x, y, h}))];
      }
    out << (side == LayerSide::Front ? "front" : "back") << " inside " << inside;
    for (int k = 0; k < kEdgeTypeCount; ++k)
      out << ' ' << to_string(static_cast<EdgeType>(k)) << '=' << hist[static_cast<std::size_t>(k)];
    out << '\n';
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"GarmentImage codec: sewing patterns to and from a layered grid representation"};
  app.require_subcommand(1);
  app.add_option("--grid-size", cfg.grid_size, "Cells per side")->envname("GIMG_GRID_SIZE")->capture_default_str();
  app.add_option("--origin-x", cfg.origin_x, "Canvas left edge, cm")->envname("GIMG_ORIGIN_X")->capture_default_str();
  app.add_option("--origin-y", cfg.origin_y, "Canvas bottom edge, cm")->envname("GIMG_ORIGIN_Y")->capture_default_str();
  app.add_option("--extent", cfg.extent, "Canvas side length, cm")->envname("GIMG_EXTENT")->capture_default_str();
  app.add_option("--anchor-weight", cfg.anchor_weight, "Decoder anchor weight")
      ->envname("GIMG_ANCHOR_WEIGHT")
      ->capture_default_str();
  app.add_option("--raster-res", cfg.raster_res, "IoU raster resolution")->envname("GIMG_RASTER_RES")->capture_default_str();
  app.add_option("--margin-cells", cfg.margin_cells, "Empty top rows / right columns")
      ->envname("GIMG_MARGIN_CELLS")
      ->capture_default_str();
  app.add_flag("--smooth", cfg.smooth, "Smooth decoded boundaries")->envname("GIMG_SMOOTH");

  std::string in, in2, out_path;
  double min_iou = 0.9;
  std::string tmpl;
  int count = 1;
  std::uint64_t seed = 0;

  auto* enc = app.add_subcommand("encode", "Pattern JSON to tensor");
  enc->add_option("pattern", in)->required();
  enc->add_option("-o,--out", out_path)->required();
  auto* dec = app.add_subcommand("decode", "Tensor to pattern JSON");
  dec->add_option("tensor", in)->required();
  dec->add_option("-o,--out", out_path)->required();
  auto* rt = app.add_subcommand("roundtrip", "Encode, decode and compare");
  rt->add_option("pattern", in)->required();
  rt->add_option("--min-iou", min_iou, "Per-panel IoU threshold")->capture_default_str();
  auto* val = app.add_subcommand("validate", "Structural checks on a tensor");
  val->add_option("tensor", in)->required();
  auto* rep = app.add_subcommand("repair", "Apply repair rules");
  rep->add_option("tensor", in)->required();
  rep->add_option("-o,--out", out_path)->required();
  auto* iou = app.add_subcommand("iou", "Per-panel IoU of two patterns");
  iou->add_option("pred", in)->required();
  iou->add_option("gt", in2)->required();
  auto* gen = app.add_subcommand("gen", "Generate a pattern corpus");
  gen->add_option("--template", tmpl, "one_panel_dress, jumpsuit, top_pants, top_skirt or shirt_darts")->required();
  gen->add_option("--count", count)->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed)->capture_default_str();
  gen->add_option("-o,--out", out_path)->required();
  auto* ren = app.add_subcommand("render", "SVG of a pattern or tensor");
  ren->add_option("input", in)->required();
  ren->add_option("-o,--out", out_path)->required();
  auto* info = app.add_subcommand("info", "Tensor summary");
  info->add_option("tensor", in)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (enc->parsed()) return cmd_encode(cfg, in, out_path, err);
    if (dec->parsed()) return cmd_decode(cfg, in, out_path);
    if (rt->parsed()) return cmd_roundtrip(cfg, in, min_iou, out, err);
    if (val->parsed()) return cmd_validate(cfg, in, out);
    if (rep->parsed()) return cmd_repair(cfg, in, out_path, out);
    if (iou->parsed()) return cmd_iou(cfg, in, in2, out);
    if (gen->parsed()) return cmd_gen(tmpl, count, seed, out_path, out);
    if (ren->parsed()) return cmd_render(cfg, in, out_path);
    if (info->parsed()) return cmd_info(in, out);
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace gimg
