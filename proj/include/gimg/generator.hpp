#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gimg/pattern.hpp"

namespace gimg {

enum class Template { OnePanelDress, Jumpsuit, TopPants, TopSkirt, ShirtDarts };

inline constexpr Template kAllTemplates[] = {Template::OnePanelDress, Template::Jumpsuit, Template::TopPants,
                                             Template::TopSkirt, Template::ShirtDarts};

/// "one_panel_dress", "jumpsuit", "top_pants", "top_skirt", "shirt_darts".
std::string_view to_string(Template t);
/// Throws Error for an unknown name.
Template template_from_string(std::string_view s);

/// Dimensions in cm. The body centre is x = 0 and the shoulder line y = 0.
struct TemplateParams {
  Template tmpl = Template::OnePanelDress;
  std::uint64_t seed = 0;
  double torso_width = 43.0;    ///< front width at the chest
  double torso_length = 40.0;   ///< shoulder to waist
  double armhole_depth = 20.0;
  double neck_width = 20.0;
  double neck_depth = 9.0;      ///< front neckline; the back is shallower
  double skirt_length = 50.0;
  double hem_flare = 6.0;       ///< extra half-width at the hem
  double sleeve_length = 15.0;  ///< kimono sleeve; below 6 means none
  double pants_length = 64.0;   ///< waist to hem
  double crotch_depth = 24.0;
  double leg_gap = 11.0;        ///< half the gap between the legs at the hem
  int dart_count = 1;
  double dart_depth = 20.0;
  double dart_width = 5.0;
  bool waistband = false;       ///< TopSkirt only
  bool hole = false;            ///< OnePanelDress only: back cut-out
};

struct ParamRange {
  const char* name;
  double lo;
  double hi;
};

/// Declared range of every numeric parameter.
const std::vector<ParamRange>& param_ranges();

TemplateParams midpoint_params(Template t);
/// Every numeric parameter drawn uniformly from its range; booleans fair coins.
TemplateParams sample_params(Template t, std::uint64_t seed);

/// Deterministic in `params` (including the seed, which jitters the
/// dimensions slightly within their ranges). Throws Error naming the
/// offending parameters when a value is out of range or the geometry is
/// invalid.
SewingPattern gen_pattern(const TemplateParams& params);

/// Named fixtures exercising one representation feature each:
/// "waistband", "hole", "darts".
SewingPattern feature_fixture(std::string_view name);

/// 64-bit mix used to derive per-sample seeds.
std::uint64_t splitmix64(std::uint64_t x);

struct CorpusEntry {
  std::string file;
  Template tmpl = Template::OnePanelDress;
  std::uint64_t seed = 0;
};

struct Corpus {
  std::vector<CorpusEntry> entries;
  std::vector<std::string> documents;  ///< serialized patterns, parallel to entries
};

/// Sample i of the corpus uses seed splitmix64(seed + i), counted over the
/// whole plan in order. Files are named "<template>_<index>.json".
Corpus gen_corpus(const std::vector<std::pair<Template, int>>& plan, std::uint64_t seed);

/// `GICORPUS1` then `file,template,seed` rows.
std::string format_manifest(const Corpus& c);

/// Writes the documents and manifest.csv into `dir` (created if needed).
void write_corpus(const Corpus& c, const std::string& dir);

}  // namespace gimg
