#include "sitewatch/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sitewatch/errors.hpp"

namespace sitewatch {

namespace {

using nlohmann::json;

std::vector<Category> builtin_categories() {
  // Confidence bands are tuned per class: large low-texture surfaces keep a
  // very low floor, small high-contrast objects and scaffold members need
  // progressively more confidence before they count.
  return {
      {"traffic_cone",
       CategoryKind::TargetObject,
       {"traffic cone"},
       {0.12, 1.0}},
      {"traffic_barrier",
       CategoryKind::TargetObject,
       {"orange and white striped traffic barrier", "white traffic barrier",
        "red traffic barrier", "traffic barrier", "orange traffic barrier"},
       {0.12, 1.0}},
      {"traffic_barricade",
       CategoryKind::TargetObject,
       {"construction barricade", "red traffic barricade", "white traffic barricade",
        "red and white barricade"},
       {0.03, 1.0}},
      {"construction_wall",
       CategoryKind::TargetObject,
       {"green construction wall", "construction wall", "green wall", "dark green wall"},
       {0.005, 1.0}},
      {"null",
       CategoryKind::NullClass,
       {"car", "white car", "truck", "bench", "fire hydrant", "computer monitor",
        "tree", "tree canopy", "building", "grass", "grassland"},
       {0.03, 1.0}},
      {"scaffold_pole",
       CategoryKind::ScaffoldVertical,
       {"scaffolding pole"},
       {0.25, 1.0}},
      {"scaffold_horizontal",
       CategoryKind::ScaffoldHorizontal,
       {"horizontal scaffolding"},
       {0.25, 1.0}},
  };
}

std::vector<std::string> builtin_dictionary() {
  return {
      "Authorized Personnel Only",
      "Caution: Construction Zone",
      "Road Work Ahead",
      "Construction Zone",
      "Sidewalk Closed",
      "Sidewalk Closed Ahead",
      "Use Other Side",
  };
}

CategoryKind parse_kind(const std::string& s) {
  if (s == "target") return CategoryKind::TargetObject;
  if (s == "null") return CategoryKind::NullClass;
  if (s == "scaffold_vertical") return CategoryKind::ScaffoldVertical;
  if (s == "scaffold_horizontal") return CategoryKind::ScaffoldHorizontal;
  throw ConfigError("config: unknown category kind '" + s + "'");
}

double require_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError("config: " + where + " must be a number");
  return j.get<double>();
}

int require_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError("config: " + where + " must be an integer");
  return j.get<int>();
}

void apply_vocabulary(const json& section, PipelineConfig& cfg) {
  if (!section.is_object()) throw ConfigError("config: vocabulary must be an object");
  std::vector<Category> cats;
  if (section.contains("categories")) {
    const json& arr = section.at("categories");
    if (!arr.is_array()) throw ConfigError("config: vocabulary.categories must be an array");
    for (const json& jc : arr) {
      if (!jc.is_object()) throw ConfigError("config: vocabulary.categories entries must be objects");
      Category cat;
      if (!jc.contains("name") || !jc.at("name").is_string()) {
        throw ConfigError("config: vocabulary category missing string 'name'");
      }
      cat.name = jc.at("name").get<std::string>();
      const std::string ctx = "vocabulary category '" + cat.name + "'";
      if (!jc.contains("kind") || !jc.at("kind").is_string()) {
        throw ConfigError("config: " + ctx + " missing string 'kind'");
      }
      cat.kind = parse_kind(jc.at("kind").get<std::string>());
      if (!jc.contains("descriptors") || !jc.at("descriptors").is_array()) {
        throw ConfigError("config: " + ctx + " missing array 'descriptors'");
      }
      for (const json& jd : jc.at("descriptors")) {
        if (!jd.is_string()) throw ConfigError("config: " + ctx + " descriptors must be strings");
        cat.descriptors.push_back(jd.get<std::string>());
      }
      if (jc.contains("band")) {
        const json& jb = jc.at("band");
        if (!jb.is_array() || jb.size() != 2) {
          throw ConfigError("config: " + ctx + " band must be [lo, hi]");
        }
        cat.band.lo = require_number(jb[0], ctx + " band lo");
        cat.band.hi = require_number(jb[1], ctx + " band hi");
      }
      cats.push_back(std::move(cat));
    }
  }
  cfg.vocabulary = Vocabulary(std::move(cats));  // ctor validates
  if (section.contains("dedup_iou")) {
    cfg.dedup_iou = require_number(section.at("dedup_iou"), "vocabulary.dedup_iou");
    if (cfg.dedup_iou < 0.0 || cfg.dedup_iou > 1.0) {
      throw ConfigError("config: vocabulary.dedup_iou must be in [0, 1]");
    }
  }
}

void apply_dice(const json& section, PipelineConfig& cfg) {
  if (!section.is_object()) throw ConfigError("config: dice must be an object");
  if (section.contains("ngram")) {
    cfg.dice_ngram = require_int(section.at("ngram"), "dice.ngram");
    if (cfg.dice_ngram < 1) throw ConfigError("config: dice.ngram must be >= 1");
  }
  if (section.contains("threshold")) {
    cfg.dice_threshold = require_number(section.at("threshold"), "dice.threshold");
    if (cfg.dice_threshold < 0.0 || cfg.dice_threshold > 1.0) {
      throw ConfigError("config: dice.threshold must be in [0, 1]");
    }
  }
}

void apply_thresholds(const json& section, PipelineConfig& cfg) {
  if (!section.is_object()) throw ConfigError("config: thresholds must be an object");
  auto get = [&](const char* key, int& out) {
    if (!section.contains(key)) return;
    out = require_int(section.at(key), std::string("thresholds.") + key);
    if (out < 0) throw ConfigError(std::string("config: thresholds.") + key + " must be >= 0");
  };
  get("scaffold_min", cfg.scaffold_min);
  get("objects_min", cfg.objects_min);
  get("signs_min", cfg.signs_min);
}

void apply_voter(const json& section, PipelineConfig& cfg) {
  if (!section.is_object()) throw ConfigError("config: voter must be an object");
  if (section.contains("k")) {
    cfg.voter_k = require_int(section.at("k"), "voter.k");
    if (cfg.voter_k < 1) throw ConfigError("config: voter.k must be >= 1");
  }
  if (section.contains("tie")) {
    const json& jt = section.at("tie");
    if (!jt.is_string() || jt.get<std::string>() != "hold") {
      throw ConfigError("config: voter.tie supports only \"hold\"");
    }
  }
}

}  // namespace

PipelineConfig default_config() {
  PipelineConfig cfg;
  cfg.vocabulary = Vocabulary(builtin_categories());
  cfg.sign_dictionary = SignDictionary(builtin_dictionary());
  return cfg;
}

PipelineConfig parse_config(const std::string& json_text) {
  const bool blank = std::all_of(json_text.begin(), json_text.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
  PipelineConfig cfg = default_config();
  if (blank) return cfg;

  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");

  if (doc.contains("vocabulary")) apply_vocabulary(doc.at("vocabulary"), cfg);
  if (doc.contains("sign_dictionary")) {
    const json& arr = doc.at("sign_dictionary");
    if (!arr.is_array()) throw ConfigError("config: sign_dictionary must be an array");
    std::vector<std::string> entries;
    for (const json& je : arr) {
      if (!je.is_string()) throw ConfigError("config: sign_dictionary entries must be strings");
      entries.push_back(je.get<std::string>());
    }
    cfg.sign_dictionary = SignDictionary(std::move(entries));
  }
  if (doc.contains("dice")) apply_dice(doc.at("dice"), cfg);
  if (doc.contains("thresholds")) apply_thresholds(doc.at("thresholds"), cfg);
  if (doc.contains("voter")) apply_voter(doc.at("voter"), cfg);

  if (cfg.signs_min > 0 && cfg.sign_dictionary.empty()) {
    throw ConfigError(
        "config: sign_dictionary is empty but the sign rule is enabled "
        "(signs_min > 0)");
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace sitewatch
