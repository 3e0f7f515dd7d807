#include "sitewatch/sim.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sitewatch/errors.hpp"

namespace sitewatch {

namespace {

using nlohmann::json;

// Counter-based generator: one splitmix64 chain per draw, keyed on
// (seed, channel, a, b).  No generator state is carried between draws, so
// output never depends on evaluation order and is bit-identical across
// platforms.  Raising a rate can only turn "keep" draws into "drop" draws,
// never the reverse, which gives monotone noise behaviour per seed.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t channel, std::uint64_t a,
                  std::uint64_t b) {
  std::uint64_t h = splitmix64(seed ^ 0x632be59bd9b4e019ULL);
  h = splitmix64(h ^ splitmix64(channel));
  h = splitmix64(h ^ splitmix64(a));
  h = splitmix64(h ^ splitmix64(b));
  return h;
}

// Uniform double in [0, 1) from the top 53 bits.
double unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double draw(std::uint64_t seed, std::uint64_t channel, std::uint64_t a,
            std::uint64_t b = 0) {
  return unit(mix(seed, channel, a, b));
}

// Draw channels.
enum : std::uint64_t {
  kChBurstStart = 1,
  kChBurstLen = 2,
  kChMiss = 3,
  kChFpGate = 4,
  kChFpCat = 5,
  kChFpDesc = 6,
  kChFpConf = 7,
  kChClutterGate = 8,
  kChClutterCount = 9,
  kChClutterPick = 10,
  kChClutterConf = 11,
  kChObjCat = 12,
  kChObjDesc = 13,
  kChObjConf = 14,
  kChScafCat = 15,
  kChScafDesc = 16,
  kChScafConf = 17,
  kChSignPick = 18,
  kChSignConf = 19,
  kChGarbleSeed = 20,
  kChBox = 21,
};

// Inside garble_text, keyed per character index.
enum : std::uint64_t {
  kGarbleGate = 1,
  kGarbleMode = 2,
  kGarblePick = 3,
};

// Synthetic 1920x1080 canvas split into a 10x5 grid of cells; each slot owns
// one cell, so same-frame detections in different slots never overlap and
// the dedup stage leaves clean streams alone.
constexpr int kCanvasW = 1920;
constexpr int kCanvasH = 1080;
constexpr int kGridCols = 10;
constexpr int kGridRows = 5;
constexpr int kCellW = kCanvasW / kGridCols;   // 192
constexpr int kCellH = kCanvasH / kGridRows;   // 216

constexpr int kMaxScaffold = 16;  // slots 0..15
constexpr int kMaxObjects = 24;   // slots 16..39
constexpr int kFpSlot = 40;
constexpr int kClutterBase = 41;  // slots 41..43
constexpr int kMaxClutter = 3;
constexpr int kTextBase = 45;     // slots 45..48
constexpr int kMaxSigns = 4;

BoundingBox box_for_slot(std::uint64_t seed, std::int64_t frame, int slot) {
  const int cell = slot % (kGridCols * kGridRows);
  const int cx = (cell % kGridCols) * kCellW;
  const int cy = (cell / kGridCols) * kCellH;
  const auto sub = [&](int axis) {
    return draw(seed, kChBox, static_cast<std::uint64_t>(frame),
                static_cast<std::uint64_t>(slot) * 4 + static_cast<std::uint64_t>(axis));
  };
  const int w = 40 + static_cast<int>(sub(0) * 136.0);  // 40..175
  const int h = 40 + static_cast<int>(sub(1) * 160.0);  // 40..199
  const int x = cx + static_cast<int>(sub(2) * static_cast<double>(kCellW - w));
  const int y = cy + static_cast<int>(sub(3) * static_cast<double>(kCellH - h));
  return BoundingBox{static_cast<double>(x), static_cast<double>(y),
                     static_cast<double>(w), static_cast<double>(h)};
}

double conf_in_band(const ConfidenceBand& band, double u) {
  return band.lo + u * (band.hi - band.lo);
}

template <typename T>
const T& pick(const std::vector<T>& items, double u) {
  auto idx = static_cast<std::size_t>(u * static_cast<double>(items.size()));
  if (idx >= items.size()) idx = items.size() - 1;
  return items[idx];
}

void require_rate(double v, const char* name) {
  if (v < 0.0 || v > 1.0) {
    throw ConfigError(std::string("sim: ") + name + " must be in [0, 1]");
  }
}

const char* const kClutterUnknowns[] = {"mailbox", "bicycle", "person",
                                        "storefront", "awning", "planter"};

}  // namespace

SimConfig parse_sim_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("sim config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("sim config: top level must be an object");

  SimConfig cfg;
  if (!doc.contains("n_frames") || !doc.at("n_frames").is_number_integer()) {
    throw ConfigError("sim config: missing integer field 'n_frames'");
  }
  cfg.n_frames = doc.at("n_frames").get<std::int64_t>();
  if (cfg.n_frames < 0) throw ConfigError("sim config: n_frames must be >= 0");

  auto opt_rate = [&](const char* key, double& out) {
    if (!doc.contains(key)) return;
    if (!doc.at(key).is_number()) {
      throw ConfigError(std::string("sim config: ") + key + " must be a number");
    }
    out = doc.at(key).get<double>();
    require_rate(out, key);
  };
  opt_rate("miss_rate", cfg.miss_rate);
  opt_rate("fp_rate", cfg.fp_rate);
  opt_rate("clutter_rate", cfg.clutter_rate);
  opt_rate("ocr_garble_rate", cfg.ocr_garble_rate);

  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_integer()) {
      throw ConfigError("sim config: seed must be an integer");
    }
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }

  if (doc.contains("burst")) {
    const json& jb = doc.at("burst");
    if (!jb.is_object()) throw ConfigError("sim config: burst must be an object");
    if (jb.contains("prob")) {
      cfg.burst.prob = jb.at("prob").get<double>();
      require_rate(cfg.burst.prob, "burst.prob");
    }
    if (jb.contains("max_len")) {
      if (!jb.at("max_len").is_number_integer()) {
        throw ConfigError("sim config: burst.max_len must be an integer");
      }
      cfg.burst.max_len = jb.at("max_len").get<int>();
      if (cfg.burst.max_len < 0) throw ConfigError("sim config: burst.max_len must be >= 0");
    }
    if (cfg.burst.prob > 0.0 && cfg.burst.max_len < 1) {
      throw ConfigError("sim config: burst.prob > 0 needs burst.max_len >= 1");
    }
  }

  if (doc.contains("spans")) {
    const json& arr = doc.at("spans");
    if (!arr.is_array()) throw ConfigError("sim config: spans must be an array");
    for (const json& js : arr) {
      if (!js.is_object()) throw ConfigError("sim config: spans entries must be objects");
      SimSpan span;
      if (!js.contains("start") || !js.contains("end") ||
          !js.at("start").is_number_integer() || !js.at("end").is_number_integer()) {
        throw ConfigError("sim config: span needs integer 'start' and 'end'");
      }
      span.start = js.at("start").get<std::int64_t>();
      span.end = js.at("end").get<std::int64_t>();
      if (span.start < 0 || span.end <= span.start || span.end > cfg.n_frames) {
        throw ConfigError("sim config: span [" + std::to_string(span.start) + ", " +
                          std::to_string(span.end) + ") is outside [0, " +
                          std::to_string(cfg.n_frames) + ") or empty");
      }
      if (js.contains("profile")) {
        const json& jp = js.at("profile");
        if (!jp.is_object()) throw ConfigError("sim config: profile must be an object");
        auto opt_count = [&](const char* key, int& out, int cap) {
          if (!jp.contains(key)) return;
          if (!jp.at(key).is_number_integer()) {
            throw ConfigError(std::string("sim config: profile.") + key +
                              " must be an integer");
          }
          out = jp.at(key).get<int>();
          if (out < 0 || out > cap) {
            throw ConfigError(std::string("sim config: profile.") + key +
                              " must be in [0, " + std::to_string(cap) + "]");
          }
        };
        opt_count("scaffold", span.profile.scaffold, kMaxScaffold);
        opt_count("objects", span.profile.objects, kMaxObjects);
        opt_count("signs", span.profile.signs, kMaxSigns);
        if (jp.contains("object_categories")) {
          const json& jc = jp.at("object_categories");
          if (!jc.is_array()) {
            throw ConfigError("sim config: profile.object_categories must be an array");
          }
          for (const json& jn : jc) {
            if (!jn.is_string()) {
              throw ConfigError(
                  "sim config: profile.object_categories entries must be strings");
            }
            span.profile.object_categories.push_back(jn.get<std::string>());
          }
        }
      }
      cfg.spans.push_back(std::move(span));
    }
    std::sort(cfg.spans.begin(), cfg.spans.end(),
              [](const SimSpan& a, const SimSpan& b) { return a.start < b.start; });
    for (std::size_t i = 1; i < cfg.spans.size(); ++i) {
      if (cfg.spans[i].start < cfg.spans[i - 1].end) {
        throw ConfigError("sim config: spans overlap at frame " +
                          std::to_string(cfg.spans[i].start));
      }
    }
  }
  return cfg;
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open sim config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sim_config(buf.str());
}

std::string garble_text(std::string_view text, double rate, std::uint64_t seed) {
  require_rate(rate, "garble rate");
  static constexpr std::string_view kCharset = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::string out;
  out.reserve(text.size());
  for (std::size_t j = 0; j < text.size(); ++j) {
    const char c = text[j];
    if (draw(seed, kGarbleGate, j) >= rate) {
      out.push_back(c);
      continue;
    }
    if (draw(seed, kGarbleMode, j) < 0.5) continue;  // deletion
    auto idx = static_cast<std::size_t>(draw(seed, kGarblePick, j) *
                                        static_cast<double>(kCharset.size()));
    if (idx >= kCharset.size()) idx = kCharset.size() - 1;
    char sub = kCharset[idx];
    if (sub == c) sub = kCharset[(idx + 1) % kCharset.size()];
    out.push_back(sub);
  }
  return out;
}

SimOutput generate_stream(const SimConfig& sim, const PipelineConfig& pipeline) {
  // Vocabulary-dependent checks happen here, not in parse_sim_config, so a
  // sim config can be parsed without knowing the pipeline it will run under.
  std::vector<const Category*> scaffold_vert, scaffold_horiz, targets;
  for (const Category& cat : pipeline.vocabulary.categories()) {
    switch (cat.kind) {
      case CategoryKind::ScaffoldVertical: scaffold_vert.push_back(&cat); break;
      case CategoryKind::ScaffoldHorizontal: scaffold_horiz.push_back(&cat); break;
      case CategoryKind::TargetObject: targets.push_back(&cat); break;
      case CategoryKind::NullClass: break;
    }
  }
  std::vector<std::string> clutter_pool;
  for (const Category& cat : pipeline.vocabulary.categories()) {
    if (cat.kind == CategoryKind::NullClass) {
      clutter_pool.insert(clutter_pool.end(), cat.descriptors.begin(),
                          cat.descriptors.end());
    }
  }
  for (const char* u : kClutterUnknowns) clutter_pool.emplace_back(u);

  struct SpanPlan {
    const SimSpan* span;
    std::vector<const Category*> object_cats;
  };
  std::vector<SpanPlan> plans;
  for (const SimSpan& span : sim.spans) {
    SpanPlan plan{&span, {}};
    if (span.profile.scaffold > 0 && scaffold_vert.empty() && scaffold_horiz.empty()) {
      throw ConfigError("sim: profile asks for scaffold but the vocabulary has no "
                        "scaffold categories");
    }
    if (span.profile.objects > 0) {
      if (span.profile.object_categories.empty()) {
        throw ConfigError("sim: profile asks for objects but lists no object_categories");
      }
      for (const std::string& name : span.profile.object_categories) {
        const Category* cat = pipeline.vocabulary.find_category(name);
        if (cat == nullptr) {
          throw ConfigError("sim: object category '" + name + "' is not in the vocabulary");
        }
        if (cat->kind != CategoryKind::TargetObject) {
          throw ConfigError("sim: object category '" + name + "' is not a target category");
        }
        plan.object_cats.push_back(cat);
      }
    }
    if (span.profile.signs > 0 && pipeline.sign_dictionary.empty()) {
      throw ConfigError("sim: profile asks for signs but the sign dictionary is empty");
    }
    plans.push_back(std::move(plan));
  }

  SimOutput out;
  out.frames.reserve(static_cast<std::size_t>(sim.n_frames));
  out.truth.reserve(static_cast<std::size_t>(sim.n_frames));

  std::size_t span_idx = 0;
  int burst_left = 0;
  for (std::int64_t i = 0; i < sim.n_frames; ++i) {
    while (span_idx < plans.size() && plans[span_idx].span->end <= i) ++span_idx;
    const SpanPlan* plan = nullptr;
    if (span_idx < plans.size() && plans[span_idx].span->start <= i) {
      plan = &plans[span_idx];
    }
    const bool truth = plan != nullptr;

    bool bursting = false;
    if (burst_left > 0) {
      bursting = true;
      --burst_left;
    } else if (sim.burst.prob > 0.0 &&
               draw(sim.seed, kChBurstStart, static_cast<std::uint64_t>(i)) <
                   sim.burst.prob) {
      int len = 1 + static_cast<int>(
          draw(sim.seed, kChBurstLen, static_cast<std::uint64_t>(i)) *
          static_cast<double>(sim.burst.max_len));
      len = std::min(len, sim.burst.max_len);
      bursting = true;
      burst_left = len - 1;
    }

    FrameRecord frame;
    frame.frame_id = i;
    frame.timestamp_ms = i * 33;

    const auto fi = static_cast<std::uint64_t>(i);
    if (truth && !bursting) {
      const SpanProfile& prof = plan->span->profile;
      for (int s = 0; s < prof.scaffold; ++s) {
        const auto slot = static_cast<std::uint64_t>(s);
        if (sim.miss_rate > 0.0 && draw(sim.seed, kChMiss, fi, slot) < sim.miss_rate) {
          continue;
        }
        const std::vector<const Category*>* side =
            (s % 2 == 0) ? &scaffold_vert : &scaffold_horiz;
        if (side->empty()) side = side == &scaffold_vert ? &scaffold_horiz : &scaffold_vert;
        const Category* cat = pick(*side, draw(sim.seed, kChScafCat, fi, slot));
        Detection d;
        d.label = pick(cat->descriptors, draw(sim.seed, kChScafDesc, fi, slot));
        d.confidence = conf_in_band(cat->band, draw(sim.seed, kChScafConf, fi, slot));
        d.box = box_for_slot(sim.seed, i, s);
        frame.detections.push_back(std::move(d));
      }
      for (int s = 0; s < prof.objects; ++s) {
        const int slot_id = kMaxScaffold + s;
        const auto slot = static_cast<std::uint64_t>(slot_id);
        if (sim.miss_rate > 0.0 && draw(sim.seed, kChMiss, fi, slot) < sim.miss_rate) {
          continue;
        }
        const Category* cat = pick(plan->object_cats, draw(sim.seed, kChObjCat, fi, slot));
        Detection d;
        d.label = pick(cat->descriptors, draw(sim.seed, kChObjDesc, fi, slot));
        d.confidence = conf_in_band(cat->band, draw(sim.seed, kChObjConf, fi, slot));
        d.box = box_for_slot(sim.seed, i, slot_id);
        frame.detections.push_back(std::move(d));
      }
      for (int s = 0; s < prof.signs; ++s) {
        const int slot_id = kTextBase + s;
        const auto slot = static_cast<std::uint64_t>(slot_id);
        const std::string& entry =
            pick(pipeline.sign_dictionary.entries(), draw(sim.seed, kChSignPick, fi, slot));
        TextObservation t;
        t.text = garble_text(entry, sim.ocr_garble_rate,
                             mix(sim.seed, kChGarbleSeed, fi, slot));
        t.confidence = 0.5 + 0.5 * draw(sim.seed, kChSignConf, fi, slot);
        t.box = box_for_slot(sim.seed, i, slot_id);
        frame.texts.push_back(std::move(t));
      }
    }

    if (sim.fp_rate > 0.0 && !targets.empty() &&
        draw(sim.seed, kChFpGate, fi) < sim.fp_rate) {
      const Category* cat = pick(targets, draw(sim.seed, kChFpCat, fi));
      Detection d;
      d.label = pick(cat->descriptors, draw(sim.seed, kChFpDesc, fi));
      d.confidence = conf_in_band(cat->band, draw(sim.seed, kChFpConf, fi));
      d.box = box_for_slot(sim.seed, i, kFpSlot);
      frame.detections.push_back(std::move(d));
    }

    if (sim.clutter_rate > 0.0 && !clutter_pool.empty() &&
        draw(sim.seed, kChClutterGate, fi) < sim.clutter_rate) {
      const int count = 1 + static_cast<int>(draw(sim.seed, kChClutterCount, fi) *
                                             static_cast<double>(kMaxClutter));
      for (int s = 0; s < std::min(count, kMaxClutter); ++s) {
        const int slot_id = kClutterBase + s;
        const auto slot = static_cast<std::uint64_t>(slot_id);
        Detection d;
        d.label = pick(clutter_pool, draw(sim.seed, kChClutterPick, fi, slot));
        d.confidence = 0.05 + 0.9 * draw(sim.seed, kChClutterConf, fi, slot);
        d.box = box_for_slot(sim.seed, i, slot_id);
        frame.detections.push_back(std::move(d));
      }
    }

    out.frames.push_back(std::move(frame));
    out.truth.push_back(truth);
  }
  return out;
}

}  // namespace sitewatch
