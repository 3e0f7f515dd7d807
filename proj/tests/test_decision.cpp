#include <doctest.h>

#include <random>
#include <string>

#include "helpers.hpp"
#include "sitewatch/config.hpp"
#include "sitewatch/decision.hpp"

using namespace sitewatch;
using namespace sitewatch::testing;

namespace {

EvidenceCounts counts(int scaffold, int objects, int signs) {
  EvidenceCounts c;
  c.scaffold_count = scaffold;
  c.object_count = objects;
  c.sign_match_count = signs;
  return c;
}

// Expected verdicts under the default minimums (5 scaffold, 3 objects,
// 1 sign) for every combination of scaffold 0..10, objects 0..6, signs 0..3,
// flattened as ((scaffold * 7) + objects) * 4 + signs.  Frozen from an
// independent recomputation of the rule table.
const std::string kRuleTable =
    "01110111011111111111111111110111011101111111111111111111011101110111111111111"
    "11111110111011101111111111111111111011101110111111111111111111111111111111111"
    "11111111111111111111111111111111111111111111111111111111111111111111111111111"
    "11111111111111111111111111111111111111111111111111111111111111111111111111111";

}  // namespace

TEST_CASE("single-rule firings under the default minimums") {
  const PipelineConfig cfg = default_config();

  Decision d = evaluate_counts(counts(5, 0, 0), cfg);
  CHECK(d.construction);
  REQUIRE(d.fired.size() == 1);
  CHECK(d.fired[0] == Rule::Scaffold);

  d = evaluate_counts(counts(0, 3, 0), cfg);
  CHECK(d.construction);
  REQUIRE(d.fired.size() == 1);
  CHECK(d.fired[0] == Rule::Objects);

  d = evaluate_counts(counts(0, 0, 1), cfg);
  CHECK(d.construction);
  REQUIRE(d.fired.size() == 1);
  CHECK(d.fired[0] == Rule::Sign);

  d = evaluate_counts(counts(5, 3, 1), cfg);
  CHECK(d.construction);
  REQUIRE(d.fired.size() == 3);
  CHECK(d.fired == std::vector<Rule>{Rule::Scaffold, Rule::Objects, Rule::Sign});
}

TEST_CASE("evidence near but below every minimum stays negative") {
  const PipelineConfig cfg = default_config();
  const Decision d = evaluate_counts(counts(4, 2, 0), cfg);
  CHECK_FALSE(d.construction);
  CHECK(d.fired.empty());
  // Counts pass through untouched for reporting.
  CHECK(d.counts.scaffold_count == 4);
  CHECK(d.counts.object_count == 2);
}

TEST_CASE("full rule table") {
  const PipelineConfig cfg = default_config();
  for (int s = 0; s <= 10; ++s) {
    for (int o = 0; o <= 6; ++o) {
      for (int g = 0; g <= 3; ++g) {
        const std::size_t idx =
            (static_cast<std::size_t>(s) * 7 + static_cast<std::size_t>(o)) * 4 +
            static_cast<std::size_t>(g);
        const bool expected = kRuleTable.at(idx) == '1';
        const Decision d = evaluate_counts(counts(s, o, g), cfg);
        CAPTURE(s);
        CAPTURE(o);
        CAPTURE(g);
        CHECK(d.construction == expected);
      }
    }
  }
}

TEST_CASE("a minimum of zero disables its rule") {
  PipelineConfig cfg = default_config();
  cfg.scaffold_min = 0;
  CHECK_FALSE(evaluate_counts(counts(10, 0, 0), cfg).construction);

  cfg = default_config();
  cfg.signs_min = 0;
  CHECK_FALSE(evaluate_counts(counts(0, 0, 5), cfg).construction);

  cfg = default_config();
  cfg.objects_min = 0;
  CHECK_FALSE(evaluate_counts(counts(0, 100, 0), cfg).construction);
}

TEST_CASE("more evidence never flips a positive verdict back") {
  const PipelineConfig cfg = default_config();
  std::mt19937 gen(37);
  std::uniform_int_distribution<int> base(0, 8);
  std::uniform_int_distribution<int> inc(0, 4);
  for (int trial = 0; trial < 1000; ++trial) {
    const int s = base(gen), o = base(gen), g = base(gen);
    const Decision before = evaluate_counts(counts(s, o, g), cfg);
    const Decision after =
        evaluate_counts(counts(s + inc(gen), o + inc(gen), g + inc(gen)), cfg);
    if (before.construction) CHECK(after.construction);
    // Fired rules only ever grow.
    for (Rule r : before.fired) {
      CHECK(std::find(after.fired.begin(), after.fired.end(), r) != after.fired.end());
    }
  }
}

TEST_CASE("fired rules imply their thresholds") {
  const PipelineConfig cfg = default_config();
  std::mt19937 gen(41);
  std::uniform_int_distribution<int> v(0, 12);
  for (int trial = 0; trial < 1000; ++trial) {
    const EvidenceCounts c = counts(v(gen), v(gen), v(gen));
    const Decision d = evaluate_counts(c, cfg);
    CHECK(d.construction == !d.fired.empty());
    for (Rule r : d.fired) {
      if (r == Rule::Scaffold) CHECK(c.scaffold_count >= cfg.scaffold_min);
      if (r == Rule::Objects) CHECK(c.object_count >= cfg.objects_min);
      if (r == Rule::Sign) CHECK(c.sign_match_count >= cfg.signs_min);
    }
  }
}

TEST_CASE("frame evaluation runs the whole funnel") {
  const PipelineConfig cfg = default_config();
  std::vector<Detection> dets;
  for (int i = 0; i < 5; ++i) dets.push_back(det("scaffolding pole", 0.4, 30.0 * i, 0));
  const FrameRecord f = frame_of(dets, {txt("Road Work Ahead", 0.9, 10, 500)});

  const Decision d = evaluate_frame(f, cfg);
  CHECK(d.construction);
  CHECK(d.fired == std::vector<Rule>{Rule::Scaffold, Rule::Sign});
  CHECK(d.counts.scaffold_count == 5);
  CHECK(d.counts.object_count == 0);
  CHECK(d.counts.sign_match_count == 1);
}

TEST_CASE("batch evaluation preserves order") {
  const PipelineConfig cfg = default_config();
  std::vector<FrameRecord> frames;
  frames.push_back(frame_of({}, {}, 10));
  std::vector<Detection> dets;
  for (int i = 0; i < 3; ++i) dets.push_back(det("traffic cone", 0.5, 30.0 * i, 0));
  frames.push_back(frame_of(dets, {}, 11));

  const auto out = evaluate_stream(frames, cfg);
  REQUIRE(out.size() == 2);
  CHECK(out[0].first == 10);
  CHECK_FALSE(out[0].second.construction);
  CHECK(out[1].first == 11);
  CHECK(out[1].second.construction);

  CHECK(evaluate_stream({}, cfg).empty());
}

TEST_CASE("decision serialization") {
  const PipelineConfig cfg = default_config();
  const Decision d = evaluate_counts(counts(5, 0, 0), cfg);
  CHECK(serialize_decision(7, d.construction, d) ==
        R"({"frame_id":7,"construction":true,"rules":["scaffold"],)"
        R"("counts":{"scaffold":5,"objects":0,"signs":0}})");

  // A smoothed verdict can disagree with the raw evidence.
  CHECK(serialize_decision(8, false, d) ==
        R"({"frame_id":8,"construction":false,"rules":["scaffold"],)"
        R"("counts":{"scaffold":5,"objects":0,"signs":0}})");
}
