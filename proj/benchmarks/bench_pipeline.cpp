// Microbenchmarks for the per-frame hot path: JSONL parsing, vocabulary
// tallying, sign matching, the full frame decision and stream smoothing.
// The subject frame is simulator output with clutter, so label lookups and
// dedup see realistic rejects.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "sitewatch/config.hpp"
#include "sitewatch/decision.hpp"
#include "sitewatch/ingest.hpp"
#include "sitewatch/sign.hpp"
#include "sitewatch/sim.hpp"
#include "sitewatch/vocab.hpp"
#include "sitewatch/voter.hpp"

namespace {

using namespace sitewatch;

const PipelineConfig& config() {
  static const PipelineConfig c = default_config();
  return c;
}

// A busy in-span frame: 6 scaffold + 4 objects + 1 sign text plus clutter.
const FrameRecord& busy_frame() {
  static const FrameRecord frame = [] {
    SimConfig sim;
    sim.n_frames = 200;
    sim.seed = 3;
    sim.clutter_rate = 1.0;
    SimSpan span;
    span.start = 0;
    span.end = 200;
    span.profile.scaffold = 6;
    span.profile.objects = 4;
    span.profile.signs = 1;
    span.profile.object_categories = {"traffic_cone", "traffic_barrier"};
    sim.spans = {span};
    return generate_stream(sim, config()).frames.at(100);
  }();
  return frame;
}

const std::string& busy_line() {
  static const std::string line = serialize_frame(busy_frame());
  return line;
}

void BM_ParseFrame(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_frame(busy_line()));
  }
  state.SetItemsProcessed(state.iterations());
  state.SetBytesProcessed(state.iterations() *
                          static_cast<std::int64_t>(busy_line().size()));
}
BENCHMARK(BM_ParseFrame);

void BM_SerializeFrame(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(serialize_frame(busy_frame()));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SerializeFrame);

void BM_TallyDetections(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        tally_detections(busy_frame(), config().vocabulary, config().dedup_iou));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TallyDetections);

void BM_DiceSimilarity(benchmark::State& state) {
  const std::string a = normalize_text("roadwrk Ahead");
  const std::string b = normalize_text("Road Work Ahead");
  for (auto _ : state) {
    benchmark::DoNotOptimize(dice_similarity(a, b, 2));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DiceSimilarity);

void BM_CountSignMatches(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        count_sign_matches(busy_frame(), config().sign_dictionary, config().dice()));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CountSignMatches);

void BM_EvaluateFrame(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_frame(busy_frame(), config()));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EvaluateFrame);

void BM_SmoothStream(benchmark::State& state) {
  std::vector<bool> raw(10000);
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = (i / 97) % 2 == 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(smooth_stream(raw, 50));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(raw.size()));
}
BENCHMARK(BM_SmoothStream);

}  // namespace

BENCHMARK_MAIN();
