#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sitewatch/config.hpp"
#include "sitewatch/types.hpp"

namespace sitewatch {

// What a construction span looks like while it is on screen.
struct SpanProfile {
  int scaffold = 0;                            // scaffold detections per frame (max 16)
  int objects = 0;                             // object detections per frame (max 24)
  int signs = 0;                               // sign texts per frame (max 4)
  std::vector<std::string> object_categories;  // target categories to draw from
};

// Half-open frame interval [start, end) during which construction is truth.
struct SimSpan {
  std::int64_t start = 0;
  std::int64_t end = 0;
  SpanProfile profile;
};

// Occasional multi-frame dropouts of all construction evidence.
struct BurstDrop {
  double prob = 0.0;  // per-frame chance of starting a burst
  int max_len = 0;    // burst length is uniform in [1, max_len]
};

struct SimConfig {
  std::int64_t n_frames = 0;
  std::vector<SimSpan> spans;       // non-overlapping, inside [0, n_frames)
  double miss_rate = 0.0;           // per-detection chance of being dropped
  double fp_rate = 0.0;             // per-frame chance of one spurious target detection
  double clutter_rate = 0.0;        // per-frame chance of 1..3 null/unknown detections
  double ocr_garble_rate = 0.0;     // per-character corruption chance for sign texts
  BurstDrop burst;
  std::uint64_t seed = 0;
};

// JSON codec for simulator configs.  Throws ConfigError on invalid values
// (overlapping spans, rates outside [0, 1], profile counts over the canvas
// capacity), IoError when the file cannot be read.
SimConfig parse_sim_config(const std::string& json_text);
SimConfig load_sim_config(const std::string& path);

// Per-character corruption: each character independently survives, is
// deleted, or is substituted with a different character.  rate 0 is the
// identity; rate 1 leaves no original character in place.
std::string garble_text(std::string_view text, double rate, std::uint64_t seed);

struct SimOutput {
  std::vector<FrameRecord> frames;
  std::vector<bool> truth;  // one entry per frame
};

// Deterministic synthetic stream generator.  Output depends only on the two
// configs: every random draw is keyed on (seed, channel, frame, slot) via a
// counter-based generator, so results are identical across platforms and
// independent of evaluation order.  With all noise rates at zero, every
// in-span frame carries exactly the profiled evidence (confidences inside
// the vocabulary bands, sign texts verbatim from the dictionary) and every
// out-of-span frame is empty.
SimOutput generate_stream(const SimConfig& sim, const PipelineConfig& pipeline);

}  // namespace sitewatch
