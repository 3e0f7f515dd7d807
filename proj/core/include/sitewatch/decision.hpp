#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sitewatch/config.hpp"
#include "sitewatch/types.hpp"
#include "sitewatch/vocab.hpp"

namespace sitewatch {

enum class Rule {
  Scaffold,  // scaffold_count >= scaffold_min
  Objects,   // object_count >= objects_min
  Sign,      // sign_match_count >= signs_min
};

const char* to_string(Rule rule);

// Per-frame verdict.  construction is the OR of the fired rules; fired is
// always listed in Scaffold, Objects, Sign order.
struct Decision {
  bool construction = false;
  std::vector<Rule> fired;
  EvidenceCounts counts;

  bool operator==(const Decision&) const = default;
};

// Applies the three threshold rules to pre-computed evidence.  Rules never
// pool counts: four cones plus two scaffold poles fire nothing under the
// default minimums.
Decision evaluate_counts(const EvidenceCounts& counts, const PipelineConfig& config);

// Full per-frame path: tally detections, count sign matches, apply rules.
Decision evaluate_frame(const FrameRecord& frame, const PipelineConfig& config);

// evaluate_frame over an ordered batch, preserving order.
std::vector<std::pair<std::int64_t, Decision>> evaluate_stream(
    std::span<const FrameRecord> frames, const PipelineConfig& config);

// Single-line JSON encoding of a verdict.  The construction flag is passed
// separately so callers can emit a smoothed verdict next to raw evidence.
std::string serialize_decision(std::int64_t frame_id, bool construction,
                               const Decision& evidence);

}  // namespace sitewatch
