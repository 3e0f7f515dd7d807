#include "sitewatch/decision.hpp"

#include <json.hpp>

#include "sitewatch/sign.hpp"

namespace sitewatch {

const char* to_string(Rule rule) {
  switch (rule) {
    case Rule::Scaffold: return "scaffold";
    case Rule::Objects: return "objects";
    case Rule::Sign: return "sign";
  }
  return "?";
}

Decision evaluate_counts(const EvidenceCounts& counts, const PipelineConfig& config) {
  Decision d;
  d.counts = counts;
  if (config.scaffold_min > 0 && counts.scaffold_count >= config.scaffold_min) {
    d.fired.push_back(Rule::Scaffold);
  }
  if (config.objects_min > 0 && counts.object_count >= config.objects_min) {
    d.fired.push_back(Rule::Objects);
  }
  if (config.signs_min > 0 && counts.sign_match_count >= config.signs_min) {
    d.fired.push_back(Rule::Sign);
  }
  d.construction = !d.fired.empty();
  return d;
}

Decision evaluate_frame(const FrameRecord& frame, const PipelineConfig& config) {
  EvidenceCounts counts = tally_detections(frame, config.vocabulary, config.dedup_iou);
  counts.sign_match_count =
      count_sign_matches(frame, config.sign_dictionary, config.dice());
  return evaluate_counts(counts, config);
}

std::vector<std::pair<std::int64_t, Decision>> evaluate_stream(
    std::span<const FrameRecord> frames, const PipelineConfig& config) {
  std::vector<std::pair<std::int64_t, Decision>> out;
  out.reserve(frames.size());
  for (const FrameRecord& frame : frames) {
    out.emplace_back(frame.frame_id, evaluate_frame(frame, config));
  }
  return out;
}

std::string serialize_decision(std::int64_t frame_id, bool construction,
                               const Decision& evidence) {
  nlohmann::ordered_json doc;
  doc["frame_id"] = frame_id;
  doc["construction"] = construction;
  doc["rules"] = nlohmann::json::array();
  for (Rule r : evidence.fired) doc["rules"].push_back(to_string(r));
  doc["counts"] = {
      {"scaffold", evidence.counts.scaffold_count},
      {"objects", evidence.counts.object_count},
      {"signs", evidence.counts.sign_match_count},
  };
  return doc.dump();
}

}  // namespace sitewatch
