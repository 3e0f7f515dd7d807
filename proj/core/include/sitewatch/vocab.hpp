#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sitewatch/types.hpp"

namespace sitewatch {

// Role a canonical category plays in the evidence counts.
enum class CategoryKind {
  TargetObject,        // counts toward the object pipeline
  NullClass,           // recognized but always discarded
  ScaffoldVertical,    // counts toward the scaffold pipeline
  ScaffoldHorizontal,  // counts toward the scaffold pipeline
};

const char* to_string(CategoryKind kind);

// Inclusive confidence band.  Detections outside [lo, hi] are dropped.
struct ConfidenceBand {
  double lo = 0.0;
  double hi = 1.0;

  bool contains(double confidence) const {
    return confidence >= lo && confidence <= hi;
  }

  bool operator==(const ConfidenceBand&) const = default;
};

// One canonical category with the open-vocabulary descriptors that map to it.
struct Category {
  std::string name;
  CategoryKind kind = CategoryKind::TargetObject;
  std::vector<std::string> descriptors;
  ConfidenceBand band;
};

// Casefolds (ASCII), trims leading/trailing whitespace and collapses internal
// whitespace runs to a single space.  Used for descriptor lookup.
std::string normalize_descriptor(std::string_view raw);

// Descriptor table indexed by normalized descriptor.  Lookup is exact-match
// after normalization; anything else is unknown.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Throws ConfigError on duplicate normalized descriptors (within or across
  // categories), duplicate category names, empty names or inverted bands.
  explicit Vocabulary(std::vector<Category> categories);

  // nullptr means the label is unknown to the vocabulary.
  const Category* canonicalize(std::string_view raw_label) const;

  const std::vector<Category>& categories() const { return categories_; }
  const Category* find_category(std::string_view name) const;

 private:
  std::vector<Category> categories_;
  std::unordered_map<std::string, std::size_t> by_descriptor_;
};

// True when the detection's label canonicalizes and its confidence falls in
// the category's band.  Unknown labels are always rejected here; callers that
// want pass-through behaviour check canonicalize() first.
bool within_band(const Detection& d, const Vocabulary& vocab);

// Greedy per-category suppression of near-duplicate boxes.  Candidates are
// visited by descending confidence (ties keep input order); a candidate is
// dropped when its IoU with an already kept box of the same canonical
// category strictly exceeds iou_threshold.  Survivors keep input order.
// Detections with unknown labels are never suppressed.
std::vector<Detection> dedup_detections(const std::vector<Detection>& detections,
                                        const Vocabulary& vocab,
                                        double iou_threshold);

// Per-frame evidence extracted from the detector outputs.
struct EvidenceCounts {
  int scaffold_count = 0;
  int object_count = 0;
  std::map<std::string, int> object_breakdown;  // per target category
  int sign_match_count = 0;

  bool operator==(const EvidenceCounts&) const = default;
};

// Runs the full detection-side funnel for one frame: canonicalize, discard
// unknowns and null classes, apply bands, dedup, then count.  Does not touch
// texts; sign_match_count is left at 0.
EvidenceCounts tally_detections(const FrameRecord& frame, const Vocabulary& vocab,
                                double iou_threshold);

}  // namespace sitewatch
