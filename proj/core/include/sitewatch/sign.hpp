#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sitewatch/types.hpp"

namespace sitewatch {

// Casefolds (ASCII) and strips every non-alphanumeric character, spaces
// included.  "Road Work Ahead" and "roadWORK-ahead!" normalize identically.
std::string normalize_text(std::string_view raw);

struct DiceParams {
  int ngram = 2;
  double threshold = 0.8;  // matches must score strictly above this
};

// Sorensen-Dice coefficient over character n-gram multisets of two already
// normalized strings: 2*|A ∩ B| / (|A| + |B|) with multiset intersection.
// Strings shorter than n have no n-grams; then equal strings score 1 and
// unequal strings score 0.
double dice_similarity(std::string_view a, std::string_view b, int n);

// Ordered list of known sign texts.  Entries that collide after
// normalization are dropped, keeping the first occurrence.
class SignDictionary {
 public:
  SignDictionary() = default;
  explicit SignDictionary(std::vector<std::string> entries);

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<std::string>& entries() const { return entries_; }
  const std::vector<std::string>& normalized_entries() const { return normalized_; }

 private:
  std::vector<std::string> entries_;
  std::vector<std::string> normalized_;
};

struct SignMatch {
  std::string entry;   // dictionary entry as configured
  double score = 0.0;  // Dice similarity against the observed text
};

// Best dictionary entry for one piece of text, or nullopt when no entry
// scores strictly above the threshold.  Ties resolve to the entry listed
// first in the dictionary.
std::optional<SignMatch> match_sign(std::string_view raw_text,
                                    const SignDictionary& dictionary,
                                    const DiceParams& params);

// Number of matched sign texts in a frame.  Every text observation is
// matched on its own; when a frame carries two or more texts, their
// concatenation in reading order (top-to-bottom, then left-to-right) is
// tried as one extra candidate so multi-row signs split by the OCR can
// still count.  The extra candidate contributes at most 1.
int count_sign_matches(const FrameRecord& frame, const SignDictionary& dictionary,
                       const DiceParams& params);

}  // namespace sitewatch
