#pragma once

#include <string>

#include "sitewatch/sign.hpp"
#include "sitewatch/vocab.hpp"

namespace sitewatch {

// Everything the decision pipeline needs.  Defaults reproduce the shipped
// deployment profile; see default_config().
struct PipelineConfig {
  Vocabulary vocabulary;
  SignDictionary sign_dictionary;

  int dice_ngram = 2;
  double dice_threshold = 0.8;

  // A pipeline fires when its count reaches the minimum.  A minimum of 0
  // disables that pipeline outright.
  int scaffold_min = 5;
  int objects_min = 3;
  int signs_min = 1;

  double dedup_iou = 0.8;
  int voter_k = 50;

  DiceParams dice() const { return DiceParams{dice_ngram, dice_threshold}; }
};

// Built-in vocabulary, bands and sign dictionary.
PipelineConfig default_config();

// Parses a JSON config document.  Empty or whitespace-only text yields the
// defaults.  Recognized top-level sections: "vocabulary", "sign_dictionary",
// "dice", "thresholds", "voter".  A present section replaces the built-in
// content of that section; absent sections keep their defaults.  Unknown
// keys are ignored.  Throws ConfigError on malformed JSON or invalid values.
PipelineConfig parse_config(const std::string& json_text);

// parse_config over the contents of a file.  Throws IoError when the file
// cannot be read.
PipelineConfig load_config(const std::string& path);

}  // namespace sitewatch
