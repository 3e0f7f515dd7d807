#pragma once

#include <random>
#include <string>
#include <vector>

#include "sitewatch/types.hpp"

namespace sitewatch::testing {

inline Detection det(std::string label, double confidence, double x = 0, double y = 0,
                     double w = 10, double h = 10) {
  return Detection{std::move(label), confidence, BoundingBox{x, y, w, h}};
}

inline TextObservation txt(std::string text, double confidence = 0.9, double x = 0,
                           double y = 0, double w = 100, double h = 30) {
  return TextObservation{std::move(text), confidence, BoundingBox{x, y, w, h}};
}

inline FrameRecord frame_of(std::vector<Detection> detections,
                            std::vector<TextObservation> texts = {},
                            std::int64_t id = 0) {
  FrameRecord f;
  f.frame_id = id;
  f.timestamp_ms = id * 33;
  f.detections = std::move(detections);
  f.texts = std::move(texts);
  return f;
}

// Boxes on a coarse lattice so random frames actually produce overlaps.
inline BoundingBox lattice_box(std::mt19937& gen) {
  std::uniform_int_distribution<int> cell(0, 3);
  std::uniform_int_distribution<int> size(0, 1);
  const double x = 20.0 * cell(gen);
  const double y = 20.0 * cell(gen);
  const double w = size(gen) ? 24.0 : 16.0;
  const double h = size(gen) ? 24.0 : 16.0;
  return BoundingBox{x, y, w, h};
}

}  // namespace sitewatch::testing
