#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sitewatch {

// Axis-aligned box in pixel coordinates, top-left origin.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }

  bool operator==(const BoundingBox&) const = default;
};

// Intersection-over-union of two boxes.  Degenerate (zero-area) boxes give 0.
double iou(const BoundingBox& a, const BoundingBox& b);

// One detector output: free-form label plus confidence in [0, 1].
struct Detection {
  std::string label;
  double confidence = 0.0;
  BoundingBox box;

  bool operator==(const Detection&) const = default;
};

// One OCR output: raw recognized text plus confidence in [0, 1].
struct TextObservation {
  std::string text;
  double confidence = 0.0;
  BoundingBox box;

  bool operator==(const TextObservation&) const = default;
};

// Optional annotation carried by fixture streams.  The capture triple
// (site_id, angle_deg, distance_m) is all-or-nothing: either every field
// is present or none is.
struct GroundTruth {
  bool construction = false;
  std::optional<int> site_id;      // 1..7
  std::optional<int> angle_deg;    // {0, 15, 30, 45, 60, 75}
  std::optional<int> distance_m;   // {2, 4, 6, 8, 10}

  bool has_capture_point() const { return site_id.has_value(); }

  bool operator==(const GroundTruth&) const = default;
};

// Everything observed for a single video frame.
struct FrameRecord {
  std::int64_t frame_id = 0;
  std::int64_t timestamp_ms = 0;
  std::vector<Detection> detections;
  std::vector<TextObservation> texts;
  std::optional<GroundTruth> truth;

  bool operator==(const FrameRecord&) const = default;
};

}  // namespace sitewatch
