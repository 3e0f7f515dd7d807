#include "sitewatch/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

#include <json.hpp>

#include "sitewatch/errors.hpp"

namespace sitewatch {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

double number_field(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.contains(key)) throw ValidationError(ctx + ": missing field '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(ctx + ": field '" + key + "' must be a number");
  return v.get<double>();
}

std::int64_t int_field(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.contains(key)) throw ValidationError(ctx + ": missing field '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ValidationError(ctx + ": field '" + key + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

std::string string_field(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.contains(key)) throw ValidationError(ctx + ": missing field '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_string()) throw ValidationError(ctx + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

BoundingBox parse_box(const json& obj, const std::string& ctx) {
  if (!obj.contains("box")) throw ValidationError(ctx + ": missing field 'box'");
  const json& b = obj.at("box");
  if (!b.is_array() || b.size() != 4) {
    throw ValidationError(ctx + ": 'box' must be [x, y, w, h]");
  }
  std::array<double, 4> v{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!b[i].is_number()) throw ValidationError(ctx + ": 'box' entries must be numbers");
    v[i] = b[i].get<double>();
  }
  BoundingBox box{v[0], v[1], v[2], v[3]};
  if (box.x < 0.0 || box.y < 0.0) throw ValidationError(ctx + ": box origin must be >= 0");
  if (box.w <= 0.0 || box.h <= 0.0) throw ValidationError(ctx + ": box w and h must be > 0");
  return box;
}

double parse_confidence(const json& obj, const std::string& ctx) {
  const double c = number_field(obj, "confidence", ctx);
  if (c < 0.0 || c > 1.0) throw ValidationError(ctx + ": confidence must be in [0, 1]");
  return c;
}

GroundTruth parse_truth(const json& jt) {
  const std::string ctx = "truth";
  if (!jt.is_object()) throw ValidationError(ctx + ": must be an object");
  if (!jt.contains("construction") || !jt.at("construction").is_boolean()) {
    throw ValidationError(ctx + ": missing boolean field 'construction'");
  }
  GroundTruth truth;
  truth.construction = jt.at("construction").get<bool>();

  const bool has_site = jt.contains("site_id");
  const bool has_angle = jt.contains("angle_deg");
  const bool has_dist = jt.contains("distance_m");
  if (has_site != has_angle || has_site != has_dist) {
    throw ValidationError(
        ctx + ": site_id, angle_deg and distance_m must be present together");
  }
  if (!has_site) return truth;

  const int site = static_cast<int>(int_field(jt, "site_id", ctx));
  if (site < 1 || site > 7) throw ValidationError(ctx + ": site_id must be in 1..7");
  const int angle = static_cast<int>(int_field(jt, "angle_deg", ctx));
  static constexpr int kAngles[] = {0, 15, 30, 45, 60, 75};
  if (std::find(std::begin(kAngles), std::end(kAngles), angle) == std::end(kAngles)) {
    throw ValidationError(ctx + ": angle_deg must be one of 0, 15, 30, 45, 60, 75");
  }
  const int dist = static_cast<int>(int_field(jt, "distance_m", ctx));
  static constexpr int kDistances[] = {2, 4, 6, 8, 10};
  if (std::find(std::begin(kDistances), std::end(kDistances), dist) == std::end(kDistances)) {
    throw ValidationError(ctx + ": distance_m must be one of 2, 4, 6, 8, 10");
  }
  truth.site_id = site;
  truth.angle_deg = angle;
  truth.distance_m = dist;
  return truth;
}

json box_to_json(const BoundingBox& b) {
  return json::array({b.x, b.y, b.w, b.h});
}

}  // namespace

FrameRecord parse_frame(std::string_view line) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError("frame record is not valid JSON (byte " +
                     std::to_string(e.byte) + ")");
  }
  if (!doc.is_object()) throw ValidationError("frame record must be a JSON object");

  FrameRecord frame;
  frame.frame_id = int_field(doc, "frame_id", "frame");
  frame.timestamp_ms = int_field(doc, "timestamp_ms", "frame");

  if (doc.contains("detections")) {
    const json& arr = doc.at("detections");
    if (!arr.is_array()) throw ValidationError("frame: 'detections' must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ctx = "detections[" + std::to_string(i) + "]";
      const json& jd = arr[i];
      if (!jd.is_object()) throw ValidationError(ctx + ": must be an object");
      Detection d;
      d.label = string_field(jd, "label", ctx);
      if (d.label.empty()) throw ValidationError(ctx + ": label must be non-empty");
      d.confidence = parse_confidence(jd, ctx);
      d.box = parse_box(jd, ctx);
      frame.detections.push_back(std::move(d));
    }
  }

  if (doc.contains("texts")) {
    const json& arr = doc.at("texts");
    if (!arr.is_array()) throw ValidationError("frame: 'texts' must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ctx = "texts[" + std::to_string(i) + "]";
      const json& jt = arr[i];
      if (!jt.is_object()) throw ValidationError(ctx + ": must be an object");
      TextObservation t;
      t.text = string_field(jt, "string", ctx);
      t.confidence = parse_confidence(jt, ctx);
      t.box = parse_box(jt, ctx);
      frame.texts.push_back(std::move(t));
    }
  }

  if (doc.contains("truth") && !doc.at("truth").is_null()) {
    frame.truth = parse_truth(doc.at("truth"));
  }
  return frame;
}

std::string serialize_frame(const FrameRecord& frame) {
  ordered_json doc;
  doc["frame_id"] = frame.frame_id;
  doc["timestamp_ms"] = frame.timestamp_ms;
  doc["detections"] = json::array();
  for (const Detection& d : frame.detections) {
    ordered_json jd;
    jd["label"] = d.label;
    jd["confidence"] = d.confidence;
    jd["box"] = box_to_json(d.box);
    doc["detections"].push_back(std::move(jd));
  }
  doc["texts"] = json::array();
  for (const TextObservation& t : frame.texts) {
    ordered_json jt;
    jt["string"] = t.text;
    jt["confidence"] = t.confidence;
    jt["box"] = box_to_json(t.box);
    doc["texts"].push_back(std::move(jt));
  }
  if (frame.truth) {
    ordered_json jt;
    jt["construction"] = frame.truth->construction;
    if (frame.truth->has_capture_point()) {
      jt["site_id"] = *frame.truth->site_id;
      jt["angle_deg"] = *frame.truth->angle_deg;
      jt["distance_m"] = *frame.truth->distance_m;
    }
    doc["truth"] = std::move(jt);
  }
  return doc.dump();
}

std::optional<FrameRecord> FrameReader::next() {
  std::string line;
  while (std::getline(*in_, line)) {
    ++line_number_;
    if (is_blank(line)) continue;
    FrameRecord frame;
    try {
      frame = parse_frame(line);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_number_) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_number_) + ": " + e.what());
    }
    if (last_id_ && frame.frame_id <= *last_id_) {
      throw StreamError("line " + std::to_string(line_number_) + ": frame_id " +
                        std::to_string(frame.frame_id) +
                        " does not increase over previous frame_id " +
                        std::to_string(*last_id_));
    }
    last_id_ = frame.frame_id;
    return frame;
  }
  if (in_->bad()) throw IoError("read failure on frame stream");
  return std::nullopt;
}

std::vector<FrameRecord> read_frames(std::istream& in) {
  FrameReader reader(in);
  std::vector<FrameRecord> frames;
  while (auto frame = reader.next()) frames.push_back(std::move(*frame));
  return frames;
}

}  // namespace sitewatch
