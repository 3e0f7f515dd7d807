#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sitewatch/types.hpp"

namespace sitewatch {

// Decodes one JSONL frame record.  Throws ParseError for broken JSON and
// ValidationError for well-formed JSON that violates a field invariant;
// messages name the offending field.  Unknown fields are ignored so streams
// from newer producers still load.
FrameRecord parse_frame(std::string_view line);

// Single-line JSON encoding; parse_frame(serialize_frame(f)) == f.
std::string serialize_frame(const FrameRecord& frame);

// Pull-based reader over a JSONL stream.  Blank lines are skipped.  Enforces
// strictly increasing frame_id across the stream; violations raise
// StreamError naming both ids and the line number.
class FrameReader {
 public:
  explicit FrameReader(std::istream& in) : in_(&in) {}

  // nullopt at end of stream.
  std::optional<FrameRecord> next();

  std::int64_t line_number() const { return line_number_; }

 private:
  std::istream* in_;
  std::int64_t line_number_ = 0;
  std::optional<std::int64_t> last_id_;
};

// Drains a stream into memory.
std::vector<FrameRecord> read_frames(std::istream& in);

}  // namespace sitewatch
