#pragma once

#include <stdexcept>
#include <string>

namespace sitewatch {

// Error taxonomy used across the library.  The CLI maps these onto exit
// codes: ConfigError means the caller gave us a bad configuration or bad
// flags (exit 2); everything else is a data or I/O problem (exit 1).

// Malformed input that could not be decoded at all (bad JSON, bad JSONL).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input decoded fine but violates a documented invariant (range, domain,
// missing field).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ordering or framing problems while consuming a record stream.
struct StreamError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unusable configuration: contradictory thresholds, unknown enums, empty
// dictionaries where one is required, and so on.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation requested on data that cannot support it (empty sets, ragged
// grids, zero denominators).
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failures (missing file, unreadable file).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sitewatch
