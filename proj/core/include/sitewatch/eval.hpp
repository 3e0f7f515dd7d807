#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sitewatch {

// One static capture outcome: did the pipeline call construction at this
// site/angle/distance combination.
struct EvalPoint {
  int site_id = 0;      // 1..7
  int angle_deg = 0;    // {0, 15, 30, 45, 60, 75}
  int distance_m = 0;   // {2, 4, 6, 8, 10}
  bool success = false;

  bool operator==(const EvalPoint&) const = default;
};

// JSONL codecs for capture outcomes.
EvalPoint parse_eval_point(std::string_view line);
std::string serialize_eval_point(const EvalPoint& point);

// Integer percent with exact half-up rounding; round_rate(6, 7) == 86.
// Throws EvalError when total is 0.
int round_rate(long long successes, long long total);

// Detection-rate grid over distance rows and angle columns.  Mean columns
// come in two flavours: *_cells averages the rounded integer cell percents,
// *_exact averages the raw per-row (or per-column) fractions.  Both are
// half-up-rounded to one decimal and stored in tenths of a percent so no
// floating point touches the reported numbers.
struct GridReport {
  std::vector<int> distances_m;                 // sorted ascending
  std::vector<int> angles_deg;                  // sorted ascending
  int points_per_cell = 0;
  std::vector<std::vector<int>> cell_successes;  // [distance][angle]
  std::vector<std::vector<int>> cell_percent;    // rounded integer percents
  std::vector<int> row_mean_cells_tenths;
  std::vector<int> row_mean_exact_tenths;
  std::vector<int> col_mean_cells_tenths;
  std::vector<int> col_mean_exact_tenths;
  long long overall_successes = 0;
  long long overall_total = 0;

  double overall_percent() const {
    return 100.0 * static_cast<double>(overall_successes) /
           static_cast<double>(overall_total);
  }
};

// Builds the grid.  The design must be full and balanced: every
// distance/angle cell present with the same number of points.  Ragged or
// empty designs raise EvalError listing the offending cells.
GridReport build_grid_report(const std::vector<EvalPoint>& points);

// Renderings of the grid (stable byte-for-byte across runs).
std::string grid_report_csv(const GridReport& report);
std::string grid_report_json(const GridReport& report);

struct ConfusionMatrix {
  long long tp = 0;
  long long fn = 0;
  long long fp = 0;
  long long tn = 0;

  long long total() const { return tp + fn + fp + tn; }

  bool operator==(const ConfusionMatrix&) const = default;
};

// Tallies (truth, predicted) pairs.  Empty input raises EvalError.
ConfusionMatrix build_confusion(const std::vector<std::pair<bool, bool>>& pairs);

// Ratios derived from a confusion matrix.  A metric whose denominator is 0
// is left unset; the rest are still reported.
struct DynamicMetrics {
  double accuracy = 0.0;
  double error_rate = 0.0;  // 1 - accuracy
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::optional<double> specificity;
};

// Throws EvalError when the matrix is empty.
DynamicMetrics derive_metrics(const ConfusionMatrix& matrix);

std::string dynamic_report_json(const ConfusionMatrix& matrix);

// Re-smooths one raw verdict stream at several window sizes and scores each
// against truth.  Lengths must agree and ks must be >= 1.
std::map<int, DynamicMetrics> sweep_window(const std::vector<bool>& truth,
                                           const std::vector<bool>& raw,
                                           const std::vector<int>& ks);

std::string sweep_csv(const std::map<int, DynamicMetrics>& rows);

}  // namespace sitewatch
