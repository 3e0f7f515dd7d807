#include "sitewatch/eval.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sitewatch/errors.hpp"
#include "sitewatch/voter.hpp"

namespace sitewatch {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Half-up rounding of the fraction 10 * num / den, in pure integers.
// Callers keep num and den non-negative and den > 0.
long long round_tenths(long long num, long long den) {
  return (20 * num + den) / (2 * den);
}

std::string format_tenths(long long tenths) {
  std::ostringstream out;
  out << tenths / 10 << '.' << tenths % 10;
  return out.str();
}

std::string format_hundredths(long long hundredths) {
  std::ostringstream out;
  out << hundredths / 100 << '.';
  const long long frac = hundredths % 100;
  out << frac / 10 << frac % 10;
  return out.str();
}

std::string cell_name(int distance_m, int angle_deg) {
  return std::to_string(distance_m) + "m/" + std::to_string(angle_deg) + "deg";
}

std::string format_fixed6(double v) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(6);
  out << v;
  return out.str();
}

}  // namespace

EvalPoint parse_eval_point(std::string_view line) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError("capture point is not valid JSON (byte " + std::to_string(e.byte) + ")");
  }
  if (!doc.is_object()) throw ValidationError("capture point must be a JSON object");

  auto get_int = [&](const char* key) {
    if (!doc.contains(key) || !doc.at(key).is_number_integer()) {
      throw ValidationError(std::string("capture point: missing integer field '") + key + "'");
    }
    return doc.at(key).get<int>();
  };

  EvalPoint p;
  p.site_id = get_int("site_id");
  if (p.site_id < 1 || p.site_id > 7) {
    throw ValidationError("capture point: site_id must be in 1..7");
  }
  p.angle_deg = get_int("angle_deg");
  static constexpr int kAngles[] = {0, 15, 30, 45, 60, 75};
  if (std::find(std::begin(kAngles), std::end(kAngles), p.angle_deg) == std::end(kAngles)) {
    throw ValidationError("capture point: angle_deg must be one of 0, 15, 30, 45, 60, 75");
  }
  p.distance_m = get_int("distance_m");
  static constexpr int kDistances[] = {2, 4, 6, 8, 10};
  if (std::find(std::begin(kDistances), std::end(kDistances), p.distance_m) ==
      std::end(kDistances)) {
    throw ValidationError("capture point: distance_m must be one of 2, 4, 6, 8, 10");
  }
  if (!doc.contains("success") || !doc.at("success").is_boolean()) {
    throw ValidationError("capture point: missing boolean field 'success'");
  }
  p.success = doc.at("success").get<bool>();
  return p;
}

std::string serialize_eval_point(const EvalPoint& point) {
  ordered_json doc;
  doc["site_id"] = point.site_id;
  doc["angle_deg"] = point.angle_deg;
  doc["distance_m"] = point.distance_m;
  doc["success"] = point.success;
  return doc.dump();
}

int round_rate(long long successes, long long total) {
  if (total <= 0) throw EvalError("rate undefined: total is 0");
  if (successes < 0 || successes > total) {
    throw EvalError("rate undefined: successes outside [0, total]");
  }
  return static_cast<int>((200 * successes + total) / (2 * total));
}

GridReport build_grid_report(const std::vector<EvalPoint>& points) {
  if (points.empty()) throw EvalError("grid: no capture points");

  std::set<int> dist_set, angle_set;
  for (const EvalPoint& p : points) {
    dist_set.insert(p.distance_m);
    angle_set.insert(p.angle_deg);
  }

  GridReport rep;
  rep.distances_m.assign(dist_set.begin(), dist_set.end());
  rep.angles_deg.assign(angle_set.begin(), angle_set.end());
  const std::size_t nd = rep.distances_m.size();
  const std::size_t na = rep.angles_deg.size();

  auto row_of = [&](int d) {
    return static_cast<std::size_t>(
        std::find(rep.distances_m.begin(), rep.distances_m.end(), d) -
        rep.distances_m.begin());
  };
  auto col_of = [&](int a) {
    return static_cast<std::size_t>(
        std::find(rep.angles_deg.begin(), rep.angles_deg.end(), a) -
        rep.angles_deg.begin());
  };

  std::vector<std::vector<long long>> count(nd, std::vector<long long>(na, 0));
  rep.cell_successes.assign(nd, std::vector<int>(na, 0));
  for (const EvalPoint& p : points) {
    const std::size_t r = row_of(p.distance_m);
    const std::size_t c = col_of(p.angle_deg);
    ++count[r][c];
    if (p.success) ++rep.cell_successes[r][c];
  }

  long long per_cell = 0;
  for (const auto& row : count) {
    for (long long c : row) per_cell = std::max(per_cell, c);
  }
  std::string uneven;
  for (std::size_t r = 0; r < nd; ++r) {
    for (std::size_t c = 0; c < na; ++c) {
      if (count[r][c] != per_cell) {
        if (!uneven.empty()) uneven += ", ";
        uneven += cell_name(rep.distances_m[r], rep.angles_deg[c]) + " has " +
                  std::to_string(count[r][c]) + " of " + std::to_string(per_cell);
      }
    }
  }
  if (!uneven.empty()) throw EvalError("grid is not balanced: " + uneven);
  rep.points_per_cell = static_cast<int>(per_cell);

  rep.cell_percent.assign(nd, std::vector<int>(na, 0));
  for (std::size_t r = 0; r < nd; ++r) {
    for (std::size_t c = 0; c < na; ++c) {
      rep.cell_percent[r][c] = round_rate(rep.cell_successes[r][c], per_cell);
    }
  }

  for (std::size_t r = 0; r < nd; ++r) {
    long long cell_sum = 0, success_sum = 0;
    for (std::size_t c = 0; c < na; ++c) {
      cell_sum += rep.cell_percent[r][c];
      success_sum += rep.cell_successes[r][c];
    }
    rep.row_mean_cells_tenths.push_back(
        static_cast<int>(round_tenths(cell_sum, static_cast<long long>(na))));
    rep.row_mean_exact_tenths.push_back(static_cast<int>(
        round_tenths(100 * success_sum, per_cell * static_cast<long long>(na))));
    rep.overall_successes += success_sum;
  }
  for (std::size_t c = 0; c < na; ++c) {
    long long cell_sum = 0, success_sum = 0;
    for (std::size_t r = 0; r < nd; ++r) {
      cell_sum += rep.cell_percent[r][c];
      success_sum += rep.cell_successes[r][c];
    }
    rep.col_mean_cells_tenths.push_back(
        static_cast<int>(round_tenths(cell_sum, static_cast<long long>(nd))));
    rep.col_mean_exact_tenths.push_back(static_cast<int>(
        round_tenths(100 * success_sum, per_cell * static_cast<long long>(nd))));
  }
  rep.overall_total = per_cell * static_cast<long long>(nd) * static_cast<long long>(na);
  return rep;
}

std::string grid_report_csv(const GridReport& report) {
  std::ostringstream out;
  out << "distance_m/angle_deg";
  for (int a : report.angles_deg) out << ',' << a;
  out << ",mean_cells,mean_exact\n";

  for (std::size_t r = 0; r < report.distances_m.size(); ++r) {
    out << report.distances_m[r];
    for (std::size_t c = 0; c < report.angles_deg.size(); ++c) {
      out << ',' << report.cell_percent[r][c];
    }
    out << ',' << format_tenths(report.row_mean_cells_tenths[r]);
    out << ',' << format_tenths(report.row_mean_exact_tenths[r]);
    out << '\n';
  }

  out << "mean_cells";
  for (std::size_t c = 0; c < report.angles_deg.size(); ++c) {
    out << ',' << format_tenths(report.col_mean_cells_tenths[c]);
  }
  out << ",,\n";
  out << "mean_exact";
  for (std::size_t c = 0; c < report.angles_deg.size(); ++c) {
    out << ',' << format_tenths(report.col_mean_exact_tenths[c]);
  }
  out << ",,\n";

  const long long hundredths =
      (20000 * report.overall_successes + report.overall_total) /
      (2 * report.overall_total);
  out << "overall," << report.overall_successes << '/' << report.overall_total << ','
      << format_hundredths(hundredths) << '%';
  for (std::size_t c = 2; c < report.angles_deg.size() + 2; ++c) out << ',';
  out << '\n';
  return out.str();
}

std::string grid_report_json(const GridReport& report) {
  ordered_json doc;
  doc["distances_m"] = report.distances_m;
  doc["angles_deg"] = report.angles_deg;
  doc["points_per_cell"] = report.points_per_cell;
  doc["cells"] = {{"successes", report.cell_successes},
                  {"percent", report.cell_percent}};
  auto tenths_array = [](const std::vector<int>& tenths) {
    json arr = json::array();
    for (int t : tenths) arr.push_back(static_cast<double>(t) / 10.0);
    return arr;
  };
  doc["row_means"] = {{"cells", tenths_array(report.row_mean_cells_tenths)},
                      {"exact", tenths_array(report.row_mean_exact_tenths)}};
  doc["col_means"] = {{"cells", tenths_array(report.col_mean_cells_tenths)},
                      {"exact", tenths_array(report.col_mean_exact_tenths)}};
  const long long hundredths =
      (20000 * report.overall_successes + report.overall_total) /
      (2 * report.overall_total);
  doc["overall"] = {{"successes", report.overall_successes},
                    {"total", report.overall_total},
                    {"percent", static_cast<double>(hundredths) / 100.0}};
  return doc.dump();
}

ConfusionMatrix build_confusion(const std::vector<std::pair<bool, bool>>& pairs) {
  if (pairs.empty()) throw EvalError("confusion: no outcome pairs");
  ConfusionMatrix m;
  for (const auto& [truth, predicted] : pairs) {
    if (truth) {
      predicted ? ++m.tp : ++m.fn;
    } else {
      predicted ? ++m.fp : ++m.tn;
    }
  }
  return m;
}

DynamicMetrics derive_metrics(const ConfusionMatrix& matrix) {
  const long long total = matrix.total();
  if (total <= 0) throw EvalError("metrics undefined: empty confusion matrix");
  DynamicMetrics m;
  m.accuracy = static_cast<double>(matrix.tp + matrix.tn) / static_cast<double>(total);
  m.error_rate = 1.0 - m.accuracy;
  if (matrix.tp + matrix.fp > 0) {
    m.precision =
        static_cast<double>(matrix.tp) / static_cast<double>(matrix.tp + matrix.fp);
  }
  if (matrix.tp + matrix.fn > 0) {
    m.recall =
        static_cast<double>(matrix.tp) / static_cast<double>(matrix.tp + matrix.fn);
  }
  if (2 * matrix.tp + matrix.fp + matrix.fn > 0) {
    m.f1 = static_cast<double>(2 * matrix.tp) /
           static_cast<double>(2 * matrix.tp + matrix.fp + matrix.fn);
  }
  if (matrix.tn + matrix.fp > 0) {
    m.specificity =
        static_cast<double>(matrix.tn) / static_cast<double>(matrix.tn + matrix.fp);
  }
  return m;
}

std::string dynamic_report_json(const ConfusionMatrix& matrix) {
  const DynamicMetrics m = derive_metrics(matrix);
  ordered_json doc;
  doc["confusion"] = {{"tp", matrix.tp},
                      {"fn", matrix.fn},
                      {"fp", matrix.fp},
                      {"tn", matrix.tn},
                      {"total", matrix.total()}};
  auto opt = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  doc["metrics"] = {{"accuracy", m.accuracy},   {"error_rate", m.error_rate},
                    {"precision", opt(m.precision)}, {"recall", opt(m.recall)},
                    {"f1", opt(m.f1)},          {"specificity", opt(m.specificity)}};
  return doc.dump();
}

std::map<int, DynamicMetrics> sweep_window(const std::vector<bool>& truth,
                                           const std::vector<bool>& raw,
                                           const std::vector<int>& ks) {
  if (truth.size() != raw.size()) {
    throw EvalError("sweep: truth and raw streams differ in length (" +
                    std::to_string(truth.size()) + " vs " + std::to_string(raw.size()) +
                    ")");
  }
  if (truth.empty()) throw EvalError("sweep: empty streams");
  std::map<int, DynamicMetrics> out;
  for (int k : ks) {
    const std::vector<bool> smoothed = smooth_stream(raw, k);
    std::vector<std::pair<bool, bool>> pairs;
    pairs.reserve(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
      pairs.emplace_back(truth[i], smoothed[i]);
    }
    out[k] = derive_metrics(build_confusion(pairs));
  }
  return out;
}

std::string sweep_csv(const std::map<int, DynamicMetrics>& rows) {
  std::ostringstream out;
  out << "k,accuracy,error_rate,precision,recall,f1,specificity\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? format_fixed6(*v) : std::string();
  };
  for (const auto& [k, m] : rows) {
    out << k << ',' << format_fixed6(m.accuracy) << ',' << format_fixed6(m.error_rate)
        << ',' << opt(m.precision) << ',' << opt(m.recall) << ',' << opt(m.f1) << ','
        << opt(m.specificity) << '\n';
  }
  return out.str();
}

}  // namespace sitewatch
