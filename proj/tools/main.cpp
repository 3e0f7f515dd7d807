// Command-line front end: decide, evaluate, sweep, match and simulate.
//
// Exit codes: 0 success, 1 data or I/O problem, 2 usage or config problem.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sitewatch/config.hpp"
#include "sitewatch/decision.hpp"
#include "sitewatch/errors.hpp"
#include "sitewatch/eval.hpp"
#include "sitewatch/ingest.hpp"
#include "sitewatch/sim.hpp"
#include "sitewatch/sign.hpp"
#include "sitewatch/voter.hpp"

namespace {

using namespace sitewatch;

constexpr const char* kDefaultConfigPath = "sitewatch.json";

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open input file: " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  return out;
}

// --config handling: an explicit path must exist; the implicit default path
// is optional and silently falls back to the built-in configuration.
PipelineConfig resolve_config(const std::string& config_path) {
  if (!config_path.empty()) return load_config(config_path);
  if (std::filesystem::exists(kDefaultConfigPath)) return load_config(kDefaultConfigPath);
  return default_config();
}

struct BoolRecord {
  std::int64_t frame_id = 0;
  bool value = false;
};

// Sidecar format: {"frame_id": ..., "construction": ...} per line.
std::vector<BoolRecord> read_bool_records(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<BoolRecord> out;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": invalid JSON");
    }
    if (!doc.is_object() || !doc.contains("frame_id") ||
        !doc.at("frame_id").is_number_integer() || !doc.contains("construction") ||
        !doc.at("construction").is_boolean()) {
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": expected {\"frame_id\", \"construction\"}");
    }
    out.push_back({doc.at("frame_id").get<std::int64_t>(),
                   doc.at("construction").get<bool>()});
  }
  return out;
}

std::string truth_sidecar_path(const std::string& out_path) {
  const std::string suffix = ".jsonl";
  if (out_path.size() > suffix.size() &&
      out_path.compare(out_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return out_path.substr(0, out_path.size() - suffix.size()) + ".truth.jsonl";
  }
  return out_path + ".truth";
}

std::string percent2(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", 100.0 * fraction);
  return buf;
}

struct RunArgs {
  std::string input;
  std::string config;
  std::string out;
  int k_override = 0;  // 0 means "use config"
};

int cmd_run(const RunArgs& args) {
  const PipelineConfig config = resolve_config(args.config);
  const int k = args.k_override > 0 ? args.k_override : config.voter_k;

  std::ifstream file_in;
  std::istream* in = &std::cin;
  if (!args.input.empty() && args.input != "-") {
    file_in = open_input(args.input);
    in = &file_in;
  }
  std::ofstream file_out;
  std::ostream* out = &std::cout;
  if (!args.out.empty() && args.out != "-") {
    file_out = open_output(args.out);
    out = &file_out;
  }

  MajorityVoter voter(k);
  FrameReader reader(*in);
  std::int64_t frames = 0, positives = 0;
  while (auto frame = reader.next()) {
    const Decision decision = evaluate_frame(*frame, config);
    const bool smoothed = voter.push(decision.construction);
    if (smoothed) ++positives;
    *out << serialize_decision(frame->frame_id, smoothed, decision) << '\n';
    ++frames;
  }
  out->flush();

  std::cerr << "frames: " << frames << "  positive: " << positives;
  if (frames > 0) {
    std::cerr << " (" << percent2(static_cast<double>(positives) /
                                  static_cast<double>(frames))
              << ")";
  }
  std::cerr << "  k: " << k << "\n";
  return 0;
}

struct EvalStaticArgs {
  std::string points;
  std::string format = "csv";
  std::string out;
};

int cmd_eval_static(const EvalStaticArgs& args) {
  std::ifstream in = open_input(args.points);
  std::vector<EvalPoint> points;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    try {
      points.push_back(parse_eval_point(line));
    } catch (const ParseError& e) {
      throw ParseError(args.points + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(args.points + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }

  const GridReport report = build_grid_report(points);
  const std::string rendered =
      args.format == "json" ? grid_report_json(report) + "\n" : grid_report_csv(report);
  if (args.out.empty()) {
    std::cout << rendered;
  } else {
    open_output(args.out) << rendered;
  }
  std::cerr << "points: " << points.size() << "  overall: " << report.overall_successes
            << "/" << report.overall_total << "\n";
  return 0;
}

struct EvalDynamicArgs {
  std::string pairs;
  std::string out;
};

int cmd_eval_dynamic(const EvalDynamicArgs& args) {
  std::ifstream in = open_input(args.pairs);
  std::vector<std::pair<bool, bool>> pairs;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw ParseError(args.pairs + ":" + std::to_string(line_no) + ": invalid JSON");
    }
    if (!doc.is_object() || !doc.contains("truth") || !doc.at("truth").is_boolean() ||
        !doc.contains("predicted") || !doc.at("predicted").is_boolean()) {
      throw ValidationError(args.pairs + ":" + std::to_string(line_no) +
                            ": expected {\"truth\", \"predicted\"}");
    }
    pairs.emplace_back(doc.at("truth").get<bool>(), doc.at("predicted").get<bool>());
  }

  const ConfusionMatrix matrix = build_confusion(pairs);
  const DynamicMetrics metrics = derive_metrics(matrix);
  const std::string rendered = dynamic_report_json(matrix) + "\n";
  if (args.out.empty()) {
    std::cout << rendered;
  } else {
    open_output(args.out) << rendered;
  }

  auto opt = [](const std::optional<double>& v) {
    return v ? percent2(*v) : std::string("n/a");
  };
  std::cerr << "accuracy " << percent2(metrics.accuracy) << "  precision "
            << opt(metrics.precision) << "  recall " << opt(metrics.recall) << "  f1 "
            << opt(metrics.f1) << "  specificity " << opt(metrics.specificity) << "\n";
  return 0;
}

struct SweepArgs {
  std::string truth;
  std::string raw;
  std::vector<int> ks;
  std::string out;
};

int cmd_sweep(const SweepArgs& args) {
  const std::vector<BoolRecord> truth_records = read_bool_records(args.truth);
  const std::vector<BoolRecord> raw_records = read_bool_records(args.raw);
  if (truth_records.size() != raw_records.size()) {
    throw EvalError("sweep: truth and raw files differ in length (" +
                    std::to_string(truth_records.size()) + " vs " +
                    std::to_string(raw_records.size()) + ")");
  }
  std::vector<bool> truth, raw;
  truth.reserve(truth_records.size());
  raw.reserve(raw_records.size());
  for (std::size_t i = 0; i < truth_records.size(); ++i) {
    if (truth_records[i].frame_id != raw_records[i].frame_id) {
      throw EvalError("sweep: frame_id mismatch at row " + std::to_string(i) + " (" +
                      std::to_string(truth_records[i].frame_id) + " vs " +
                      std::to_string(raw_records[i].frame_id) + ")");
    }
    truth.push_back(truth_records[i].value);
    raw.push_back(raw_records[i].value);
  }

  for (int k : args.ks) {
    if (k < 1) throw ConfigError("sweep: every k must be >= 1");
  }
  const auto rows = sweep_window(truth, raw, args.ks);
  const std::string rendered = sweep_csv(rows);
  if (args.out.empty()) {
    std::cout << rendered;
  } else {
    open_output(args.out) << rendered;
  }
  return 0;
}

struct MatchArgs {
  std::string text;
  std::string config;
};

int cmd_match_sign(const MatchArgs& args) {
  const PipelineConfig config = resolve_config(args.config);
  const auto match = match_sign(args.text, config.sign_dictionary, config.dice());
  if (match) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", match->score);
    std::cout << args.text << " -> " << match->entry << " (" << buf << ")\n";
  } else {
    std::cout << args.text << " -> no match\n";
  }
  return 0;
}

struct SimulateArgs {
  std::string sim;
  std::string config;
  std::string out;
};

int cmd_simulate(const SimulateArgs& args) {
  const SimConfig sim = load_sim_config(args.sim);
  const PipelineConfig pipeline = resolve_config(args.config);
  const SimOutput output = generate_stream(sim, pipeline);

  std::ofstream frames_out = open_output(args.out);
  for (const FrameRecord& frame : output.frames) {
    frames_out << serialize_frame(frame) << '\n';
  }
  frames_out.flush();

  const std::string truth_path = truth_sidecar_path(args.out);
  std::ofstream truth_out = open_output(truth_path);
  std::int64_t positives = 0;
  for (std::size_t i = 0; i < output.frames.size(); ++i) {
    nlohmann::ordered_json doc;
    doc["frame_id"] = output.frames[i].frame_id;
    doc["construction"] = static_cast<bool>(output.truth[i]);
    truth_out << doc.dump() << '\n';
    if (output.truth[i]) ++positives;
  }
  truth_out.flush();

  std::cerr << "frames: " << output.frames.size() << "  truth-positive: " << positives
            << "  truth: " << truth_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"construction-site detection fusion and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sitewatch 1.0.0");

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "decide construction per frame from a JSONL stream");
  run->add_option("-i,--input", run_args.input, "frame JSONL file ('-' for stdin)");
  run->add_option("-c,--config", run_args.config, "pipeline config JSON");
  run->add_option("-o,--out", run_args.out, "decision JSONL file (default stdout)");
  run->add_option("-k", run_args.k_override, "override the voting window size")
      ->check(CLI::PositiveNumber);

  EvalStaticArgs static_args;
  CLI::App* eval_static =
      app.add_subcommand("eval-static", "detection-rate grid from capture points");
  eval_static->add_option("-p,--points", static_args.points, "capture point JSONL file")
      ->required();
  eval_static->add_option("-f,--format", static_args.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  eval_static->add_option("-o,--out", static_args.out, "output file (default stdout)");

  EvalDynamicArgs dynamic_args;
  CLI::App* eval_dynamic =
      app.add_subcommand("eval-dynamic", "confusion metrics from truth/predicted pairs");
  eval_dynamic->add_option("-p,--pairs", dynamic_args.pairs, "pairs JSONL file")->required();
  eval_dynamic->add_option("-o,--out", dynamic_args.out, "output file (default stdout)");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep-k", "re-score one stream at several window sizes");
  sweep->add_option("-t,--truth", sweep_args.truth, "truth sidecar JSONL file")->required();
  sweep->add_option("-r,--raw", sweep_args.raw, "raw decision sidecar JSONL file")->required();
  sweep->add_option("--ks", sweep_args.ks, "window sizes to score")
      ->required()
      ->delimiter(',');
  sweep->add_option("-o,--out", sweep_args.out, "output file (default stdout)");

  MatchArgs match_args;
  CLI::App* match = app.add_subcommand("match-sign", "match one text against the sign dictionary");
  match->add_option("-t,--text", match_args.text, "text to match")->required();
  match->add_option("-c,--config", match_args.config, "pipeline config JSON");

  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand("simulate", "generate a synthetic frame stream");
  simulate->add_option("-s,--sim", sim_args.sim, "simulation config JSON")->required();
  simulate->add_option("-c,--config", sim_args.config, "pipeline config JSON");
  simulate->add_option("-o,--out", sim_args.out, "frame JSONL output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_args);
    if (eval_static->parsed()) return cmd_eval_static(static_args);
    if (eval_dynamic->parsed()) return cmd_eval_dynamic(dynamic_args);
    if (sweep->parsed()) return cmd_sweep(sweep_args);
    if (match->parsed()) return cmd_match_sign(match_args);
    if (simulate->parsed()) return cmd_simulate(sim_args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;  // no subcommand dispatched; require_subcommand should prevent this
}
