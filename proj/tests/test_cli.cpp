// End-to-end checks of the sitewatch binary: exit codes, stream decisions,
// both evaluation reports, window sweeps, sign matching and simulation.
// Each invocation runs in its own scratch directory so the implicit
// ./sitewatch.json fallback can never leak into a test.

#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_dir() {
  static int counter = 0;
  const fs::path dir =
      fs::temp_directory_path() / ("sitewatch_cli_" + std::to_string(::getpid()) +
                                   "_" + std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// Runs the CLI with `args` inside `dir`; stdin is fed from a file.
CmdResult run_cli(const fs::path& dir, const std::string& args,
                  const std::string& stdin_data = "") {
  spit(dir / "stdin.txt", stdin_data);
  const std::string cmd = "cd '" + dir.string() + "' && '" SITEWATCH_CLI_BIN "' " +
                          args + " <stdin.txt >stdout.txt 2>stderr.txt";
  const int status = std::system(cmd.c_str());
  CmdResult result;
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(dir / "stdout.txt");
  result.err = slurp(dir / "stderr.txt");
  return result;
}

const std::string kData = SITEWATCH_DATA_DIR;

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::string pole_frame(int id, int n_poles) {
  nlohmann::ordered_json doc;
  doc["frame_id"] = id;
  doc["timestamp_ms"] = id * 33;
  doc["detections"] = nlohmann::json::array();
  for (int i = 0; i < n_poles; ++i) {
    doc["detections"].push_back({{"label", "scaffolding pole"},
                                 {"confidence", 0.5},
                                 {"box", {i * 30.0, 0.0, 20.0, 100.0}}});
  }
  doc["texts"] = nlohmann::json::array();
  return doc.dump();
}

}  // namespace

TEST_CASE("version and help exit cleanly") {
  const auto dir = scratch_dir();
  auto version = run_cli(dir, "--version");
  CHECK(version.code == 0);
  CHECK(version.out == "sitewatch 1.0.0\n");
  CHECK(run_cli(dir, "--help").code == 0);
  CHECK(run_cli(dir, "run --help").code == 0);
}

TEST_CASE("usage problems exit 2") {
  const auto dir = scratch_dir();
  CHECK(run_cli(dir, "").code == 2);                  // subcommand required
  CHECK(run_cli(dir, "frobnicate").code == 2);        // unknown subcommand
  CHECK(run_cli(dir, "run --no-such-flag").code == 2);
  CHECK(run_cli(dir, "run -k 0").code == 2);          // window must be positive
  CHECK(run_cli(dir, "eval-static").code == 2);       // --points required
  CHECK(run_cli(dir, "sweep-k -t a -r b").code == 2); // --ks required
}

TEST_CASE("data problems exit 1") {
  const auto dir = scratch_dir();
  auto missing = run_cli(dir, "run -i no_such_file.jsonl");
  CHECK(missing.code == 1);
  CHECK(missing.err.find("cannot open input file") != std::string::npos);
  CHECK(run_cli(dir, "eval-static -p nope.jsonl").code == 1);
  CHECK(run_cli(dir, "eval-dynamic -p nope.jsonl").code == 1);
  CHECK(run_cli(dir, "run -c nope.json -i -").code == 1);  // explicit config must exist

  spit(dir / "bad.jsonl", "{\"frame_id\": \"zero\"}\n");
  auto bad = run_cli(dir, "run -i bad.jsonl");
  CHECK(bad.code == 1);
  CHECK(bad.err.find("line 1") != std::string::npos);
}

TEST_CASE("config problems exit 2") {
  const auto dir = scratch_dir();
  spit(dir / "bad_k.json", R"({"voter": {"k": 0}})");
  auto bad_k = run_cli(dir, "run -c bad_k.json -i -");
  CHECK(bad_k.code == 2);

  spit(dir / "bad_band.json",
       R"({"vocabulary": {"categories": [{"name": "x", "kind": "target",
           "descriptors": ["x"], "band": [0.9, 0.1]}]}})");
  CHECK(run_cli(dir, "run -c bad_band.json -i -").code == 2);

  spit(dir / "empty_dict.json", R"({"sign_dictionary": []})");
  CHECK(run_cli(dir, "run -c empty_dict.json -i -").code == 2);
}

TEST_CASE("implicit sitewatch.json in the working directory is picked up") {
  const auto dir = scratch_dir();
  // A config whose dictionary drops "Road Work Ahead": the match must change.
  spit(dir / "sitewatch.json", R"({"sign_dictionary": ["Detour"]})");
  auto r = run_cli(dir, "match-sign -t 'roadwrk Ahead'");
  CHECK(r.code == 0);
  CHECK(r.out == "roadwrk Ahead -> no match\n");
}

TEST_CASE("run decides the static fixture stream") {
  const auto dir = scratch_dir();
  auto r = run_cli(dir, "run -i '" + kData + "/fixtures/static_frames.jsonl' -k 1");
  CHECK(r.code == 0);
  CHECK(r.err == "frames: 210  positive: 186 (88.57%)  k: 1\n");
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 210);
  int positives = 0;
  for (const auto& line : lines) {
    const auto doc = nlohmann::json::parse(line);
    if (doc.at("construction").get<bool>()) ++positives;
  }
  CHECK(positives == 186);
}

TEST_CASE("run with the shipped config file matches the built-in defaults") {
  const auto dir = scratch_dir();
  auto builtin = run_cli(dir, "run -i '" + kData + "/fixtures/static_frames.jsonl' -k 1");
  auto explicit_cfg = run_cli(dir, "run -i '" + kData +
                                       "/fixtures/static_frames.jsonl' -c '" + kData +
                                       "/sitewatch.json' -k 1");
  CHECK(explicit_cfg.code == 0);
  CHECK(explicit_cfg.out == builtin.out);
  CHECK(explicit_cfg.err == builtin.err);
}

TEST_CASE("run smooths the verdict but reports raw evidence") {
  const auto dir = scratch_dir();
  std::string input = pole_frame(0, 5) + "\n";
  for (int id = 1; id <= 3; ++id) input += pole_frame(id, 0) + "\n";

  auto r = run_cli(dir, "run -i - -k 3", input);
  CHECK(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 4);
  // Window of 3: [T]=T, [T,F] tie holds T, [T,F,F]=F, [F,F,F]=F.
  CHECK(lines[0] ==
        R"({"frame_id":0,"construction":true,"rules":["scaffold"],"counts":{"scaffold":5,"objects":0,"signs":0}})");
  CHECK(lines[1] ==
        R"({"frame_id":1,"construction":true,"rules":[],"counts":{"scaffold":0,"objects":0,"signs":0}})");
  CHECK(lines[2] ==
        R"({"frame_id":2,"construction":false,"rules":[],"counts":{"scaffold":0,"objects":0,"signs":0}})");
  CHECK(lines[3] ==
        R"({"frame_id":3,"construction":false,"rules":[],"counts":{"scaffold":0,"objects":0,"signs":0}})");
}

TEST_CASE("eval-static renders the fixture grid") {
  const auto dir = scratch_dir();

  SUBCASE("csv is byte-exact") {
    auto r = run_cli(dir, "eval-static -p '" + kData + "/fixtures/static_points.jsonl'");
    CHECK(r.code == 0);
    CHECK(r.err == "points: 210  overall: 186/210\n");
    const std::string expected =
        "distance_m/angle_deg,0,15,30,45,60,75,mean_cells,mean_exact\n"
        "2,100,100,100,100,100,100,100.0,100.0\n"
        "4,100,100,100,100,100,100,100.0,100.0\n"
        "6,86,100,100,100,100,86,95.3,95.2\n"
        "8,86,86,100,86,86,57,83.5,83.3\n"
        "10,86,86,57,57,57,43,64.3,64.3\n"
        "mean_cells,91.6,94.4,91.4,88.6,88.6,77.2,,\n"
        "mean_exact,91.4,94.3,91.4,88.6,88.6,77.1,,\n"
        "overall,186/210,88.57%,,,,,,\n";
    CHECK(r.out == expected);
  }

  SUBCASE("json carries the same grid") {
    auto r = run_cli(dir, "eval-static -p '" + kData +
                              "/fixtures/static_points.jsonl' -f json");
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc.at("points_per_cell") == 7);
    CHECK(doc.at("overall").at("successes") == 186);
    CHECK(doc.at("overall").at("percent") == 88.57);
    CHECK(doc.at("cells").at("percent")[4][5] == 43);
  }

  SUBCASE("--out writes the same bytes to a file") {
    auto direct = run_cli(dir, "eval-static -p '" + kData +
                                   "/fixtures/static_points.jsonl'");
    auto filed = run_cli(dir, "eval-static -p '" + kData +
                                  "/fixtures/static_points.jsonl' -o grid.csv");
    CHECK(filed.code == 0);
    CHECK(slurp(dir / "grid.csv") == direct.out);
  }

  SUBCASE("malformed point reports its line") {
    spit(dir / "pts.jsonl", R"({"site_id":1,"angle_deg":0,"distance_m":2,"success":true})"
                            "\n{\"site_id\":0}\n");
    auto r = run_cli(dir, "eval-static -p pts.jsonl");
    CHECK(r.code == 1);
    CHECK(r.err.find("pts.jsonl:2") != std::string::npos);
  }
}

TEST_CASE("eval-dynamic reproduces the fixture metrics") {
  const auto dir = scratch_dir();
  auto r = run_cli(dir, "eval-dynamic -p '" + kData + "/fixtures/dynamic_pairs.jsonl'");
  CHECK(r.code == 0);
  CHECK(r.err ==
        "accuracy 86.30%  precision 71.64%  recall 76.64%  f1 74.05%  "
        "specificity 89.60%\n");

  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("confusion").at("tp") == 2907);
  CHECK(doc.at("confusion").at("fn") == 886);
  CHECK(doc.at("confusion").at("fp") == 1151);
  CHECK(doc.at("confusion").at("tn") == 9921);
  CHECK(doc.at("confusion").at("total") == 14865);
  CHECK(doc.at("metrics").at("accuracy").get<double>() ==
        doctest::Approx(12828.0 / 14865.0).epsilon(1e-12));
  CHECK(doc.at("metrics").at("f1").get<double>() ==
        doctest::Approx(1938.0 / 2617.0).epsilon(1e-12));
}

TEST_CASE("sweep-k scores sidecar pairs at several windows") {
  const auto dir = scratch_dir();
  spit(dir / "truth.jsonl",
       R"({"frame_id":0,"construction":true})" "\n"
       R"({"frame_id":1,"construction":true})" "\n"
       R"({"frame_id":2,"construction":false})" "\n"
       R"({"frame_id":3,"construction":false})" "\n");
  spit(dir / "raw.jsonl",
       R"({"frame_id":0,"construction":true})" "\n"
       R"({"frame_id":1,"construction":false})" "\n"
       R"({"frame_id":2,"construction":false})" "\n"
       R"({"frame_id":3,"construction":false})" "\n");

  SUBCASE("k=1 equals the raw stream") {
    auto r = run_cli(dir, "sweep-k -t truth.jsonl -r raw.jsonl --ks 1");
    CHECK(r.code == 0);
    CHECK(r.out ==
          "k,accuracy,error_rate,precision,recall,f1,specificity\n"
          "1,0.750000,0.250000,1.000000,0.500000,0.666667,1.000000\n");
  }

  SUBCASE("several windows emit one row each") {
    auto r = run_cli(dir, "sweep-k -t truth.jsonl -r raw.jsonl --ks 1,2,3");
    CHECK(r.code == 0);
    CHECK(lines_of(r.out).size() == 4);
  }

  SUBCASE("length mismatch exits 1") {
    spit(dir / "short.jsonl", R"({"frame_id":0,"construction":true})" "\n");
    auto r = run_cli(dir, "sweep-k -t truth.jsonl -r short.jsonl --ks 1");
    CHECK(r.code == 1);
    CHECK(r.err.find("differ in length") != std::string::npos);
  }

  SUBCASE("frame_id mismatch exits 1") {
    spit(dir / "shifted.jsonl",
         R"({"frame_id":10,"construction":true})" "\n"
         R"({"frame_id":11,"construction":false})" "\n"
         R"({"frame_id":12,"construction":false})" "\n"
         R"({"frame_id":13,"construction":false})" "\n");
    auto r = run_cli(dir, "sweep-k -t truth.jsonl -r shifted.jsonl --ks 1");
    CHECK(r.code == 1);
    CHECK(r.err.find("frame_id mismatch") != std::string::npos);
  }

  SUBCASE("k below one exits 2") {
    CHECK(run_cli(dir, "sweep-k -t truth.jsonl -r raw.jsonl --ks 0").code == 2);
  }
}

TEST_CASE("match-sign prints entry and score") {
  const auto dir = scratch_dir();
  auto hit = run_cli(dir, "match-sign -t 'roadwrk Ahead'");
  CHECK(hit.code == 0);
  CHECK(hit.out == "roadwrk Ahead -> Road Work Ahead (0.8696)\n");

  auto miss = run_cli(dir, "match-sign -t pizza");
  CHECK(miss.code == 0);
  CHECK(miss.out == "pizza -> no match\n");
}

TEST_CASE("simulate is deterministic and round-trips through run") {
  const auto dir = scratch_dir();
  spit(dir / "sim.json", R"({
    "n_frames": 80,
    "spans": [{"start": 10, "end": 50,
               "profile": {"scaffold": 5, "objects": 3, "signs": 1,
                           "object_categories": ["traffic_cone"]}}],
    "miss_rate": 0.0, "fp_rate": 0.0, "clutter_rate": 0.0,
    "ocr_garble_rate": 0.0, "seed": 5
  })");

  auto a = run_cli(dir, "simulate -s sim.json -o a.jsonl");
  auto b = run_cli(dir, "simulate -s sim.json -o b.jsonl");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.err.find("frames: 80  truth-positive: 40") != std::string::npos);
  CHECK(slurp(dir / "a.jsonl") == slurp(dir / "b.jsonl"));
  CHECK(slurp(dir / "a.truth.jsonl") == slurp(dir / "b.truth.jsonl"));

  // Noise-free stream: per-frame decisions must equal the truth sidecar.
  auto run = run_cli(dir, "run -i a.jsonl -k 1 -o dec.jsonl");
  REQUIRE(run.code == 0);
  const auto decisions = lines_of(slurp(dir / "dec.jsonl"));
  const auto truth = lines_of(slurp(dir / "a.truth.jsonl"));
  REQUIRE(decisions.size() == 80);
  REQUIRE(truth.size() == 80);
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const auto d = nlohmann::json::parse(decisions[i]);
    const auto t = nlohmann::json::parse(truth[i]);
    CHECK(d.at("frame_id") == t.at("frame_id"));
    CHECK(d.at("construction") == t.at("construction"));
  }
}

TEST_CASE("simulate rejects a span the vocabulary cannot express") {
  const auto dir = scratch_dir();
  spit(dir / "sim.json", R"({
    "n_frames": 10,
    "spans": [{"start": 0, "end": 5,
               "profile": {"scaffold": 0, "objects": 2, "signs": 0,
                           "object_categories": ["no_such_category"]}}],
    "seed": 1
  })");
  auto r = run_cli(dir, "simulate -s sim.json -o out.jsonl");
  CHECK(r.code == 2);
}
