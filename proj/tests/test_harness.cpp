#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "reqo/errors.hpp"
#include "reqo/harness.hpp"

using namespace reqo;
using nlohmann::json;

namespace {

ExperimentConfig parse(const std::string& text) { return ExperimentConfig::from_json(json::parse(text)); }

const OutputFile& file(const std::vector<OutputFile>& files, const std::string& name) {
  for (const auto& f : files)
    if (f.name == name) return f;
  throw std::runtime_error("missing output " + name);
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(fields);
  }
  return rows;
}

std::string graph_file(const std::string& name) { return std::string(REQO_SOURCE_DIR) + "/graphs/" + name; }

}  // namespace

TEST_CASE("config parsing is strict") {
  CHECK_NOTHROW(parse("{}"));
  CHECK_THROWS_AS(parse(R"({"oracel": {}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"oracle": {"kind": "magic"}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"oracle": {"b": "six"}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"algorithm": {"delta": 1.5}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"algorithm": {"lambda_t": 0.5, "max_epsilon_t": 0.1}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"algorithm": {"l_min": 4, "l_max": 2}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"classical": {"search_order": "spiral"}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"seed": -3})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"distribution": {"kind": "explicit"}})"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/config.json"), ConfigError);

  const ExperimentConfig cfg = parse(R"({"distribution": {"kind": "explicit", "p": [1, 2, 3]}})");
  CHECK_THROWS_AS(cfg.build_distribution(2), ConfigError);
}

TEST_CASE("normalized echo and hash") {
  const ExperimentConfig a = parse(R"({"seed": 4, "oracle": {"kind": "threshold"}})");
  const ExperimentConfig b = parse(R"({"oracle": {"kind": "threshold", "b": 6, "c": 6}, "seed": 4})");
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 16);
  const ExperimentConfig c = parse(R"({"seed": 5})");
  CHECK(a.hash() != c.hash());
  CHECK(a.to_json()["algorithm"]["log_base"] == "natural");
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  // Round trip through the echo keeps the hash.
  CHECK(ExperimentConfig::from_json(a.to_json()).hash() == a.hash());
}

TEST_CASE("csv helpers") {
  CHECK(csv_number(0.5) == "0.5");
  CHECK(csv_number(std::nan("")) == "");
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(loglog_slope({1, 2, 4, 8}, {3, 6, 12, 24}) == doctest::Approx(1.0));
  CHECK(loglog_slope({1, 4, 16}, {1, 2, 4}) == doctest::Approx(0.5));
}

TEST_CASE("dynamics output") {
  const ExperimentConfig cfg = parse(R"({
    "oracle": {"kind": "planted", "b": 3, "c": 3, "seed": 7, "density": 0.25},
    "algorithm": {"delta": 0.3, "l_min": 0, "l_max": 6},
    "seed": 3})");
  const auto files = cmd_dynamics(cfg);
  const std::string& text = file(files, "dynamics.csv").content;
  CHECK(text.rfind("# software=reqo ", 0) == 0);
  CHECK(text.find("config_hash=" + cfg.hash()) != std::string::npos);
  const auto rows = csv_rows(text);
  REQUIRE(rows.size() == 1 + 7 * 9);
  CHECK(rows[0] == std::vector<std::string>{"l", "L", "xi", "lambda_xi", "P_analytic", "P_statevector", "a",
                                            "window_lo", "window_hi", "L_t_marker"});
  int markers = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 10);
    CHECK(std::abs(std::stod(rows[i][4]) - std::stod(rows[i][5])) < 1e-6);
    markers += rows[i][9] == "1";
  }
  CHECK(markers == 9);  // one l hits L_t, nine rows per l

  const json summary = json::parse(file(files, "dynamics.json").content);
  CHECK(summary["meta"]["config_hash"] == cfg.hash());
  CHECK(summary["max_statevector_gap"].get<double>() < 1e-6);
}

TEST_CASE("dynamics of the constant-true oracle sits at one") {
  const ExperimentConfig cfg =
      parse(R"({"oracle": {"kind": "constant", "b": 2, "c": 2, "value": true}, "algorithm": {"l_max": 3}})");
  const auto rows = csv_rows(file(cmd_dynamics(cfg), "dynamics.csv").content);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][4]) == doctest::Approx(1.0));
}

TEST_CASE("reliability command") {
  const ExperimentConfig cfg = parse(R"({"algorithm": {"delta": 0.05, "m": 5}, "classical": {"N": 200}})");
  const std::vector<std::pair<std::string, double>> cases{
      {"single_edge.txt", 0.5}, {"triangle.txt", 0.625}, {"parallel_edges.txt", 0.75}};
  for (const auto& [name, expected] : cases) {
    RunOptions opts;
    opts.graph_path = graph_file(name);
    const json out = json::parse(file(cmd_reliability(cfg, opts), "reliability.json").content);
    CHECK(out["exact_reliability"].get<double>() == expected);
    CHECK(out["checks"]["mu_matches_enumeration"] == true);
    CHECK(out["checks"]["end_to_end_mass"] == true);
  }
  CHECK_THROWS_AS(cmd_reliability(cfg, {}), ConfigError);

  // Seven edges exceed the command limit.
  const auto path = (std::filesystem::temp_directory_path() / "reqo_seven_edges.txt").string();
  {
    std::ofstream os(path);
    os << "terminals 0 1\n";
    for (int i = 0; i < 7; ++i) os << "0 1\n";
  }
  RunOptions big;
  big.graph_path = path;
  CHECK_THROWS_AS(cmd_reliability(cfg, big), CapacityError);
  std::filesystem::remove(path);
}

TEST_CASE("compare: constant-false classical model is 2^c / eps^2") {
  const ExperimentConfig cfg = parse(R"({
    "oracle": {"kind": "constant", "b": 2, "c": 3, "value": false},
    "compare": {"epsilons": [0.5, 0.25], "c_values": [4, 6], "measure_max_c": 4}})");
  const json out = json::parse(file(cmd_compare(cfg), "compare.json").content);
  CHECK(out["epsilon_grid"][0]["classical_model"].get<double>() == doctest::Approx(8 / 0.25));
  CHECK(out["epsilon_grid"][1]["classical_model"].get<double>() == doctest::Approx(8 / 0.0625));
  CHECK(out["scaling"]["classical_slope"].get<double>() == doctest::Approx(1.0));
  CHECK(out["scaling"]["rows"][0]["quantum_measured"].is_number());
  CHECK(out["scaling"]["rows"][1]["quantum_measured"].is_null());
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  const ExperimentConfig cfg = parse(R"({
    "oracle": {"kind": "planted", "b": 2, "c": 3, "seed": 9, "density": 0.3},
    "distribution": {"kind": "iid", "q": [0.3, 0.6]},
    "algorithm": {"delta": 0.2, "l_max": 5, "m": 4},
    "classical": {"N": 50, "trials": 20},
    "compare": {"epsilons": [0.3], "c_values": [3, 4], "measure_max_c": 3},
    "seed": 12})");
  RunOptions one, four;
  four.threads = 4;
  for (const char* cmd : {"dynamics", "qae", "classical", "compare", "selftest"}) {
    bool ok1 = false, ok2 = false, ok3 = false;
    const auto a = run_command(cmd, cfg, one, ok1);
    const auto b = run_command(cmd, cfg, one, ok2);
    const auto c = run_command(cmd, cfg, four, ok3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].content == b[i].content);
      CHECK(a[i].content == c[i].content);
    }
    CHECK(ok1);
  }
  bool ok = true;
  CHECK_THROWS_AS(run_command("launch", cfg, one, ok), ConfigError);
}
