#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "reqo/classical.hpp"
#include "reqo/distribution.hpp"
#include "reqo/graph.hpp"
#include "reqo/oracle.hpp"
#include "reqo/schedule.hpp"

namespace reqo {

struct OracleSpec {
  /// threshold | planted | single_solution | constant | reliability | bitmap
  std::string kind = "threshold";
  int b = 6;
  int c = 6;
  double divisor = 8.0;
  double offset = 3.0;
  std::uint64_t seed = 7;
  double density = 0.125;
  bool value = false;
  /// reliability: graph file, or an inline graph when `edges` is non-empty.
  std::string graph;
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;
  std::pair<int, int> terminals{0, 1};
  /// bitmap: path to a saved MarkedBitmap.
  std::string path;
};

struct DistributionSpec {
  /// uniform | iid | explicit
  std::string kind = "uniform";
  std::vector<double> q;
  std::vector<double> p;
};

struct AlgorithmSpec {
  double delta = 0.3;
  std::optional<double> lambda_t;
  std::optional<double> max_epsilon_t;
  /// When set, delta and m come from qae_parameters(epsilon).
  std::optional<double> epsilon;
  int m = 6;
  int l_min = 0;
  int l_max = 12;
  LogBase log_base = LogBase::natural;
};

struct ClassicalSpec {
  std::uint64_t samples = 400;
  std::uint64_t trials = 1;
  double epsilon = 0.1;
  SearchOrder order = SearchOrder::with_replacement;
};

struct CompareSpec {
  std::vector<double> epsilons{0.2, 0.1, 0.05};
  std::vector<int> c_values{4, 6, 8, 10};
  int scaling_b = 2;
  int measure_max_c = 6;
  double scaling_epsilon = 0.1;
  /// Largest total qubit count for which the QAE circuit is simulated.
  int measure_max_qubits = 20;
};

/// Whole experiment description.  Parsing is strict: unknown keys and wrong
/// types are ConfigErrors.
struct ExperimentConfig {
  OracleSpec oracle;
  DistributionSpec distribution;
  AlgorithmSpec algorithm;
  ClassicalSpec classical;
  CompareSpec compare;
  std::uint64_t seed = 1;
  /// Directory used to resolve relative file paths inside the config.
  std::string base_dir;

  static ExperimentConfig from_json(const nlohmann::json& j, const std::string& base_dir = "");
  static ExperimentConfig load(const std::string& path);

  /// Normalized echo with every field spelled out.
  nlohmann::json to_json() const;
  /// FNV-1a 64 of the normalized echo, as 16 hex digits.
  std::string hash() const;

  Oracle build_oracle() const;
  ScenarioDistribution build_distribution(int b) const;
  /// Graph behind a reliability oracle.
  Graph build_graph() const;
};

std::string fnv1a_hex(const std::string& bytes);

}  // namespace reqo
