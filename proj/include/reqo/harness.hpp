#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "reqo/config.hpp"

namespace reqo {

inline constexpr const char* kSoftwareVersion = "reqo " REQO_VERSION;

/// Largest graph accepted by the `reliability` command.
inline constexpr int kMaxReliabilityCommandEdges = 6;

struct OutputFile {
  std::string name;
  std::string content;
};

struct RunOptions {
  int threads = 1;
  /// Overrides the config's oracle for `reliability`.
  std::string graph_path;
};

/// dynamics.csv + dynamics.json: per-(l, xi) success curves and the a trace.
std::vector<OutputFile> cmd_dynamics(const ExperimentConfig& cfg, const RunOptions& opts = {});
/// qae.json: one full quantum estimate.
std::vector<OutputFile> cmd_qae(const ExperimentConfig& cfg, const RunOptions& opts = {});
/// classical.json + classical.csv: repeated Monte-Carlo trials.
std::vector<OutputFile> cmd_classical(const ExperimentConfig& cfg, const RunOptions& opts = {});
/// compare.json + compare.csv: epsilon grid, scaling rows, fitted slopes.
std::vector<OutputFile> cmd_compare(const ExperimentConfig& cfg, const RunOptions& opts = {});
/// reliability.json: exact, quantum, and classical reliability of a small graph.
std::vector<OutputFile> cmd_reliability(const ExperimentConfig& cfg, const RunOptions& opts = {});
/// selftest.json: a fast invariant suite.  `passed` is cleared on any failure.
std::vector<OutputFile> cmd_selftest(const ExperimentConfig& cfg, const RunOptions& opts, bool& passed);

/// Dispatch by name; throws ConfigError on an unknown command.
std::vector<OutputFile> run_command(const std::string& command, const ExperimentConfig& cfg, const RunOptions& opts,
                                    bool& passed);

/// lambda_t from the config: explicit, from max_epsilon_t, or 2^-c.
double resolve_lambda_t(const AlgorithmSpec& spec, const ScenarioAnalysis& analysis);

struct ScalingRow {
  int c = 0;
  double lambda_t = 0.0;
  int depth = 0;
  std::uint64_t M = 0;
  double quantum_model = 0.0;
  double classical_model = 0.0;
  /// Measured ledger counts; zero when not simulated.
  std::uint64_t quantum_measured = 0;
  std::uint64_t classical_measured = 0;
  std::uint64_t classical_samples = 0;
};

struct ScalingStudy {
  std::vector<ScalingRow> rows;
  double quantum_slope = 0.0;
  double classical_slope = 0.0;
};

/// Single-solution oracles (lambda = 2^-c) at fixed epsilon.  Query counts
/// are measured by simulation for c <= measure_max_c.
ScalingStudy scaling_study(const std::vector<int>& c_values, int b, double epsilon, std::uint64_t seed,
                           int measure_max_c, int threads = 1);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// CSV field formatting: %.17g for doubles, RFC-4180 quoting for text.
std::string csv_number(double v);
std::string csv_field(const std::string& text);

}  // namespace reqo
