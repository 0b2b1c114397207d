#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "reqo/distribution.hpp"
#include "reqo/oracle.hpp"

namespace reqo {

/// How the brute-force search walks the 2^c decision strings of one scenario.
///
/// with_replacement : independent uniform probes, each one charged; the
///                    search gives up once every string has missed at least
///                    once, so unsatisfiable scenarios cost n H_n probes.
/// random_permutation : a fresh uniformly random order, no repeats.
/// sequential       : phi = 0, 1, 2, ...
enum class SearchOrder { sequential, random_permutation, with_replacement };

std::string to_string(SearchOrder order);
SearchOrder parse_search_order(const std::string& name);

struct ScenarioSearch {
  bool found = false;
  std::uint64_t queries = 0;
};

/// Searches for a completing decision string of `xi`; every probe is a counted
/// oracle query.
ScenarioSearch search_scenario(const Oracle& oracle, std::uint64_t xi, SearchOrder order, Rng& rng);

/// Expected probes for one scenario with k of 2^c completing strings.
/// sequential is position dependent and not covered here.
double expected_scenario_queries(std::uint64_t k, int c, SearchOrder order);

struct ClassicalParams {
  std::uint64_t samples = 400;  // N
  SearchOrder order = SearchOrder::with_replacement;
  double epsilon = 0.1;
  double sigma2 = 0.25;
  std::uint64_t seed = 0;
};

struct ClassicalRunReport {
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  double mu_tilde = 0.0;
  std::uint64_t queries_actual = 0;
  double queries_model = 0.0;
  double epsilon = 0.0;
  double sigma2 = 0.0;
  double chebyshev_bound = 0.0;
  /// mu~ (1 - mu~), reported alongside the Popoviciu cap.
  double empirical_variance = 0.0;
  std::uint64_t seed = 0;
  SearchOrder order = SearchOrder::with_replacement;

  nlohmann::json to_json() const;
};

/// min(1, sigma^2 / (N eps^2)).
double chebyshev_bound(std::uint64_t samples, double epsilon, double sigma2 = 0.25);

/// (mu E[1/lambda | lambda > 0] + (1 - mu) 2^c) N.
double expected_query_model(const ScenarioAnalysis& analysis, int c, std::uint64_t samples);

/// Exact expected query count of estimate_mu under `order`, from the marked
/// table (uncounted).  Unlike the model above it charges the coupon-collector
/// cost of proving a scenario unsatisfiable with replacement, and the
/// first-hit position of sequential search.
double expected_queries_exact(const Oracle& oracle, const ScenarioDistribution& dist, const ScenarioAnalysis& analysis,
                              SearchOrder order, std::uint64_t samples);

/// Draws N scenarios i.i.d. from `dist` and brute-force searches each.
ClassicalRunReport estimate_mu(const Oracle& oracle, const ScenarioDistribution& dist, const ScenarioAnalysis& analysis,
                               const ClassicalParams& params);

/// Seed of trial `t` derived from a master seed.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial);

/// Repeated independent runs, trial t seeded with trial_seed(params.seed, t).
std::vector<ClassicalRunReport> run_trials(const Oracle& oracle, const ScenarioDistribution& dist,
                                           const ScenarioAnalysis& analysis, const ClassicalParams& params,
                                           std::uint64_t trials, int threads = 1);

}  // namespace reqo
