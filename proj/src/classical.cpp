#include "reqo/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "reqo/errors.hpp"
#include "reqo/parallel.hpp"

namespace reqo {

std::string to_string(SearchOrder order) {
  switch (order) {
    case SearchOrder::sequential: return "sequential";
    case SearchOrder::random_permutation: return "random_permutation";
    case SearchOrder::with_replacement: return "with_replacement";
  }
  return "unknown";
}

SearchOrder parse_search_order(const std::string& name) {
  if (name == "sequential") return SearchOrder::sequential;
  if (name == "random_permutation" || name == "permutation") return SearchOrder::random_permutation;
  if (name == "with_replacement") return SearchOrder::with_replacement;
  throw ConfigError("unknown search order '" + name + "'");
}

ScenarioSearch search_scenario(const Oracle& oracle, std::uint64_t xi, SearchOrder order, Rng& rng) {
  const std::uint64_t n = oracle.decision_count();
  ScenarioSearch out;
  switch (order) {
    case SearchOrder::sequential:
      for (std::uint64_t phi = 0; phi < n && !out.found; ++phi) {
        ++out.queries;
        out.found = oracle.evaluate(xi, phi);
      }
      break;
    case SearchOrder::random_permutation: {
      // Lazy Fisher-Yates: position i is fixed right before it is probed.
      std::vector<std::uint64_t> order_buf(n);
      std::iota(order_buf.begin(), order_buf.end(), std::uint64_t{0});
      for (std::uint64_t i = 0; i < n && !out.found; ++i) {
        std::uniform_int_distribution<std::uint64_t> pick(i, n - 1);
        std::swap(order_buf[i], order_buf[pick(rng)]);
        ++out.queries;
        out.found = oracle.evaluate(xi, order_buf[i]);
      }
      break;
    }
    case SearchOrder::with_replacement: {
      // Every probe is charged, repeats included.  Giving up is only sound
      // once each string has been seen to miss.
      std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
      std::vector<std::uint8_t> seen(n, 0);
      std::uint64_t distinct = 0;
      while (!out.found && distinct < n) {
        const std::uint64_t phi = pick(rng);
        ++out.queries;
        out.found = oracle.evaluate(xi, phi);
        if (!seen[phi]) {
          seen[phi] = 1;
          ++distinct;
        }
      }
      break;
    }
  }
  return out;
}

double expected_scenario_queries(std::uint64_t k, int c, SearchOrder order) {
  const double n = std::ldexp(1.0, c);
  switch (order) {
    case SearchOrder::random_permutation: return k == 0 ? n : (n + 1.0) / (static_cast<double>(k) + 1.0);
    case SearchOrder::with_replacement: {
      if (k > 0) return n / static_cast<double>(k);
      // Coupon collector: n H_n probes to see every string once.
      double harmonic = 0.0;
      for (double j = 1.0; j <= n; j += 1.0) harmonic += 1.0 / j;
      return n * harmonic;
    }
    case SearchOrder::sequential: break;
  }
  throw InputError("sequential search cost depends on where the completing strings sit");
}

double chebyshev_bound(std::uint64_t samples, double epsilon, double sigma2) {
  if (samples < 1) throw InputError("N must be >= 1");
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  return std::min(1.0, sigma2 / (static_cast<double>(samples) * epsilon * epsilon));
}

double expected_query_model(const ScenarioAnalysis& analysis, int c, std::uint64_t samples) {
  const double per_sample = analysis.mu * analysis.inv_lambda_expectation + (1.0 - analysis.mu) * std::ldexp(1.0, c);
  return per_sample * static_cast<double>(samples);
}

double expected_queries_exact(const Oracle& oracle, const ScenarioDistribution& dist, const ScenarioAnalysis& analysis,
                              SearchOrder order, std::uint64_t samples) {
  const int c = oracle.decision_bits();
  const std::uint64_t n = oracle.decision_count();
  double per_sample = 0.0;
  for (std::uint64_t xi = 0; xi < dist.scenario_count(); ++xi) {
    if (dist[xi] == 0.0) continue;
    double q = 0.0;
    if (order == SearchOrder::sequential) {
      const auto& table = oracle.marked_table();
      q = static_cast<double>(n);
      for (std::uint64_t phi = 0; phi < n; ++phi)
        if (table[(xi << c) | phi]) {
          q = static_cast<double>(phi + 1);
          break;
        }
    } else {
      q = expected_scenario_queries(analysis.completing_counts[xi], c, order);
    }
    per_sample += dist[xi] * q;
  }
  return per_sample * static_cast<double>(samples);
}

nlohmann::json ClassicalRunReport::to_json() const {
  nlohmann::json j;
  j["N"] = samples;
  j["hits"] = hits;
  j["mu_tilde"] = mu_tilde;
  j["queries_actual"] = queries_actual;
  j["queries_model"] = queries_model;
  j["epsilon"] = epsilon;
  j["sigma2"] = sigma2;
  j["chebyshev_bound"] = chebyshev_bound;
  j["empirical_variance"] = empirical_variance;
  j["seed"] = seed;
  j["search_order"] = to_string(order);
  return j;
}

ClassicalRunReport estimate_mu(const Oracle& oracle, const ScenarioDistribution& dist, const ScenarioAnalysis& analysis,
                               const ClassicalParams& params) {
  if (params.samples < 1) throw InputError("N must be >= 1");
  if (dist.scenario_bits() != oracle.scenario_bits())
    throw InputError("distribution and oracle disagree on the scenario bit count");

  Rng rng(params.seed);
  ClassicalRunReport r;
  r.samples = params.samples;
  r.seed = params.seed;
  r.order = params.order;
  r.epsilon = params.epsilon;
  r.sigma2 = params.sigma2;
  for (std::uint64_t j = 0; j < params.samples; ++j) {
    const std::uint64_t xi = dist.sample(rng);
    const ScenarioSearch s = search_scenario(oracle, xi, params.order, rng);
    r.queries_actual += s.queries;
    if (s.found) ++r.hits;
  }
  r.mu_tilde = static_cast<double>(r.hits) / static_cast<double>(r.samples);
  r.empirical_variance = r.mu_tilde * (1.0 - r.mu_tilde);
  r.queries_model = expected_query_model(analysis, oracle.decision_bits(), params.samples);
  r.chebyshev_bound = chebyshev_bound(params.samples, params.epsilon, params.sigma2);
  return r;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

std::vector<ClassicalRunReport> run_trials(const Oracle& oracle, const ScenarioDistribution& dist,
                                           const ScenarioAnalysis& analysis, const ClassicalParams& params,
                                           std::uint64_t trials, int threads) {
  std::vector<ClassicalRunReport> out(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    ClassicalParams p = params;
    p.seed = trial_seed(params.seed, t);
    out[t] = estimate_mu(oracle, dist, analysis, p);
  });
  return out;
}

}  // namespace reqo
