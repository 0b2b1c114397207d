#include <cmath>
#include <map>

#include "doctest.h"
#include "reqo/classical.hpp"
#include "reqo/errors.hpp"

using namespace reqo;

namespace {

ScenarioAnalysis analysis_of(const Oracle& f, const ScenarioDistribution& d) { return analyze(f, d); }

}  // namespace

TEST_CASE("search orders") {
  SUBCASE("names round trip") {
    for (SearchOrder o : {SearchOrder::sequential, SearchOrder::random_permutation, SearchOrder::with_replacement})
      CHECK(parse_search_order(to_string(o)) == o);
    CHECK_THROWS_AS(parse_search_order("bogus"), ConfigError);
  }
  SUBCASE("sequential finds the first completing string") {
    const Oracle f = make_threshold_oracle(6, 6, 8.0, 3.0);
    Rng rng(1);
    const ScenarioSearch s = search_scenario(f, 63, SearchOrder::sequential, rng);
    CHECK(s.found);
    CHECK(s.queries == 1);
    const ScenarioSearch miss = search_scenario(f, 3, SearchOrder::sequential, rng);
    CHECK_FALSE(miss.found);
    CHECK(miss.queries == 64);
  }
  SUBCASE("permutation never repeats and exhausts at 2^c") {
    const Oracle f = make_constant_oracle(1, 5, false);
    Rng rng(2);
    CHECK(search_scenario(f, 0, SearchOrder::random_permutation, rng).queries == 32);
  }
  SUBCASE("with replacement only gives up after every string missed") {
    const Oracle f = make_constant_oracle(1, 4, false);
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
      const ScenarioSearch s = search_scenario(f, 1, SearchOrder::with_replacement, rng);
      CHECK_FALSE(s.found);
      CHECK(s.queries >= 16);
    }
    // A single completing string is always found.
    const Oracle one = make_bitmap_oracle(plant_single_solution(1, 6, 4));
    for (int t = 0; t < 50; ++t) CHECK(search_scenario(one, 0, SearchOrder::with_replacement, rng).found);
  }
}

TEST_CASE("expected per-scenario cost") {
  CHECK(expected_scenario_queries(4, 6, SearchOrder::with_replacement) == 16.0);
  CHECK(expected_scenario_queries(1, 6, SearchOrder::random_permutation) == 32.5);
  CHECK(expected_scenario_queries(0, 6, SearchOrder::random_permutation) == 64.0);
  double h4 = 1 + 1 / 2.0 + 1 / 3.0 + 1 / 4.0;
  CHECK(expected_scenario_queries(0, 2, SearchOrder::with_replacement) == doctest::Approx(4 * h4));
  CHECK_THROWS_AS(expected_scenario_queries(1, 3, SearchOrder::sequential), InputError);
}

TEST_CASE("constant oracles") {
  const auto d = ScenarioDistribution::uniform(3);
  const Oracle yes = make_constant_oracle(3, 4, true);
  const Oracle no = make_constant_oracle(3, 4, false);
  for (SearchOrder o : {SearchOrder::sequential, SearchOrder::random_permutation, SearchOrder::with_replacement}) {
    ClassicalParams p;
    p.samples = 50;
    p.order = o;
    p.seed = 9;
    const ClassicalRunReport r = estimate_mu(yes, d, analysis_of(yes, d), p);
    CHECK(r.mu_tilde == 1.0);
    CHECK(r.queries_actual == 50);
    CHECK(r.queries_model == 50.0);
    const ClassicalRunReport z = estimate_mu(no, d, analysis_of(no, d), p);
    CHECK(z.mu_tilde == 0.0);
    CHECK(z.queries_model == 50.0 * 16);
    if (o != SearchOrder::with_replacement) CHECK(z.queries_actual == 50 * 16);
  }
}

TEST_CASE("chebyshev bound") {
  CHECK(chebyshev_bound(100, 0.1) == doctest::Approx(0.25));
  CHECK(chebyshev_bound(1, 0.5) == 1.0);
  CHECK(chebyshev_bound(1, 2.0) == doctest::Approx(0.0625));
  CHECK_THROWS_AS(chebyshev_bound(0, 0.1), InputError);
  CHECK_THROWS_AS(chebyshev_bound(10, 0.0), InputError);
}

TEST_CASE("threshold instance: model and estimate") {
  const Oracle f = make_threshold_oracle(6, 6, 8.0, 3.0);
  const auto d = ScenarioDistribution::uniform(6);
  const ScenarioAnalysis a = analysis_of(f, d);
  // 271/15 + (25/64) 64 per sample.
  CHECK(expected_query_model(a, 6, 1) == doctest::Approx(271.0 / 15 + 25.0).epsilon(1e-13));

  ClassicalParams p;
  p.samples = 400;
  p.seed = 77;
  const ClassicalRunReport r1 = estimate_mu(f, d, a, p);
  const ClassicalRunReport r2 = estimate_mu(f, d, a, p);
  CHECK(r1.queries_actual == r2.queries_actual);
  CHECK(r1.hits == r2.hits);
  CHECK(r1.mu_tilde * 400 == doctest::Approx(std::round(r1.mu_tilde * 400)));
  CHECK(r1.to_json()["search_order"] == "with_replacement");
}

TEST_CASE("unbiased over repeated trials") {
  const Oracle f = make_threshold_oracle(6, 6, 8.0, 3.0);
  const auto d = ScenarioDistribution::uniform(6);
  const ScenarioAnalysis a = analysis_of(f, d);
  for (SearchOrder o : {SearchOrder::sequential, SearchOrder::random_permutation, SearchOrder::with_replacement}) {
    ClassicalParams p;
    p.samples = 100;
    p.order = o;
    p.seed = 5;
    const auto runs = run_trials(f, d, a, p, 400, 2);
    double mean = 0.0, queries = 0.0;
    for (const auto& r : runs) {
      mean += r.mu_tilde;
      queries += static_cast<double>(r.queries_actual);
    }
    mean /= runs.size();
    queries /= runs.size();
    // Standard error of the mean is about 0.0024.
    CHECK(std::abs(mean - a.mu) < 0.012);
    const double exact = expected_queries_exact(f, d, a, o, p.samples);
    CHECK(std::abs(queries - exact) / exact < 0.03);
  }
}

TEST_CASE("per-satisfiable cost with replacement is 1 / lambda") {
  const Oracle f = make_threshold_oracle(6, 6, 8.0, 3.0);
  Rng rng(31);
  for (std::uint64_t xi : {25u, 40u, 63u}) {
    const double lambda = static_cast<double>(completing_set(f, xi).size()) / 64.0;
    double total = 0.0;
    const int reps = 20000;
    for (int t = 0; t < reps; ++t) total += search_scenario(f, xi, SearchOrder::with_replacement, rng).queries;
    CHECK(std::abs(total / reps * lambda - 1.0) < 0.05);
  }
  // Permutation order sits at (2^c + 1) / (k + 1).
  double total = 0.0;
  for (int t = 0; t < 20000; ++t) total += search_scenario(f, 25, SearchOrder::random_permutation, rng).queries;
  CHECK(std::abs(total / 20000 - 32.5) / 32.5 < 0.05);
}

TEST_CASE("trial seeds are distinct and stable") {
  std::map<std::uint64_t, int> seen;
  for (std::uint64_t t = 0; t < 1000; ++t) ++seen[trial_seed(42, t)];
  CHECK(seen.size() == 1000);
  CHECK(trial_seed(42, 7) == trial_seed(42, 7));
  CHECK(trial_seed(42, 7) != trial_seed(43, 7));
}
