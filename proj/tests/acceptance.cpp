// Acceptance suite: one PASS/FAIL line per primary criterion.
//
//   reqo_acceptance                 exit 1 if any criterion fails
//   reqo_acceptance --allow-fail 6  criterion 6 may fail (still printed)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <set>
#include <string>

#include "reqo/classical.hpp"
#include "reqo/config.hpp"
#include "reqo/estimator.hpp"
#include "reqo/graph.hpp"
#include "reqo/harness.hpp"
#include "reqo/schedule.hpp"
#include "reqo/statevector.hpp"

using namespace reqo;

namespace {

// Tolerances and thresholds.
constexpr double kFloorTol = 1e-9;
constexpr double kProbabilityTol = 1e-6;
constexpr double kSliceTol = 1e-9;
constexpr double kFig1Band = 0.91;
constexpr double kFig1MaxEpsilonT = 0.01;
constexpr double kQueryModelRelTol = 0.05;
constexpr double kSlopeTol = 0.05;
constexpr std::uint64_t kClassicalTrials = 2000;
constexpr std::uint64_t kClassicalSamples = 400;
constexpr double kClassicalEpsilon = 0.1;
constexpr std::uint64_t kClassicalSeed = 2024;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome floor_grid() {
  double worst = 1.0, worst_hi = 0.0;
  for (double delta : {0.1, 0.3, 0.5})
    for (int k = 1; k <= 64; ++k) {
      const int depth = min_depth(k / 64.0, delta);
      for (int k2 = k; k2 <= 64; ++k2) {
        const double p = success_probability(depth, delta, k2 / 64.0);
        worst = std::min(worst, p - (1.0 - delta * delta));
        worst_hi = std::max(worst_hi, p - 1.0);
      }
    }
  return {worst >= -kFloorTol && worst_hi <= kFloorTol,
          fmt("min P - (1-delta^2) = %.3g, max P - 1 = %.3g", worst, worst_hi)};
}

Outcome search_equivalence() {
  int instances = 0;
  double gap = 0.0, drift = 0.0;
  std::uint64_t seed = 100;
  for (int b = 1; b <= 4; ++b)
    for (int c = 1; c <= 4; ++c)
      for (double delta : {0.1, 0.3}) {
        if ((b + c) % 2 == 1 && delta == 0.1) continue;  // keep the suite brisk
        const Oracle oracle = make_planted_oracle(b, c, ++seed, 0.3);
        const auto dist = ScenarioDistribution::iid_bernoulli(b, 0.35);
        const ScenarioAnalysis analysis = analyze(oracle, dist);
        ++instances;
        for (int l = 0; l <= 10; ++l) {
          const AngleSchedule s = angle_schedule(l, delta);
          StateVector state = prepare_initial(dist, c);
          for (int j = 0; j <= l; ++j) {
            for (std::uint64_t xi = 0; xi < oracle.scenario_count(); ++xi)
              drift = std::max(drift, std::abs(scenario_probability(state, xi) - dist[xi]));
            if (j < l) apply_grover_iterate(state, oracle, s.alphas[j], s.betas[j]);
          }
          for (std::uint64_t xi = 0; xi < oracle.scenario_count(); ++xi)
            gap = std::max(gap, std::abs(scenario_marked_probability(state, oracle, xi) / dist[xi] -
                                         success_probability(s.depth(), delta, analysis.lambda(xi))));
        }
      }
  return {instances >= 20 && gap <= kProbabilityTol && drift <= kSliceTol,
          fmt("%d oracles, max |P_sv - P| = %.3g, max slice drift = %.3g", instances, gap, drift)};
}

Outcome threshold_dynamics() {
  const double delta = 0.3;
  const Oracle oracle = make_threshold_oracle(6, 6, 8.0, 3.0);
  const auto dist = ScenarioDistribution::iid_bernoulli(6, 0.5);
  const ScenarioAnalysis analysis = analyze(oracle, dist);
  const double lambda_t = largest_lambda_t(analysis, kFig1MaxEpsilonT);
  const double eps_t = epsilon_t(analysis, lambda_t);
  const int depth_t = min_depth(lambda_t, delta);
  const double lo = (analysis.mu - eps_t) * (1.0 - delta * delta);
  const double hi = analysis.mu;
  const int max_l = iterations_for_depth(depth_t) + 12;

  bool curves_ok = true;
  double gap = 0.0, a_t = -1.0;
  int first_in = -1;
  for (int l = 0; l <= max_l; ++l) {
    const AngleSchedule s = angle_schedule(l, delta);
    StateVector state = prepare_initial(dist, 6);
    run_search(state, oracle, s);
    double a = 0.0;
    for (std::uint64_t xi = 0; xi < 64; ++xi) {
      const double lambda = analysis.lambda(xi);
      const double p_sv = scenario_marked_probability(state, oracle, xi) / dist[xi];
      const double p = success_probability(s.depth(), delta, lambda);
      gap = std::max(gap, std::abs(p_sv - p));
      a += dist[xi] * p;
      if (lambda > 0.0 && s.depth() >= min_depth(lambda, delta))
        curves_ok = curves_ok && p_sv >= kFig1Band - kProbabilityTol && p_sv <= 1.0 + kProbabilityTol;
    }
    const bool in = a >= lo - kProbabilityTol && a <= hi + kProbabilityTol;
    if (in && first_in < 0) first_in = s.depth();
    if (s.depth() == depth_t) a_t = a;
  }
  const bool mu_ok = std::abs(analysis.mu - 39.0 / 64.0) < 1e-15;
  const bool window_ok = a_t >= lo - kProbabilityTol && a_t <= hi + kProbabilityTol;
  return {mu_ok && curves_ok && window_ok && eps_t <= kFig1MaxEpsilonT && gap <= kProbabilityTol,
          fmt("mu = %.6f, lambda_t = %.6f, eps_t = %.3g, L_t = %d, a(L_t) = %.6f in [%.6f, %.6f], first in window "
              "at L = %d, curves in band: %s, max |P_sv - P| = %.3g",
              analysis.mu, lambda_t, eps_t, depth_t, a_t, lo, hi, first_in, curves_ok ? "yes" : "no", gap)};
}

Outcome qae_bound() {
  int instances = 0, good = 0;
  double min_mass = 1.0, worst_mode_slack = 1.0;
  std::uint64_t seed = 300;
  for (int n : {2, 3})
    for (int m = 3; m <= 6; ++m)
      for (double density : {0.25, 0.5}) {
        const Oracle oracle = make_planted_oracle(n, n, ++seed, density);
        const auto dist = ScenarioDistribution::uniform(n);
        const AngleSchedule s = angle_schedule(1, 0.3);
        const double a = good_state_probability(oracle, dist, s);
        const PhaseEstimation pe = phase_estimation(oracle, dist, s, m);
        const double bound = qae_error_bound(a, pe.M);
        const double mass = outcome_mass(pe.probabilities, [&](double est) { return std::abs(est - a) <= bound; });
        const double mode_err = std::abs(amplitude_from_outcome(distribution_mode(pe.probabilities), pe.M) - a);
        ++instances;
        min_mass = std::min(min_mass, mass);
        worst_mode_slack = std::min(worst_mode_slack, bound - mode_err);
        good += mass >= kQaeSuccessFloor && mode_err <= bound;
      }
  return {instances >= 10 && good == instances,
          fmt("%d/%d instances, min mass = %.4f (floor %.4f), min bound - |mode err| = %.3g", good, instances,
              min_mass, kQaeSuccessFloor, worst_mode_slack)};
}

Outcome triangle() {
  Graph g;
  g.vertex_count = 3;
  g.edges = {{0, 1}, {0, 2}, {2, 1}};
  const Oracle oracle = reliability_oracle(g);
  const auto dist = ScenarioDistribution::uniform(3);
  QuantumParams p;
  p.delta = 0.05;
  p.m = 6;
  p.lambda_t = std::ldexp(1.0, -oracle.decision_bits());
  const QuantumRunReport r = estimate(oracle, dist, p);
  const bool mu_ok = std::abs(r.mu - 0.625) < 1e-15 && r.epsilon_t == 0.0;
  return {mu_ok && r.end_to_end_mass >= kQaeSuccessFloor,
          fmt("mu = %.4f, L_t = %d, M = %llu, bound = %.4f, mass = %.4f (floor %.4f), a~ = %.4f", r.mu, r.depth,
              static_cast<unsigned long long>(r.M), r.epsilon_bound, r.end_to_end_mass, kQaeSuccessFloor,
              r.a_tilde_mode)};
}

Outcome classical() {
  const Oracle oracle = make_threshold_oracle(6, 6, 8.0, 3.0);
  const auto dist = ScenarioDistribution::iid_bernoulli(6, 0.5);
  const ScenarioAnalysis analysis = analyze(oracle, dist);
  ClassicalParams params;
  params.samples = kClassicalSamples;
  params.epsilon = kClassicalEpsilon;
  params.order = SearchOrder::with_replacement;
  params.seed = kClassicalSeed;
  const auto reports = run_trials(oracle, dist, analysis, params, kClassicalTrials, 1);
  std::uint64_t failures = 0;
  double queries = 0.0;
  for (const auto& r : reports) {
    failures += std::abs(r.mu_tilde - 39.0 / 64.0) >= kClassicalEpsilon;
    queries += static_cast<double>(r.queries_actual);
  }
  const double n = static_cast<double>(reports.size());
  const double rate = static_cast<double>(failures) / n;
  const double bound = chebyshev_bound(params.samples, params.epsilon, params.sigma2);
  const double mean_q = queries / n;
  const double model = expected_query_model(analysis, 6, params.samples);
  const double exact = expected_queries_exact(oracle, dist, analysis, params.order, params.samples);
  const double rel = (mean_q - model) / model;
  const bool a_ok = rate <= bound;
  const bool b_ok = std::abs(rel) <= kQueryModelRelTol;
  return {a_ok && b_ok,
          fmt("(a) %s failure rate %.4f <= %.4f; (b) %s mean queries %.1f vs model %.1f (%+.1f%%, tol %.0f%%); "
              "exact expectation for this search order %.1f",
              a_ok ? "PASS" : "FAIL", rate, bound, b_ok ? "PASS" : "FAIL", mean_q, model, 100.0 * rel,
              100.0 * kQueryModelRelTol, exact)};
}

Outcome separation() {
  const ScalingStudy s = scaling_study({4, 6, 8, 10}, 2, 0.1, 7, 6);
  std::string measured;
  for (const auto& r : s.rows)
    if (r.quantum_measured > 0)
      measured += fmt(" c=%d: quantum %llu, classical %llu;", r.c, static_cast<unsigned long long>(r.quantum_measured),
                      static_cast<unsigned long long>(r.classical_measured));
  return {std::abs(s.quantum_slope - 0.5) <= kSlopeTol && std::abs(s.classical_slope - 1.0) <= kSlopeTol,
          fmt("quantum slope %.4f, classical slope %.4f; measured", s.quantum_slope, s.classical_slope) + measured};
}

Outcome determinism() {
  const std::string dir = REQO_SOURCE_DIR "/configs/";
  int runs = 0, mismatches = 0;
  const std::vector<std::pair<std::string, std::string>> jobs{
      {"threshold_dynamics.json", "dynamics"},  {"planted_small.json", "compare"},      {"triangle.json", "qae"},
      {"triangle.json", "reliability"}, {"planted_small.json", "classical"}, {"planted_small.json", "selftest"}};
  for (const auto& [file, command] : jobs) {
    const ExperimentConfig cfg = ExperimentConfig::load(dir + file);
    RunOptions one, two;
    two.threads = 2;
    bool ok = true;
    const auto a = run_command(command, cfg, one, ok);
    const auto b = run_command(command, cfg, one, ok);
    const auto c = run_command(command, cfg, two, ok);
    for (std::size_t i = 0; i < a.size(); ++i) mismatches += (a[i].content != b[i].content) + (a[i].content != c[i].content);
    ++runs;
  }
  return {mismatches == 0, fmt("%d commands x 3 runs (threads 1, 1, 2), %d mismatching outputs", runs, mismatches)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> allowed;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--allow-fail") == 0 && i + 1 < argc) allowed.insert(std::atoi(argv[++i]));
    else {
      std::fprintf(stderr, "usage: %s [--allow-fail N]...\n", argv[0]);
      return 2;
    }
  }
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"fixed-point floor", floor_grid},   {"search equivalence", search_equivalence},
      {"threshold dynamics", threshold_dynamics},         {"qae bound", qae_bound},
      {"end-to-end triangle", triangle},   {"classical baseline", classical},
      {"quadratic separation", separation}, {"determinism", determinism}};

  int blocking = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %d %s: %s [%.2fs]%s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str(), secs,
                !o.pass && allowed.count(id) ? " (allowed)" : "");
    std::fflush(stdout);
    if (!o.pass && !allowed.count(id)) ++blocking;
  }
  return blocking == 0 ? 0 : 1;
}
