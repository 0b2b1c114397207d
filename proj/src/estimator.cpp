#include "reqo/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "reqo/errors.hpp"
#include "reqo/statevector.hpp"

namespace reqo {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAgreement = 1e-6;
constexpr double kBoundSlack = 1e-9;

}  // namespace

double qae_error_bound(double a, std::uint64_t M) {
  if (!(a >= 0.0 && a <= 1.0)) throw InputError("a must lie in [0, 1]");
  if (M < 2) throw InputError("M must be at least 2");
  const double m = static_cast<double>(M);
  return 2.0 * kPi * std::sqrt(a * (1.0 - a)) / m + kPi * kPi / (m * m);
}

double end_to_end_epsilon(double epsilon_t, double delta, double mu, std::uint64_t M) {
  const double m = static_cast<double>(M);
  return epsilon_t + delta * delta * mu - delta * delta * epsilon_t + kPi / m + kPi * kPi / (m * m);
}

std::uint64_t oracle_call_model(int depth, std::uint64_t M) {
  return static_cast<std::uint64_t>(depth + 1) * (2 * M - 1);
}

double amplitude_from_outcome(std::uint64_t d, std::uint64_t M) {
  const double s = std::sin(static_cast<double>(d) * kPi / static_cast<double>(M));
  return s * s;
}

double analytic_good_state_probability(const ScenarioAnalysis& analysis, const ScenarioDistribution& dist,
                                       int depth, double delta) {
  double a = 0.0;
  for (std::uint64_t xi = 0; xi < dist.scenario_count(); ++xi)
    a += dist[xi] * success_probability(depth, delta, analysis.lambda(xi));
  return a;
}

double good_state_probability(const Oracle& oracle, const ScenarioDistribution& dist, const AngleSchedule& schedule,
                              const ScenarioAnalysis& analysis) {
  StateVector state(RegisterLayout{oracle.scenario_bits(), oracle.decision_bits(), true, 0});
  apply_marking_operator(state, oracle, dist, schedule);
  check_norm(state, kUnitaryTolerance, "good_state_probability");
  const double simulated = ancilla_one_probability(state);
  const double closed_form = analytic_good_state_probability(analysis, dist, schedule.depth(), schedule.delta);
  if (std::abs(simulated - closed_form) > kAgreement)
    throw ConsistencyError("good-state probability: statevector " + std::to_string(simulated) +
                           " disagrees with closed form " + std::to_string(closed_form));
  return simulated;
}

double good_state_probability(const Oracle& oracle, const ScenarioDistribution& dist, const AngleSchedule& schedule) {
  return good_state_probability(oracle, dist, schedule, analyze(oracle, dist));
}

std::uint64_t distribution_mode(const Eigen::VectorXd& probabilities) {
  const double top = probabilities.maxCoeff();
  for (Eigen::Index d = 0; d < probabilities.size(); ++d)
    if (probabilities[d] >= top - 1e-12) return static_cast<std::uint64_t>(d);
  return 0;
}

nlohmann::json QuantumRunReport::to_json() const {
  nlohmann::json j;
  j["mu"] = mu;
  j["lambda_t"] = lambda_t;
  j["epsilon_t"] = epsilon_t;
  j["delta"] = delta;
  j["L_t"] = depth;
  j["l"] = iterations;
  j["m"] = m;
  j["M"] = M;
  j["a_exact"] = a_exact;
  j["a_statevector"] = a_statevector;
  j["a_window"] = {window_lo, window_hi};
  j["outcome_distribution"] = std::vector<double>(outcome_distribution.begin(), outcome_distribution.end());
  j["mode"] = mode;
  j["a_tilde_mode"] = a_tilde_mode;
  j["qae_bound"] = qae_bound;
  j["success_mass"] = success_mass;
  j["epsilon_bound"] = epsilon_bound;
  j["end_to_end_mass"] = end_to_end_mass;
  j["asymmetric_window_mass"] = asymmetric_window_mass;
  j["oracle_calls_actual"] = oracle_calls_actual;
  j["oracle_calls_model"] = oracle_calls_model;
  return j;
}

QuantumRunReport estimate(const Oracle& oracle, const ScenarioDistribution& dist, const QuantumParams& params) {
  const ScenarioAnalysis analysis = analyze(oracle, dist);

  QuantumRunReport r;
  r.mu = analysis.mu;
  r.delta = params.delta;
  r.m = params.m;
  r.M = std::uint64_t{1} << params.m;
  if (params.lambda_t) r.lambda_t = *params.lambda_t;
  else if (params.max_epsilon_t) r.lambda_t = largest_lambda_t(analysis, *params.max_epsilon_t);
  else r.lambda_t = std::ldexp(1.0, -oracle.decision_bits());
  r.epsilon_t = epsilon_t(analysis, r.lambda_t);
  r.depth = min_depth(r.lambda_t, r.delta, params.log_base);
  r.iterations = iterations_for_depth(r.depth);
  const AngleSchedule schedule = angle_schedule(r.iterations, r.delta);

  r.a_exact = analytic_good_state_probability(analysis, dist, r.depth, r.delta);
  r.a_statevector = good_state_probability(oracle, dist, schedule, analysis);
  r.window_lo = (r.mu - r.epsilon_t) * (1.0 - r.delta * r.delta);
  r.window_hi = r.mu;
  if (r.a_exact < r.window_lo - kBoundSlack || r.a_exact > r.window_hi + kBoundSlack)
    throw ConsistencyError("a = " + std::to_string(r.a_exact) + " lies outside [(mu - eps_t)(1 - delta^2), mu]");

  const PhaseEstimation pe = phase_estimation(oracle, dist, schedule, params.m);
  r.outcome_distribution = pe.probabilities;
  r.mode = distribution_mode(pe.probabilities);
  r.a_tilde_mode = amplitude_from_outcome(r.mode, r.M);
  r.oracle_calls_actual = pe.oracle_calls;
  r.oracle_calls_model = oracle_call_model(r.depth, r.M);

  const double a = std::clamp(r.a_statevector, 0.0, 1.0);
  r.qae_bound = qae_error_bound(a, r.M);
  r.success_mass =
      outcome_mass(pe.probabilities, [&](double est) { return std::abs(est - a) <= r.qae_bound + kBoundSlack; });
  r.epsilon_bound = end_to_end_epsilon(r.epsilon_t, r.delta, r.mu, r.M);
  r.end_to_end_mass = outcome_mass(
      pe.probabilities, [&](double est) { return std::abs(est - r.mu) <= r.epsilon_bound + kBoundSlack; });
  const double slack = kPi / static_cast<double>(r.M) + kPi * kPi / static_cast<double>(r.M * r.M);
  r.asymmetric_window_mass = outcome_mass(pe.probabilities, [&](double est) {
    return est >= r.window_lo - slack - kBoundSlack && est <= r.mu + slack + kBoundSlack;
  });

  if (r.success_mass < kQaeSuccessFloor)
    throw ConsistencyError("QAE success mass " + std::to_string(r.success_mass) + " below 8/pi^2");
  if (r.end_to_end_mass < kQaeSuccessFloor)
    throw ConsistencyError("estimate mass within the end-to-end epsilon " + std::to_string(r.end_to_end_mass) +
                           " below 8/pi^2");
  return r;
}

QuantumRunReport estimate_for_epsilon(const Oracle& oracle, const ScenarioDistribution& dist, double epsilon,
                                      std::optional<double> lambda_t) {
  const QaeParameters q = qae_parameters(epsilon);
  QuantumParams params;
  params.delta = q.delta;
  params.m = q.m;
  params.lambda_t = lambda_t;
  return estimate(oracle, dist, params);
}

}  // namespace reqo
