#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <numbers>
#include <optional>

#include "json.hpp"
#include "reqo/distribution.hpp"
#include "reqo/oracle.hpp"
#include "reqo/schedule.hpp"

namespace reqo {

/// Lower bound on the probability that QAE lands inside its error window.
inline constexpr double kQaeSuccessFloor = 8.0 / (std::numbers::pi * std::numbers::pi);

/// 2 pi sqrt(a (1 - a)) / M + pi^2 / M^2.
double qae_error_bound(double a, std::uint64_t M);

/// eps_t + delta^2 mu - delta^2 eps_t + pi / M + pi^2 / M^2.
double end_to_end_epsilon(double epsilon_t, double delta, double mu, std::uint64_t M);

/// (L + 1)(2M - 1).
std::uint64_t oracle_call_model(int depth, std::uint64_t M);

/// sin^2(d pi / M).
double amplitude_from_outcome(std::uint64_t d, std::uint64_t M);

/// Sum_xi p(xi) P_{L, xi} from the closed form.
double analytic_good_state_probability(const ScenarioAnalysis& analysis, const ScenarioDistribution& dist,
                                       int depth, double delta);

/// Probability of the mark ancilla after A = U_f S_L V.  Cross-checked
/// against the closed form; a gap above 1e-6 raises ConsistencyError.
double good_state_probability(const Oracle& oracle, const ScenarioDistribution& dist, const AngleSchedule& schedule,
                              const ScenarioAnalysis& analysis);
double good_state_probability(const Oracle& oracle, const ScenarioDistribution& dist, const AngleSchedule& schedule);

struct QuantumParams {
  double delta = 0.05;
  int m = 6;
  /// Defaults to 2^-c unless `max_epsilon_t` picks the largest admissible level.
  std::optional<double> lambda_t;
  std::optional<double> max_epsilon_t;
  LogBase log_base = LogBase::natural;
};

struct QuantumRunReport {
  double mu = 0.0;
  double lambda_t = 0.0;
  double epsilon_t = 0.0;
  double delta = 0.0;
  int depth = 1;  // L_t
  int iterations = 0;
  int m = 0;
  std::uint64_t M = 0;

  double a_exact = 0.0;
  double a_statevector = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;

  Eigen::VectorXd outcome_distribution;
  std::uint64_t mode = 0;
  double a_tilde_mode = 0.0;

  double qae_bound = 0.0;
  /// Pr[|a~ - a| <= qae_bound].
  double success_mass = 0.0;
  /// end-to-end epsilon and Pr[|a~ - mu| <= epsilon].
  double epsilon_bound = 0.0;
  double end_to_end_mass = 0.0;
  /// Pr[(mu - eps_t)(1 - delta^2) - pi/M - pi^2/M^2 <= a~ <= mu + pi/M + pi^2/M^2].
  double asymmetric_window_mass = 0.0;

  std::uint64_t oracle_calls_actual = 0;
  std::uint64_t oracle_calls_model = 0;

  nlohmann::json to_json() const;
};

/// Probability mass of outcomes d whose estimate sin^2(d pi / M) satisfies `keep`.
template <typename Pred>
double outcome_mass(const Eigen::VectorXd& probabilities, Pred&& keep) {
  const auto M = static_cast<std::uint64_t>(probabilities.size());
  double mass = 0.0;
  for (std::uint64_t d = 0; d < M; ++d)
    if (keep(amplitude_from_outcome(d, M))) mass += probabilities[static_cast<Eigen::Index>(d)];
  return mass;
}

/// Most likely outcome; near-ties (within 1e-12) go to the smaller d.
std::uint64_t distribution_mode(const Eigen::VectorXd& probabilities);

/// Analysis, depth selection, search, phase estimation, and bound checks.
/// Throws ConsistencyError when a proven bound fails.
QuantumRunReport estimate(const Oracle& oracle, const ScenarioDistribution& dist, const QuantumParams& params);

/// Parameter choice delta = eps / 2, M = 2^ceil(log2(2 pi / (sqrt(2 eps + 1) - 1))).
QuantumRunReport estimate_for_epsilon(const Oracle& oracle, const ScenarioDistribution& dist, double epsilon,
                                      std::optional<double> lambda_t = std::nullopt);

}  // namespace reqo
