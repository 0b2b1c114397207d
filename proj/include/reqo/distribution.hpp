#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

namespace reqo {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline constexpr int kMaxScenarioBits = 14;

/// Nature's distribution p(xi) over 2^b scenarios, stored densely.
class ScenarioDistribution {
 public:
  static ScenarioDistribution uniform(int b);
  /// p(xi) = prod_j q_j^{xi_j} (1 - q_j)^{1 - xi_j}; bit j of xi is (xi >> j) & 1.
  static ScenarioDistribution iid_bernoulli(int b, const std::vector<double>& q_per_bit);
  static ScenarioDistribution iid_bernoulli(int b, double q);
  /// Normalizes a non-negative vector of length 2^b.
  static ScenarioDistribution explicit_table(const Eigen::VectorXd& weights);
  static ScenarioDistribution point_mass(int b, std::uint64_t xi);

  int scenario_bits() const { return b_; }
  std::uint64_t scenario_count() const { return static_cast<std::uint64_t>(probabilities_.size()); }
  const Eigen::VectorXd& probabilities() const { return probabilities_; }
  double operator[](std::uint64_t xi) const { return probabilities_[static_cast<Eigen::Index>(xi)]; }

  /// Inverse-CDF draw.
  std::uint64_t sample(Rng& rng) const;

  /// sqrt(p(xi)): the column P|0> of the state-preparation unitary.
  Eigen::VectorXd amplitudes() const { return probabilities_.cwiseSqrt(); }

 private:
  ScenarioDistribution(int b, Eigen::VectorXd probabilities);

  int b_;
  Eigen::VectorXd probabilities_;
  std::vector<double> cdf_;
};

}  // namespace reqo
