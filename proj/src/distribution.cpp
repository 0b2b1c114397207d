#include "reqo/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "reqo/errors.hpp"

namespace reqo {
namespace {

void check_bits(int b) {
  if (b < 1) throw InputError("scenario bit count must be >= 1");
  if (b > kMaxScenarioBits)
    throw CapacityError("scenario bit count " + std::to_string(b) + " exceeds limit " +
                        std::to_string(kMaxScenarioBits));
}

}  // namespace

ScenarioDistribution::ScenarioDistribution(int b, Eigen::VectorXd probabilities)
    : b_(b), probabilities_(std::move(probabilities)) {
  cdf_.resize(static_cast<std::size_t>(probabilities_.size()));
  std::partial_sum(probabilities_.begin(), probabilities_.end(), cdf_.begin());
}

ScenarioDistribution ScenarioDistribution::uniform(int b) {
  check_bits(b);
  const auto n = Eigen::Index{1} << b;
  return {b, Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n))};
}

ScenarioDistribution ScenarioDistribution::iid_bernoulli(int b, const std::vector<double>& q_per_bit) {
  check_bits(b);
  if (static_cast<int>(q_per_bit.size()) != b)
    throw InputError("iid_bernoulli needs one probability per scenario bit");
  for (double q : q_per_bit)
    if (!(q >= 0.0 && q <= 1.0)) throw InputError("bit probability outside [0, 1]");

  const auto n = Eigen::Index{1} << b;
  Eigen::VectorXd p(n);
  for (Eigen::Index xi = 0; xi < n; ++xi) {
    double prob = 1.0;
    for (int j = 0; j < b; ++j) prob *= ((xi >> j) & 1) ? q_per_bit[j] : 1.0 - q_per_bit[j];
    p[xi] = prob;
  }
  return {b, std::move(p)};
}

ScenarioDistribution ScenarioDistribution::iid_bernoulli(int b, double q) {
  return iid_bernoulli(b, std::vector<double>(static_cast<std::size_t>(std::max(b, 0)), q));
}

ScenarioDistribution ScenarioDistribution::explicit_table(const Eigen::VectorXd& weights) {
  const auto n = weights.size();
  if (n < 2 || (n & (n - 1)) != 0) throw InputError("explicit distribution length must be a power of two >= 2");
  int b = 0;
  while ((Eigen::Index{1} << b) < n) ++b;
  check_bits(b);
  if (!weights.allFinite() || (weights.array() < 0.0).any())
    throw InputError("explicit distribution has a negative or non-finite entry");
  const double total = weights.sum();
  if (!(total > 0.0)) throw InputError("explicit distribution has zero total mass");
  return {b, weights / total};
}

ScenarioDistribution ScenarioDistribution::point_mass(int b, std::uint64_t xi) {
  check_bits(b);
  const auto n = Eigen::Index{1} << b;
  if (xi >= static_cast<std::uint64_t>(n)) throw InputError("point mass outside scenario range");
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  p[static_cast<Eigen::Index>(xi)] = 1.0;
  return {b, std::move(p)};
}

std::uint64_t ScenarioDistribution::sample(Rng& rng) const {
  const double u = uniform01(rng) * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  // Never land on a zero-mass entry after rounding at the top of the CDF.
  auto idx = static_cast<std::size_t>(it - cdf_.begin());
  while (probabilities_[static_cast<Eigen::Index>(idx)] == 0.0 && idx > 0) --idx;
  return idx;
}

}  // namespace reqo
