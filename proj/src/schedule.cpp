#include "reqo/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"
#include "reqo/errors.hpp"

namespace reqo {

double chebyshev(double order, double x) {
  if (!std::isfinite(x) || x < -1.0) throw DomainError("Chebyshev argument below -1 is not supported");
  if (x >= 1.0) return std::cosh(order * std::acosh(x));
  if (order != std::floor(order)) throw DomainError("fractional Chebyshev order requires x >= 1");
  return std::cos(order * std::acos(x));
}

AngleSchedule angle_schedule(int l, double delta) {
  if (l < 0) throw InputError("iterate count must be non-negative");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");

  AngleSchedule s;
  s.l = l;
  s.delta = delta;
  s.alphas.resize(l);
  s.betas.resize(l);
  if (l == 0) return s;

  const int depth = s.depth();
  const double gamma = 1.0 / chebyshev(1.0 / depth, 1.0 / delta);
  const double root = std::sqrt(1.0 - gamma * gamma);
  // L is odd, so 2 pi j / L never hits pi / 2 and tan stays finite.
  for (int j = 1; j <= l; ++j) {
    const double t = std::tan(2.0 * std::numbers::pi * j / depth) * root;
    s.alphas[j - 1] = 2.0 * std::atan2(1.0, t);
  }
  for (int j = 1; j <= l; ++j) s.betas[l - j] = -s.alphas[j - 1];
  return s;
}

std::string AngleSchedule::to_json() const {
  nlohmann::json doc = {{"l", l}, {"L", depth()}, {"delta", delta}};
  doc["alphas"] = std::vector<double>(alphas.begin(), alphas.end());
  doc["betas"] = std::vector<double>(betas.begin(), betas.end());
  return doc.dump();
}

double success_probability(int depth, double delta, double lambda) {
  if (depth < 1 || depth % 2 == 0) throw InputError("depth L must be a positive odd integer");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("lambda must lie in [0, 1]");

  const double x = chebyshev(1.0 / depth, 1.0 / delta) * std::sqrt(1.0 - lambda);
  const double t = chebyshev(depth, x);
  const double p = 1.0 - delta * delta * t * t;
  constexpr double drift = 1e-12;
  if (p < -drift || p > 1.0 + drift) throw ConsistencyError("success probability left [0, 1]");
  return std::clamp(p, 0.0, 1.0);
}

int min_depth(double lambda_t, double delta, LogBase base) {
  if (!(lambda_t > 0.0 && lambda_t <= 1.0)) throw InputError("lambda_t must lie in (0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
  const double log_term = base == LogBase::natural ? std::log(2.0 / delta) : std::log2(2.0 / delta);
  const double bound = log_term / std::sqrt(lambda_t);
  auto depth = static_cast<int>(std::ceil(bound));
  if (depth < 1) depth = 1;
  if (depth % 2 == 0) ++depth;
  return depth;
}

QaeParameters qae_parameters(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  const double raw = 2.0 * std::numbers::pi / (std::sqrt(2.0 * epsilon + 1.0) - 1.0);
  QaeParameters q;
  q.delta = epsilon / 2.0;
  q.m = std::max(1, static_cast<int>(std::ceil(std::log2(raw))));
  q.M = std::uint64_t{1} << q.m;
  return q;
}

}  // namespace reqo
