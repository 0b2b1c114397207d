#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace reqo {

/// Chebyshev polynomial of the first kind, T_order(x).
///
///   |x| <= 1 : cos(order * acos x)
///    x >= 1  : cosh(order * acosh x)
///
/// Both branches agree at x = 1.  x < -1 is rejected with DomainError, and a
/// fractional order is only defined on the cosh branch (x >= 1).
double chebyshev(double order, double x);

/// Phases (alpha_j, beta_j), j = 1..l, of the fixed-point search with
/// L = 2l + 1 oracle-depth and floor parameter delta.
struct AngleSchedule {
  int l = 0;
  double delta = 0.5;
  Eigen::VectorXd alphas;
  Eigen::VectorXd betas;

  int depth() const { return 2 * l + 1; }
  std::string to_json() const;
};

/// alpha_j = -beta_{l-j+1} = 2 arccot(tan(2 pi j / L) sqrt(1 - gamma^2)),
/// gamma^-1 = T_{1/L}(1/delta), arccot taken in (0, pi).
AngleSchedule angle_schedule(int l, double delta);

/// P_{L}(lambda) = 1 - delta^2 T_L(T_{1/L}(1/delta) sqrt(1 - lambda))^2.
double success_probability(int depth, double delta, double lambda);

enum class LogBase { natural, base2 };

/// Smallest odd L with L >= log(2/delta) / sqrt(lambda_t).
int min_depth(double lambda_t, double delta, LogBase base = LogBase::natural);

/// Iterate count l for an odd depth L.
inline int iterations_for_depth(int depth) { return (depth - 1) / 2; }

struct QaeParameters {
  double delta = 0.0;
  int m = 0;
  std::uint64_t M = 0;
};

/// delta = eps / 2 and M = 2^m, the smallest power of two at or above
/// 2 pi / (sqrt(2 eps + 1) - 1).
QaeParameters qae_parameters(double epsilon);

}  // namespace reqo
