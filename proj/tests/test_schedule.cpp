#include <cmath>
#include <numbers>

#include "doctest.h"
#include "reqo/errors.hpp"
#include "reqo/schedule.hpp"

using namespace reqo;

TEST_CASE("chebyshev polynomials") {
  CHECK(chebyshev(2, 0.5) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(chebyshev(3, 0.3) == doctest::Approx(4 * 0.027 - 3 * 0.3).epsilon(1e-14));
  for (int L : {1, 3, 7, 21}) CHECK(chebyshev(L, 1.0) == 1.0);
  CHECK(chebyshev(1.0 / 3, chebyshev(3, 1.7)) == doctest::Approx(1.7).epsilon(1e-12));
  // Continuity across x = 1.
  CHECK(chebyshev(5, 1.0 - 1e-12) == doctest::Approx(chebyshev(5, 1.0 + 1e-12)).epsilon(1e-9));
  for (double theta : {0.1, 0.7, 1.3, 2.9})
    CHECK(chebyshev(9, std::cos(theta)) == doctest::Approx(std::cos(9 * theta)).epsilon(1e-12));
  for (double x : {1.0, 1.3, 4.0}) CHECK(chebyshev(1.0 / 5, chebyshev(1.0 / 3, x)) ==
                                         doctest::Approx(chebyshev(1.0 / 15, x)).epsilon(1e-12));
  CHECK_THROWS_AS(chebyshev(2, -1.5), DomainError);
  CHECK_THROWS_AS(chebyshev(0.5, 0.2), DomainError);
  CHECK_NOTHROW(chebyshev(3, -1.0));
}

TEST_CASE("angle schedule") {
  const AngleSchedule empty = angle_schedule(0, 0.3);
  CHECK(empty.alphas.size() == 0);
  CHECK(empty.depth() == 1);

  // Frozen from an independent evaluation of the closed form.
  const AngleSchedule one = angle_schedule(1, 0.3);
  CHECK(one.alphas[0] == doctest::Approx(4.6717065005267795).epsilon(1e-13));
  CHECK(one.betas[0] == -one.alphas[0]);

  const AngleSchedule three = angle_schedule(3, 0.1);
  CHECK(three.alphas[0] == doctest::Approx(2.2051301730347674).epsilon(1e-13));
  CHECK(three.alphas[1] == doctest::Approx(5.253223010742907).epsilon(1e-13));
  CHECK(three.alphas[2] == doctest::Approx(3.5252694919719385).epsilon(1e-13));

  for (int l : {1, 2, 5, 10})
    for (double delta : {0.1, 0.3, 0.5}) {
      const AngleSchedule s = angle_schedule(l, delta);
      double total = 0.0;
      for (int j = 0; j < l; ++j) {
        CHECK(s.alphas[j] == -s.betas[l - 1 - j]);  // bit-exact
        CHECK(std::isfinite(s.alphas[j]));
        CHECK(s.alphas[j] > 0.0);
        CHECK(s.alphas[j] < 2 * std::numbers::pi);
        total += s.alphas[j] + s.betas[l - 1 - j];
      }
      CHECK(total == 0.0);
    }
  CHECK_THROWS_AS(angle_schedule(2, 0.0), InputError);
  CHECK_THROWS_AS(angle_schedule(2, 1.0), InputError);
  CHECK_THROWS_AS(angle_schedule(-1, 0.5), InputError);
  CHECK(angle_schedule(1, 0.3).to_json().find("\"alphas\"") != std::string::npos);
}

TEST_CASE("success probability closed form") {
  for (double lambda = 0.0; lambda <= 1.0; lambda += 1.0 / 64)
    for (double delta : {0.1, 0.3, 0.5}) CHECK(std::abs(success_probability(1, delta, lambda) - lambda) < 1e-12);
  for (int L : {1, 3, 9, 31}) {
    CHECK(success_probability(L, 0.3, 0.0) == doctest::Approx(0.0));
    CHECK(success_probability(L, 0.3, 1.0) == doctest::Approx(1.0));
  }
  CHECK(success_probability(17, 0.3, 1.0 / 64) == doctest::Approx(0.97558832448).epsilon(1e-10));
  CHECK_THROWS_AS(success_probability(4, 0.3, 0.5), InputError);
  CHECK_THROWS_AS(success_probability(3, 0.3, 1.5), InputError);
}

TEST_CASE("minimum depth") {
  CHECK(min_depth(1.0, 0.3) == 3);  // ln(2/0.3) = 1.897
  CHECK(min_depth(0.1, 0.3) == 7);  // 1.897 / sqrt(0.1) = 5.999
  CHECK(min_depth(1.0 / 64, 0.3) == 17);
  CHECK(min_depth(1.0, 0.3, LogBase::base2) == 3);   // log2(6.67) = 2.74
  CHECK(min_depth(1.0 / 64, 0.3, LogBase::base2) == 23);
  CHECK(success_probability(min_depth(1.0, 0.3), 0.3, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(min_depth(0.0, 0.3), InputError);
  CHECK(iterations_for_depth(17) == 8);

  // Floor property for every L >= L_t and lambda >= lambda_t, both log bases.
  for (LogBase base : {LogBase::natural, LogBase::base2})
    for (double delta : {0.1, 0.3, 0.5})
      for (int k = 1; k <= 64; ++k) {
        const int Lt = min_depth(k / 64.0, delta, base);
        CHECK(Lt % 2 == 1);
        for (int L = Lt; L <= Lt + 12; L += 2)
          for (int k2 = k; k2 <= 64; ++k2) {
            const double p = success_probability(L, delta, k2 / 64.0);
            CHECK(p >= 1 - delta * delta - 1e-9);
            CHECK(p <= 1.0);
          }
      }
}

TEST_CASE("weak monotonicity of depth in lambda_t") {
  int prev = min_depth(1.0 / 64, 0.2);
  for (int k = 2; k <= 64; ++k) {
    const int d = min_depth(k / 64.0, 0.2);
    CHECK(d <= prev);
    prev = d;
  }
}

TEST_CASE("qae parameters") {
  const QaeParameters q = qae_parameters(0.1);
  CHECK(q.delta == 0.05);
  CHECK(q.m == 7);
  CHECK(q.M == 128);
  CHECK_THROWS_AS(qae_parameters(0.0), InputError);
  CHECK_THROWS_AS(qae_parameters(1.0), InputError);
  for (double eps = 0.01; eps < 0.99; eps += 0.01) {
    const QaeParameters p = qae_parameters(eps);
    const double M = static_cast<double>(p.M);
    CHECK(p.delta + std::numbers::pi / M + std::numbers::pi * std::numbers::pi / (M * M) <= eps + 1e-12);
    CHECK(M >= 2 * std::numbers::pi / (std::sqrt(2 * eps + 1) - 1));
    CHECK(M < 2 * 2 * std::numbers::pi / (std::sqrt(2 * eps + 1) - 1));
  }
}
