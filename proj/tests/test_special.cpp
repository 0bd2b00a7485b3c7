#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "stablefields/special.hpp"

using namespace stablefields;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("gamma function pins") {
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-12));
  CHECK(gamma_fn(-0.5) == doctest::Approx(-2.0 * std::sqrt(kPi)).epsilon(1e-12));
  CHECK(gamma_fn(20.5) == doctest::Approx(std::exp(log_gamma(20.5))).epsilon(1e-12));
  CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(-3.0), std::domain_error);
}

TEST_CASE("hermite examples and conventions") {
  CHECK(hermite(0, 3.7) == doctest::Approx(1.0));
  CHECK(hermite(2, 2.0) == doctest::Approx(3.0));  // H_2(x) = x^2 - 1
  CHECK(hermite(-1, 0.0) == doctest::Approx(std::sqrt(2.0 * kPi) * 0.5));
  CHECK_THROWS_AS(hermite(-2, 0.0), std::domain_error);
}

TEST_CASE("hermite three-term recurrence") {
  for (int n = 1; n <= 10; ++n)
    for (double x = -5.0; x <= 5.0; x += 0.5) {
      double lhs = hermite(n + 1, x);
      double rhs = x * hermite(n, x) - n * hermite(n - 1, x);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("gaussian tail") {
  CHECK(gaussian_tail(0.0) == doctest::Approx(0.5));
  CHECK(gaussian_tail(1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-10));
  CHECK(gaussian_tail(40.0) < 1e-300);
  for (double x = -6.0; x <= 6.0; x += 0.75)
    CHECK(gaussian_tail(x) + gaussian_tail(-x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rho") {
  for (double u = -6.0; u <= 6.0; u += 0.5)
    CHECK(rho(0, u) == doctest::Approx(gaussian_tail(u)).epsilon(1e-12));
  CHECK(rho(1, 0.0) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-12));
  CHECK(rho(2, 1.0) ==
        doctest::Approx(std::pow(2.0 * kPi, -1.5) * std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("ball volumes") {
  CHECK(ball_volume(0) == doctest::Approx(1.0));
  CHECK(ball_volume(2) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-12));
  for (int j = 2; j <= 10; ++j)
    CHECK(ball_volume(j) ==
          doctest::Approx(ball_volume(j - 2) * 2.0 * kPi / j).epsilon(1e-12));
}

TEST_CASE("flag coefficients") {
  for (int N = 0; N <= 8; ++N) CHECK(flag_coeff(N, 0) == doctest::Approx(1.0));
  CHECK(flag_coeff(2, 1) == doctest::Approx(kPi / 2.0).epsilon(1e-12));
  CHECK(flag_coeff(3, 3) == doctest::Approx(1.0));
  for (int N = 0; N <= 8; ++N)
    for (int j = 0; j <= N; ++j)
      CHECK(flag_coeff(N, j) == doctest::Approx(flag_coeff(N, N - j)).epsilon(1e-12));
  CHECK_THROWS_AS(flag_coeff(2, 3), std::domain_error);
  CHECK_THROWS_AS(flag_coeff(2, -1), std::domain_error);
}

TEST_CASE("stable constants") {
  StableConstants sc = stable_constants(1.0);
  CHECK(sc.c_alpha == doctest::Approx(2.0 / kPi).epsilon(1e-12));
  CHECK(sc.sigma_alpha == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sc.b_alpha == doctest::Approx(std::sqrt(2.0) * gamma_fn(1.5)).epsilon(1e-12));
  // continuity of C_alpha through the alpha = 1 removable singularity
  CHECK(stable_constants(1.0 - 1e-6).c_alpha ==
        doctest::Approx(2.0 / kPi).epsilon(1e-3));
  CHECK(stable_constants(1.0 + 1e-6).c_alpha ==
        doctest::Approx(2.0 / kPi).epsilon(1e-3));
  CHECK_THROWS_AS(stable_constants(0.0), std::domain_error);
  CHECK_THROWS_AS(stable_constants(2.0), std::domain_error);
}

TEST_CASE("tail constant identity") {
  // C_{alpha/2} sigma_alpha^{alpha/2} = 1/Gamma(1 - alpha/2)
  for (double alpha : {0.5, 0.8, 1.2, 1.5, 1.9}) {
    StableConstants sc = stable_constants(alpha);
    CHECK(sc.tail_const ==
          doctest::Approx(1.0 / gamma_fn(1.0 - 0.5 * alpha)).epsilon(1e-12));
  }
}

TEST_CASE("binomial") {
  CHECK(binomial(5, 2) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(binomial(10, 0) == doctest::Approx(1.0));
  CHECK(binomial(12, 12) == doctest::Approx(1.0));
}
