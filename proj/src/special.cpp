#include "stablefields/special.hpp"

#include <cmath>
#include <stdexcept>

namespace stablefields {

namespace {

// Lanczos, g = 7, 9 terms.
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

const double kPi = 3.14159265358979323846;
const double kSqrt2Pi = 2.50662827463100050242;

double lanczos_gamma(double x) {
  // valid for x > 0.5
  x -= 1.0;
  double a = kLanczos[0];
  double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
  return kSqrt2Pi * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

}  // namespace

double gamma_fn(double x) {
  if (x == std::floor(x) && x <= 0.0)
    throw std::domain_error("gamma_fn: non-positive integer argument");
  if (x < 0.5)  // reflection
    return kPi / (std::sin(kPi * x) * lanczos_gamma(1.0 - x));
  return lanczos_gamma(x);
}

double log_gamma(double x) {
  if (x <= 0.0) throw std::domain_error("log_gamma: argument must be positive");
  if (x < 0.5) return std::log(kPi / std::sin(kPi * x)) - log_gamma(1.0 - x);
  x -= 1.0;
  double a = kLanczos[0];
  double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
  return 0.5 * std::log(2.0 * kPi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

double gaussian_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double hermite(int n, double x) {
  if (n < -1) throw std::domain_error("hermite: n must be >= -1");
  if (n == -1) return kSqrt2Pi * gaussian_tail(x) * std::exp(x * x / 2.0);
  // explicit sum H_n(x) = n! sum_j (-1)^j x^{n-2j} / (j! (n-2j)! 2^j)
  double sum = 0.0;
  double nfact = std::tgamma(n + 1.0);
  for (int j = 0; 2 * j <= n; ++j) {
    double term = std::pow(x, n - 2 * j) /
                  (std::tgamma(j + 1.0) * std::tgamma(n - 2 * j + 1.0) *
                   std::pow(2.0, j));
    sum += (j % 2 == 0 ? term : -term);
  }
  return nfact * sum;
}

double rho(int n, double u) {
  if (n < 0) throw std::domain_error("rho: n must be >= 0");
  if (n == 0) return gaussian_tail(u);  // avoids the exp(u^2/2)*exp(-u^2/2) round trip
  return std::pow(2.0 * kPi, -(n + 1) / 2.0) * hermite(n - 1, u) *
         std::exp(-u * u / 2.0);
}

double ball_volume(int j) {
  if (j < 0) throw std::domain_error("ball_volume: j must be >= 0");
  return std::pow(kPi, j / 2.0) / gamma_fn(j / 2.0 + 1.0);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0));
}

double flag_coeff(int N, int j) {
  if (j < 0 || j > N) throw std::domain_error("flag_coeff: need 0 <= j <= N");
  return binomial(N, j) * ball_volume(N) / (ball_volume(N - j) * ball_volume(j));
}

StableConstants stable_constants(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::domain_error("stable_constants: alpha must be in (0,2)");
  StableConstants c;
  c.alpha = alpha;
  // C_alpha is an indeterminate form at alpha = 1; the limit is 2/pi.
  auto c_of = [](double a) {
    if (std::abs(a - 1.0) < 1e-9) return 2.0 / kPi;
    return 1.0 / (gamma_fn(1.0 - a) * std::cos(kPi * a / 2.0));
  };
  c.c_alpha = c_of(alpha);
  c.b_alpha = std::pow(2.0, alpha / 2.0) * gamma_fn(1.0 + alpha / 2.0);
  c.sigma_alpha = std::pow(std::cos(kPi * alpha / 4.0), 2.0 / alpha);
  c.tail_const = c_of(alpha / 2.0) * std::pow(c.sigma_alpha, alpha / 2.0);
  return c;
}

}  // namespace stablefields
