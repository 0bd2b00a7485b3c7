#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stablefields/sampling.hpp"
#include "stablefields/special.hpp"

using namespace stablefields;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("positive stable laplace transform") {
  // E e^{-tX} = e^{-t^a}
  for (double a : {0.5, 0.75}) {
    RngStream s(101, 0);
    const int n = 1000000;
    std::vector<double> t{0.5, 1.0, 2.0, 5.0};
    std::vector<double> sum(t.size(), 0.0), sumsq(t.size(), 0.0);
    for (int i = 0; i < n; ++i) {
      double x = sample_positive_stable(a, s);
      CHECK(x > 0.0);
      for (size_t j = 0; j < t.size(); ++j) {
        double v = std::exp(-t[j] * x);
        sum[j] += v;
        sumsq[j] += v * v;
      }
    }
    for (size_t j = 0; j < t.size(); ++j) {
      double m = sum[j] / n;
      double se = std::sqrt((sumsq[j] / n - m * m) / n);
      CHECK(std::abs(m - std::exp(-std::pow(t[j], a))) < 4.0 * se);
    }
  }
  RngStream s(1, 0);
  CHECK_THROWS_AS(sample_positive_stable(1.0, s), std::domain_error);
  CHECK_THROWS_AS(sample_positive_stable(0.0, s), std::domain_error);
}

TEST_CASE("positive stable degenerates toward 1 as index -> 1") {
  RngStream s(5, 0);
  std::vector<double> xs(10001);
  for (auto& x : xs) x = sample_positive_stable(0.999, s);
  std::nth_element(xs.begin(), xs.begin() + 5000, xs.end());
  CHECK(xs[5000] > 0.5);
  CHECK(xs[5000] < 2.0);
}

TEST_CASE("positive stable tail constant") {
  // P{X > v} v^a -> tail constant of the alpha = 2a field convention
  const double alpha = 1.5, a = alpha / 2.0, v = 50.0;
  RngStream s(404, 0);
  const int n = 1000000;
  int hits = 0;
  for (int i = 0; i < n; ++i)
    if (sample_positive_stable(a, s) > v) ++hits;
  double est = static_cast<double>(hits) / n * std::pow(v, a);
  CHECK(std::abs(est - stable_constants(alpha).tail_const) <
        0.15 * stable_constants(alpha).tail_const);
}

TEST_CASE("arrival sequences") {
  RngStream s(11, 0);
  const int n = 100000;
  double sum5 = 0.0, sumsq5 = 0.0, sum2 = 0.0, sumsq2 = 0.0;
  for (int i = 0; i < n; ++i) {
    ArrivalSequence arr = sample_arrivals(5, s);
    for (int k = 1; k < 5; ++k) CHECK(arr.gammas[k] > arr.gammas[k - 1]);
    sum5 += arr.gammas[4];
    sumsq5 += arr.gammas[4] * arr.gammas[4];
    // E[Gamma_2^{-4/3}] = Gamma(2 - 4/3)/Gamma(2) = Gamma(2/3) for alpha = 1.5
    double v = std::pow(arr.gammas[1], -4.0 / 3.0);
    sum2 += v;
    sumsq2 += v * v;
  }
  double m5 = sum5 / n, se5 = std::sqrt((sumsq5 / n - m5 * m5) / n);
  CHECK(std::abs(m5 - 5.0) < 3.0 * se5);
  double m2 = sum2 / n, se2 = std::sqrt((sumsq2 / n - m2 * m2) / n);
  CHECK(std::abs(m2 - gamma_fn(2.0 / 3.0)) < 4.0 * se2);
  CHECK_THROWS_AS(sample_arrivals(0, s), std::domain_error);
}

TEST_CASE("frequency draws from the spectral measures") {
  SUBCASE("uniform ball moments and support") {
    SpectralMeasure mu = SpectralMeasure::ball(2, 1.0);
    RngStream s(21, 0);
    const int n = 1000000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd w = sample_frequencies(mu, 1, s)[0];
      CHECK(w.norm() <= 1.0);
      double v = std::abs(w(0));
      sum += v;
      sumsq += v * v;
    }
    double m = sum / n, se = std::sqrt((sumsq / n - m * m) / n);
    CHECK(std::abs(m - 4.0 / (3.0 * kPi)) < 3.0 * se);
  }
  SUBCASE("uniform box") {
    SpectralMeasure mu = SpectralMeasure::box({0.8});
    RngStream s(22, 0);
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
      double w = sample_frequencies(mu, 1, s)[0](0);
      CHECK(std::abs(w) <= 0.8);
      sum += std::abs(w);
      sumsq += w * w;
    }
    double m = sum / n, se = std::sqrt((sumsq / n - m * m) / n);
    CHECK(std::abs(m - 0.4) < 4.0 * se);
  }
  SUBCASE("tabulated product density") {
    // symmetric triangle on [-1, 1], finely tabulated
    SpectralMeasure mu;
    mu.kind = MeasureKind::product_density;
    mu.dimension = 1;
    mu.total_mass = 2.0;
    mu.grid_x.emplace_back();
    mu.grid_f.emplace_back();
    for (int i = 0; i <= 200; ++i) {
      double x = -1.0 + i / 100.0;
      mu.grid_x[0].push_back(x);
      mu.grid_f[0].push_back(1.0 - std::abs(x));
    }
    RngStream s(23, 0);
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
      double w = sample_frequencies(mu, 1, s)[0](0);
      CHECK(std::abs(w) <= 1.0);
      sum += w * w;
      sumsq += w * w * w * w;
    }
    // E w^2 = 1/6 for the triangle density
    double m = sum / n, se = std::sqrt((sumsq / n - m * m) / n);
    CHECK(std::abs(m - 1.0 / 6.0) < 4.0 * se + 1e-3);
    MeasureMoments mm = measure_moments(mu);
    CHECK(mm.second(0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-3));
    CHECK(mm.abs_first(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
  }
}

TEST_CASE("measure moments closed forms") {
  MeasureMoments ball = measure_moments(SpectralMeasure::ball(2, 3.0, 1.5));
  CHECK(ball.mu0 == doctest::Approx(1.5));
  CHECK(ball.second(0, 0) == doctest::Approx(9.0 / 4.0).epsilon(1e-12));
  CHECK(ball.second(1, 1) == doctest::Approx(9.0 / 4.0).epsilon(1e-12));
  CHECK(ball.second(0, 1) == doctest::Approx(0.0));
  CHECK(ball.abs_first(0) == doctest::Approx(ball.abs_first(1)).epsilon(1e-12));
  CHECK(ball.abs_first(0) == doctest::Approx(4.0 * 3.0 / (3.0 * kPi)).epsilon(1e-12));

  MeasureMoments box = measure_moments(SpectralMeasure::box({0.6}));
  CHECK(box.abs_first(0) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(box.second(0, 0) == doctest::Approx(0.36 / 3.0).epsilon(1e-12));
}

TEST_CASE("stream determinism and independence") {
  RngStream a(99, 4), b(99, 4), c(99, 5);
  double corr = 0.0;
  for (int i = 0; i < 100000; ++i) {
    double x = a.normal();
    CHECK(x == b.normal());
    corr += x * c.normal();
  }
  CHECK(std::abs(corr / 100000) < 0.01);
}

TEST_CASE("truncation tail guidance") {
  for (double alpha : {0.8, 1.2, 1.5}) {
    CHECK(truncation_tail_fraction(alpha, 2000) <
          truncation_tail_fraction(alpha, 1000));
    CHECK(truncation_tail_mean(alpha, 1000) ==
          doctest::Approx(std::pow(1000.0, 1.0 - 2.0 / alpha) / (2.0 / alpha - 1.0))
              .epsilon(1e-12));
  }
}
