#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "stablefields/excursion.hpp"
#include "stablefields/fields.hpp"

using namespace stablefields;

namespace {

Rectangle rect(std::initializer_list<double> sides) {
  Rectangle T;
  T.sides = sides;
  return T;
}

double head_sum(const std::vector<double>& gammas, double alpha, size_t upto) {
  double s = 0.0;
  for (size_t k = 0; k < upto; ++k) s += std::pow(gammas[k], -2.0 / alpha);
  return s;
}

}  // namespace

TEST_CASE("gaussian covariance model") {
  auto spec = GaussianFieldSpec::squared_exponential(2, 4.0, 0.5);
  CHECK(spec.spectral_moments(0, 0) == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(spec.spectral_moments(0, 1) == doctest::Approx(0.0));
  Eigen::VectorXd h = Eigen::VectorXd::Zero(2);
  CHECK(spec.covariance(h) == doctest::Approx(4.0));
  h << 0.3, -0.4;
  CHECK(spec.covariance(h) ==
        doctest::Approx(4.0 * std::exp(-0.25 / (2.0 * 0.25))).epsilon(1e-12));
  Eigen::VectorXd mh = -h;
  CHECK(spec.covariance(h) == doctest::Approx(spec.covariance(mh)));

  auto ms = GaussianFieldSpec::from_measure(SpectralMeasure::ball(2, 3.0), 1.0);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(2);
  CHECK(ms.covariance(z) == doctest::Approx(1.0).epsilon(1e-9));
  h << 0.2, 0.1;
  CHECK(std::abs(ms.covariance(h)) <= 1.0 + 1e-12);
  CHECK(ms.spectral_moments(0, 0) == doctest::Approx(9.0 / 4.0).epsilon(1e-9));
}

TEST_CASE("gaussian simulation moments, dense path") {
  auto spec = GaussianFieldSpec::squared_exponential(2, 1.0, 0.5);
  Rectangle T = rect({1.0, 1.0});
  std::vector<int> res{16, 16};
  const int reps = 2000;
  double s0 = 0, s00 = 0, s01 = 0;
  Eigen::VectorXd lag(2);
  for (int r = 0; r < reps; ++r) {
    FieldGrid g = simulate_gaussian(spec, T, res, RngStream(42, r));
    double a = g.values[0];
    double b = g.values[3];  // lag (0, 3h) along the fast axis
    s0 += a;
    s00 += a * a;
    s01 += a * b;
  }
  lag << 0.0, 3.0 * (1.0 / 15.0);
  double mean = s0 / reps, var = s00 / reps - mean * mean;
  double cov = s01 / reps - mean * mean;
  CHECK(std::abs(mean) < 3.0 * std::sqrt(1.0 / reps));
  CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / reps));
  CHECK(std::abs(cov - spec.covariance(lag)) < 4.0 * std::sqrt(2.0 / reps));
}

TEST_CASE("gaussian simulation, circulant embedding path") {
  // 8193 nodes forces the spectral path; derivative variance recovers lambda2
  auto spec = GaussianFieldSpec::squared_exponential(1, 1.0, 0.5);
  double lambda2 = spec.spectral_moments(0, 0);
  Rectangle T = rect({512.0});
  std::vector<int> res{8193};
  double h = T.sides[0] / (res[0] - 1);
  CHECK(h < 0.5 / 4.0);  // sampling precondition
  double sv = 0, sd = 0;
  long long nv = 0, nd = 0;
  for (int r = 0; r < 4; ++r) {
    FieldGrid g = simulate_gaussian(spec, T, res, RngStream(7, r));
    for (int i = 0; i < res[0]; ++i) {
      sv += g.values[i] * g.values[i];
      ++nv;
      if (i + 1 < res[0]) {
        double d = (g.values[i + 1] - g.values[i]) / h;
        sd += d * d;
        ++nd;
      }
    }
  }
  CHECK(std::abs(sv / nv - 1.0) < 0.05);
  CHECK(std::abs(sd / nd - lambda2) / lambda2 < 0.05);
}

TEST_CASE("subgaussian structure") {
  auto spec = GaussianFieldSpec::squared_exponential(2, 1.0, 0.5);
  Rectangle T = rect({1.0, 1.0});
  std::vector<int> res{12, 12};
  FieldGrid f = simulate_subgaussian(spec, 1.5, T, res, RngStream(3, 9));
  REQUIRE(f.provenance.field_kind == "subgaussian");
  REQUIRE(f.provenance.X > 0.0);
  REQUIRE(f.provenance.gaussian_values.size() == f.values.size());
  double rootx = std::sqrt(f.provenance.X);
  for (size_t i = 0; i < f.values.size(); ++i)
    CHECK(f.values[i] == f.provenance.gaussian_values[i] * rootx);

  // excursion sets transform exactly: A_u(f) = A_{u/sqrt X}(g)
  FieldGrid g = f;
  g.values = f.provenance.gaussian_values;
  for (double u : {-1.0, 0.3, 2.0}) {
    CubicalSet a = threshold(f, u);
    CubicalSet b = threshold(g, u / rootx);
    CHECK(a.vertices == b.vertices);
  }
}

TEST_CASE("subgaussian marginal: gaussian core and stable tail") {
  auto spec = GaussianFieldSpec::squared_exponential(1, 1.0, 0.5);
  Rectangle T = rect({0.5});
  std::vector<int> res{8};
  const double alpha = 1.5;
  const int reps = 200000;
  double s1 = 0, s2 = 0;
  int hi10 = 0, hi20 = 0;
  for (int r = 0; r < reps; ++r) {
    FieldGrid f = simulate_subgaussian(spec, alpha, T, res, RngStream(10, r));
    double z = f.values[4] / std::sqrt(f.provenance.X);
    s1 += z;
    s2 += z * z;
    if (f.values[4] > 10.0) ++hi10;
    if (f.values[4] > 20.0) ++hi20;
  }
  // de-scaled values are standard Gaussian
  CHECK(std::abs(s1 / reps) < 3.0 / std::sqrt(static_cast<double>(reps)));
  CHECK(std::abs(s2 / reps - 1.0) < 3.0 * std::sqrt(2.0 / reps));
  // regularly varying tail: u^alpha P{f > u} flat between u = 10 and u = 20
  double t10 = std::pow(10.0, alpha) * hi10 / reps;
  double t20 = std::pow(20.0, alpha) * hi20 / reps;
  REQUIRE(hi20 > 100);
  CHECK(std::abs(t10 / t20 - 1.0) < 0.3);
}

TEST_CASE("harmonisable conditional law") {
  SpectralMeasure mu = SpectralMeasure::ball(1, 2.0);
  const double alpha = 1.3;
  Rectangle T = rect({1.0});
  std::vector<int> res{8};
  const int reps = 20000, K = 50;
  double z2 = 0, z3 = 0, z4 = 0;
  for (int r = 0; r < reps; ++r) {
    FieldGrid f = simulate_harmonisable(mu, alpha, K, T, res, RngStream(6, r));
    ConditionedGaussianSpec c = conditioned_spec(f.provenance, 1);
    // independent recomputation of sigma~^2 from the stored arrivals
    double manual = f.provenance.gamma_alpha * f.provenance.gamma_alpha *
                    head_sum(f.provenance.gammas, alpha, K);
    REQUIRE(c.sigma_tilde_sq == doctest::Approx(manual).epsilon(1e-10));
    double z = f.values[0] / std::sqrt(c.sigma_tilde_sq);
    z2 += z * z;
    z3 += z * z * z;
    z4 += z * z * z * z;
  }
  // f(0) given (Gamma, omega) is centred Gaussian with variance sigma~^2
  CHECK(std::abs(z2 / reps - 1.0) < 3.0 * std::sqrt(2.0 / reps));
  CHECK(std::abs(z3 / reps) < 4.0 * std::sqrt(15.0 / reps));
  CHECK(std::abs(z4 / reps - 3.0) < 4.0 * std::sqrt(96.0 / reps));
}

TEST_CASE("single-term harmonisable field is a plane wave") {
  SpectralMeasure mu = SpectralMeasure::ball(1, 3.0);
  Rectangle T = rect({2.0});
  std::vector<int> res{64};
  FieldGrid f = simulate_harmonisable(mu, 1.5, 1, T, res, RngStream(8, 0));
  double w = f.provenance.omegas[0];
  double h = f.spacing(0);
  double amp = 0.0;
  for (double v : f.values) amp = std::max(amp, std::abs(v));
  REQUIRE(amp > 0.0);
  // r cos(w t + phi) satisfies f(t+h) + f(t-h) = 2 cos(w h) f(t)
  for (int i = 1; i + 1 < res[0]; ++i)
    CHECK(std::abs(f.values[i + 1] + f.values[i - 1] -
                   2.0 * std::cos(w * h) * f.values[i]) < 1e-9 * amp);
}

TEST_CASE("concatenated field") {
  SpectralMeasure mu = SpectralMeasure::ball(2, 2.0);
  Rectangle T = rect({1.0, 1.0});
  std::vector<int> res{10, 10};
  SUBCASE("n_prime = 1 coincides with the harmonisable simulator") {
    FieldGrid a = simulate_harmonisable(mu, 1.5, 200, T, res, RngStream(12, 5));
    FieldGrid b = simulate_concatenated(mu, 1.5, 1, 200, T, res, RngStream(12, 5));
    CHECK(a.values == b.values);
  }
  SUBCASE("conditional variance scales with n_prime") {
    FieldGrid f = simulate_concatenated(mu, 1.5, 2, 100, T, res, RngStream(13, 2));
    ConditionedGaussianSpec c = conditioned_spec(f.provenance, 2);
    double manual = 2.0 * f.provenance.gamma_alpha * f.provenance.gamma_alpha *
                    head_sum(f.provenance.gammas, 1.5, 100);
    CHECK(c.sigma_tilde_sq == doctest::Approx(manual).epsilon(1e-10));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.lambda_tilde);
    CHECK(es.eigenvalues().minCoeff() > -1e-12 * es.eigenvalues().maxCoeff());
  }
  SUBCASE("symmetry") {
    const int reps = 20000;
    double z3 = 0;
    for (int r = 0; r < reps; ++r) {
      FieldGrid f = simulate_concatenated(mu, 1.5, 2, 30, T, {4, 4},
                                          RngStream(14, r));
      ConditionedGaussianSpec c = conditioned_spec(f.provenance, 2);
      double z = f.values[0] / std::sqrt(c.sigma_tilde_sq);
      z3 += z * z * z;
    }
    CHECK(std::abs(z3 / reps) < 4.0 * std::sqrt(15.0 / reps));
  }
}

TEST_CASE("conditioned spec rank structure at K = 1") {
  SpectralMeasure mu = SpectralMeasure::ball(2, 2.0);
  FieldGrid f = simulate_harmonisable(mu, 1.5, 1, rect({1.0, 1.0}), {8, 8},
                                      RngStream(17, 0));
  ConditionedGaussianSpec c = conditioned_spec(f.provenance, 2);
  // lambda~ = gamma^2 Gamma_1^{-2/alpha} w w^T: rank one
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.lambda_tilde);
  CHECK(es.eigenvalues()(0) < 1e-12 * es.eigenvalues()(1));
  Eigen::Vector2d w(f.provenance.omegas[0], f.provenance.omegas[1]);
  double scale = c.gamma_alpha * c.gamma_alpha *
                 std::pow(f.provenance.gammas[0], -2.0 / 1.5);
  CHECK(c.lambda_tilde(0, 1) == doctest::Approx(scale * w(0) * w(1)).epsilon(1e-9));
}

TEST_CASE("grid dump/load roundtrip") {
  SpectralMeasure mu = SpectralMeasure::ball(2, 2.0);
  FieldGrid f = simulate_concatenated(mu, 1.2, 2, 25, rect({1.0, 2.0}), {6, 9},
                                      RngStream(19, 3));
  std::stringstream buf;
  dump_grid(f, buf);
  FieldGrid g = load_grid(buf);
  CHECK(g.values == f.values);
  CHECK(g.resolution == f.resolution);
  CHECK(g.rectangle.sides == f.rectangle.sides);
  CHECK(g.provenance.field_kind == f.provenance.field_kind);
  CHECK(g.provenance.alpha == f.provenance.alpha);
  CHECK(g.provenance.n_prime == f.provenance.n_prime);
  CHECK(g.provenance.gammas == f.provenance.gammas);
  CHECK(g.provenance.omegas == f.provenance.omegas);
  CHECK(g.provenance.gamma_alpha == f.provenance.gamma_alpha);
}

TEST_CASE("series truncation stability") {
  SpectralMeasure mu = SpectralMeasure::ball(1, 2.0);
  const double alpha = 1.5;
  const int K = 2000;
  FieldGrid f = simulate_harmonisable(mu, alpha, K, rect({1.0}), {8},
                                      RngStream(23, 0));
  double half = head_sum(f.provenance.gammas, alpha, K / 2);
  double full = head_sum(f.provenance.gammas, alpha, K);
  double q1 = head_sum(f.provenance.gammas, alpha, K / 4);
  // the conditional variance is dominated by the early arrivals, so doubling
  // the truncation moves it by little -- and less the further out we go
  CHECK((full - half) / full < 0.05);
  CHECK((full - half) / full < (full - q1) / full);
}
