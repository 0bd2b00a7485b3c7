#include "stablefields/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "stablefields/special.hpp"

namespace stablefields {

namespace {
const double kPi = 3.14159265358979323846;

// inverse-CDF sampler for a tabulated piecewise-linear 1-D density
double sample_tabulated(const std::vector<double>& x,
                        const std::vector<double>& f, RngStream& stream) {
  // trapezoid CDF
  const size_t n = x.size();
  std::vector<double> cdf(n, 0.0);
  for (size_t i = 1; i < n; ++i)
    cdf[i] = cdf[i - 1] + 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
  double u = stream.uniform() * cdf.back();
  size_t i = 1;
  while (i < n - 1 && cdf[i] < u) ++i;
  double seg = cdf[i] - cdf[i - 1];
  double t = seg > 0 ? (u - cdf[i - 1]) / seg : 0.5;
  return x[i - 1] + t * (x[i] - x[i - 1]);
}

void tabulated_moments(const std::vector<double>& x,
                       const std::vector<double>& f, double& mass,
                       double& abs_first, double& second) {
  mass = abs_first = second = 0.0;
  for (size_t i = 1; i < x.size(); ++i) {
    double h = x[i] - x[i - 1];
    mass += 0.5 * (f[i] + f[i - 1]) * h;
    abs_first += 0.5 * (std::abs(x[i]) * f[i] + std::abs(x[i - 1]) * f[i - 1]) * h;
    second += 0.5 * (x[i] * x[i] * f[i] + x[i - 1] * x[i - 1] * f[i - 1]) * h;
  }
  if (mass <= 0.0)
    throw std::runtime_error("spectral measure: non-integrable tabulated density");
  abs_first /= mass;
  second /= mass;
}

}  // namespace

SpectralMeasure SpectralMeasure::ball(int dim, double R, double mass) {
  SpectralMeasure m;
  m.kind = MeasureKind::uniform_ball;
  m.dimension = dim;
  m.radius = R;
  m.total_mass = mass;
  return m;
}

SpectralMeasure SpectralMeasure::box(const std::vector<double>& hw, double mass) {
  SpectralMeasure m;
  m.kind = MeasureKind::uniform_box;
  m.dimension = static_cast<int>(hw.size());
  m.half_widths = hw;
  m.total_mass = mass;
  return m;
}

double kanter_a(double a, double phi) {
  // A(phi) = sin((1-a)phi) sin(a phi)^{a/(1-a)} / sin(phi)^{1/(1-a)}
  return std::sin((1.0 - a) * phi) *
         std::pow(std::sin(a * phi), a / (1.0 - a)) /
         std::pow(std::sin(phi), 1.0 / (1.0 - a));
}

double sample_positive_stable(double index, RngStream& stream) {
  if (!(index > 0.0 && index < 1.0))
    throw std::domain_error("sample_positive_stable: index must be in (0,1)");
  const double a = index;
  double u = kPi * stream.uniform();
  double w = stream.exponential();
  return std::pow(kanter_a(a, u) / w, (1.0 - a) / a);
}

ArrivalSequence sample_arrivals(int K, RngStream& stream) {
  if (K < 1) throw std::domain_error("sample_arrivals: K must be >= 1");
  ArrivalSequence seq;
  seq.truncation = K;
  seq.gammas.resize(K);
  double t = 0.0;
  for (int k = 0; k < K; ++k) {
    t += stream.exponential();
    seq.gammas[k] = t;
  }
  return seq;
}

std::vector<Eigen::VectorXd> sample_frequencies(const SpectralMeasure& mu,
                                                int count, RngStream& stream) {
  if (count < 1) throw std::domain_error("sample_frequencies: count must be >= 1");
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  const int N = mu.dimension;
  switch (mu.kind) {
    case MeasureKind::uniform_ball: {
      for (int c = 0; c < count; ++c) {
        Eigen::VectorXd v(N);
        while (true) {  // rejection from the bounding cube
          double r2 = 0.0;
          for (int i = 0; i < N; ++i) {
            v(i) = (2.0 * stream.uniform() - 1.0) * mu.radius;
            r2 += v(i) * v(i);
          }
          if (r2 <= mu.radius * mu.radius) break;
        }
        out.push_back(v);
      }
      break;
    }
    case MeasureKind::uniform_box: {
      for (int c = 0; c < count; ++c) {
        Eigen::VectorXd v(N);
        for (int i = 0; i < N; ++i)
          v(i) = (2.0 * stream.uniform() - 1.0) * mu.half_widths[i];
        out.push_back(v);
      }
      break;
    }
    case MeasureKind::product_density: {
      if (static_cast<int>(mu.grid_x.size()) != N)
        throw std::runtime_error("sample_frequencies: bad tabulated measure");
      for (int c = 0; c < count; ++c) {
        Eigen::VectorXd v(N);
        for (int i = 0; i < N; ++i)
          v(i) = sample_tabulated(mu.grid_x[i], mu.grid_f[i], stream);
        out.push_back(v);
      }
      break;
    }
    default:
      throw std::runtime_error("sample_frequencies: unsupported measure kind");
  }
  return out;
}

MeasureMoments measure_moments(const SpectralMeasure& mu) {
  const int N = mu.dimension;
  MeasureMoments m;
  m.mu0 = mu.total_mass;
  m.abs_first = Eigen::VectorXd::Zero(N);
  m.second = Eigen::MatrixXd::Zero(N, N);
  switch (mu.kind) {
    case MeasureKind::uniform_ball: {
      double abs1 =
          2.0 * ball_volume(N - 1) * mu.radius / ((N + 1) * ball_volume(N));
      for (int i = 0; i < N; ++i) {
        m.abs_first(i) = abs1;
        m.second(i, i) = mu.radius * mu.radius / (N + 2);
      }
      break;
    }
    case MeasureKind::uniform_box: {
      for (int i = 0; i < N; ++i) {
        m.abs_first(i) = mu.half_widths[i] / 2.0;
        m.second(i, i) = mu.half_widths[i] * mu.half_widths[i] / 3.0;
      }
      break;
    }
    case MeasureKind::product_density: {
      for (int i = 0; i < N; ++i) {
        double mass, a1, s2;
        tabulated_moments(mu.grid_x[i], mu.grid_f[i], mass, a1, s2);
        m.abs_first(i) = a1;
        m.second(i, i) = s2;
      }
      // product structure: off-diagonal E[w_i w_j] = E[w_i] E[w_j]; for the
      // symmetric tabulated densities used here these are zero, and we do not
      // support asymmetric tables for simplicity
      break;
    }
  }
  return m;
}

double truncation_tail_fraction(double alpha, int K) {
  double head = 0.0;
  for (int k = 1; k <= K; ++k) head += std::pow(k, -2.0 / alpha);
  return truncation_tail_mean(alpha, K) / head;
}

double truncation_tail_mean(double alpha, int K) {
  // integral bound for sum_{k>K} k^{-2/alpha}; requires 2/alpha > 1
  double p = 2.0 / alpha;
  return std::pow(K, 1.0 - p) / (p - 1.0);
}

}  // namespace stablefields
