#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "stablefields/geometry.hpp"
#include "stablefields/rng.hpp"
#include "stablefields/sampling.hpp"

// Simulators for the four field classes: stationary Gaussian, sub-Gaussian,
// harmonisable SaS and concatenated-harmonisable SaS.

namespace stablefields {

enum class CovKind { squared_exponential, from_spectral_measure };

struct GaussianFieldSpec {
  double variance = 1.0;  // sigma^2
  Eigen::MatrixXd spectral_moments;  // lambda_ij, symmetric positive definite
  CovKind covariance_kind = CovKind::squared_exponential;
  double length = 1.0;       // squared_exponential length scale
  SpectralMeasure measure;   // from_spectral_measure

  // isotropic squared-exponential kernel; lambda_ij = (sigma^2/l^2) delta_ij
  static GaussianFieldSpec squared_exponential(int dim, double sigma2, double l);
  static GaussianFieldSpec from_measure(const SpectralMeasure& mu, double sigma2);

  // covariance at lag h
  double covariance(const Eigen::VectorXd& h) const;
};

// Everything needed to reconstruct the conditional law of a realization.
struct Provenance {
  std::string field_kind;  // "gaussian", "subgaussian", "harmonisable", "concatenated"
  double alpha = 0.0;      // 0 for plain Gaussian
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
  int truncation = 0;  // K
  int n_prime = 0;
  double gamma_alpha = 0.0;
  double X = 0.0;                       // sub-Gaussian scaling draw
  std::vector<double> gaussian_values;  // sub-Gaussian: the underlying g grid
  std::vector<double> gammas;           // arrival times
  // frequencies, flattened [k][l][axis]; size K * n_prime * N
  std::vector<double> omegas;
  double sigma = 0.0;  // Gaussian base sigma_g (gaussian/subgaussian kinds)
};

struct FieldGrid {
  Rectangle rectangle;
  std::vector<int> resolution;  // points per axis (row-major, last axis fastest)
  std::vector<double> values;
  Provenance provenance;

  int dim() const { return static_cast<int>(resolution.size()); }
  long long nodes() const {
    long long n = 1;
    for (int r : resolution) n *= r;
    return n;
  }
  double spacing(int axis) const {
    return rectangle.sides[axis] / (resolution[axis] - 1);
  }
};

FieldGrid simulate_gaussian(const GaussianFieldSpec& spec, const Rectangle& T,
                            const std::vector<int>& resolution, RngStream stream);

FieldGrid simulate_subgaussian(const GaussianFieldSpec& spec, double alpha,
                               const Rectangle& T,
                               const std::vector<int>& resolution,
                               RngStream stream);

FieldGrid simulate_harmonisable(const SpectralMeasure& mu, double alpha, int K,
                                const Rectangle& T,
                                const std::vector<int>& resolution,
                                RngStream stream);

FieldGrid simulate_concatenated(const SpectralMeasure& mu, double alpha,
                                int n_prime, int K, const Rectangle& T,
                                const std::vector<int>& resolution,
                                RngStream stream);

struct ConditionedGaussianSpec {
  double sigma_tilde_sq = 0.0;
  Eigen::MatrixXd lambda_tilde;
  double gamma_alpha = 0.0;
};

// sigma~^2 and lambda~_ij recomputed from the stored (Gamma, omega) draws.
ConditionedGaussianSpec conditioned_spec(const Provenance& prov, int dim);

// Grid dump: one-line JSON header then row-major little-endian float64.
void dump_grid(const FieldGrid& grid, std::ostream& out);
FieldGrid load_grid(std::istream& in);

}  // namespace stablefields
