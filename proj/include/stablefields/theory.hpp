#pragma once

#include <vector>

#include "stablefields/fields.hpp"
#include "stablefields/geometry.hpp"
#include "stablefields/rng.hpp"
#include "stablefields/sampling.hpp"

// Closed-form and asymptotic predictors: the exact Gaussian expected-EC/LK
// formulas, the stable asymptotes with their constants, the conditional
// Gaussian identities, and the Tauberian limit constants.

namespace stablefields {

// Coefficient of u^{-alpha} in a mean-EC asymptote, with its per-facet-
// dimension breakdown (constant = sum of breakdown).  constant_se > 0 when a
// Monte Carlo ingredient (Lambda(J)) enters.
struct AsymptoticPrediction {
  double alpha = 0.0;
  double constant = 0.0;
  std::vector<double> breakdown;
  double constant_se = 0.0;
};

// E{phi(A_u)} for a stationary Gaussian field on the rectangle T:
//   sum_n sum_{J in O_n} |J| |det Lambda_J|^{1/2} sigma^{-n} rho_n(u/sigma),
// the n = 0 term being Psi(u/sigma).
double gaussian_mean_ec(const GaussianFieldSpec& spec, const Rectangle& T,
                        double u);

// Isotropic case, E{L_j(A_u)}:
//   sum_{n=0}^{N-j} flag(n+j, n) rho_n(u/sigma) (lambda2/sigma^2)^{n/2} L_{n+j}(M)
// where lambda2 is the (unnormalized) second spectral moment and lks_of_M
// holds L_0(M)..L_N(M).
double gaussian_mean_lk_isotropic(double sigma, double lambda2,
                                  const std::vector<double>& lks_of_M, int j,
                                  double u);

// Sub-Gaussian asymptote constants K_0..K_N for base deviation sigma_g.
std::vector<double> subgaussian_constants(double alpha, double sigma_g, int N);

// Coefficient of u^{-alpha}: K_0 + sum_n K_n sum_{J in O_n} |J||det Lambda_J|^{1/2}
AsymptoticPrediction subgaussian_mean_ec_asymptote(
    const std::vector<double>& constants, const Rectangle& T,
    const Eigen::MatrixXd& lambda);

// Exact finite-u predictor E_X[gaussian_mean_ec(spec, T, u/sqrt(X))], by
// two-dimensional quadrature over Kanter's representation of the positive
// alpha/2-stable X.
double subgaussian_mean_ec_exact(const GaussianFieldSpec& spec, double alpha,
                                 const Rectangle& T, double u);

// lim u^{alpha+beta} E[X^{-beta/2} e^{-u^2/(2 sigma_g^2 X)}], X positive
// alpha/2-stable with E e^{-tX} = e^{-t^{alpha/2}}.
double tauberian_limit(double alpha, double beta, double sigma_g);

// lim u^alpha E[Psi(u/(sigma_g sqrt(X)))].
double psi_tauberian_limit(double alpha, double sigma_g);

// Harmonisable asymptote on a rectangle:
//   C_alpha mu_0 (2^{alpha/2-1} Gamma((1+alpha)/2)/(sqrt(pi) b_alpha)
//                 + (1/2pi) sum_j mu_j T_j)
AsymptoticPrediction harmonisable_mean_ec_asymptote(const MeasureMoments& moments,
                                                    double alpha,
                                                    const Rectangle& T);

// General convex-body version: the rectangle sum is replaced by the
// support-function integral (1/2pi) int (h_M(w) - h_M(-w)) mu(dw)/mu_0,
// evaluated by Monte Carlo over mu.
AsymptoticPrediction harmonisable_mean_ec_asymptote_polytope(
    const SpectralMeasure& mu, double alpha, const ConvexPolytope& M,
    RngStream stream, int mc_draws = 200000);

// The inner conditional-Gaussian expression: Psi(u/sigma~) plus the facet sum
// with the conditioned Lambda~.  Averaging over provenance draws gives an
// exact finite-u predictor for the stable field's mean EC.
double conditional_gaussian_mean_ec(const ConditionedGaussianSpec& cspec,
                                    const Rectangle& T, double u);

struct FacetLambda {
  std::vector<int> axes;
  double value = 0.0;  // Lambda(J) = E |det W_k(J)|^{1/2}
  double se = 0.0;
};

struct ConcatenatedConstants {
  double alpha = 0.0;
  int n_prime = 0;
  double k0 = 0.0;
  std::vector<double> kn;            // K_1..K_N'
  std::vector<FacetLambda> lambdas;  // all facets J with 1 <= |J| <= N'
};

// Theorem constants for the concatenated-harmonisable field; Lambda(J) has no
// closed form and is estimated by MC over frequency draws.
ConcatenatedConstants concatenated_constants(double alpha, int n_prime,
                                             const SpectralMeasure& mu, int N,
                                             RngStream stream,
                                             int mc_draws = 200000);

// Coefficient of u^{-alpha}: mu_0 C_alpha (K_0 + sum_n K_n sum_J |J| Lambda(J)),
// with the Lambda MC error propagated into constant_se.
AsymptoticPrediction concatenated_mean_ec_asymptote(
    const ConcatenatedConstants& constants, const SpectralMeasure& mu,
    const Rectangle& T);

// lim u^{alpha+2beta-n} E[Gamma_1^{-n/alpha} X^{-beta} e^{-u^2/(2 gamma^2 X)}]
// with X = sum_k Gamma_k^{-2/alpha}.
double lemma_last_limit(double alpha, int n, double beta, double gamma);

// Crofton lift of per-L_k EC coefficients to E{L_j(A_u)} coefficients.
AsymptoticPrediction stable_mean_lk_asymptote(const AsymptoticPrediction& ec_pred,
                                              int j);

}  // namespace stablefields
