#pragma once

#include <Eigen/Dense>
#include <vector>

#include "stablefields/rng.hpp"

// Random sampling primitives: positive strictly stable variables, Poisson
// arrival times, and spectral-measure frequency draws.

namespace stablefields {

enum class MeasureKind { uniform_ball, uniform_box, product_density };

// The control measure mu: compactly supported with a bounded density.
// total_mass is mu_0; the density shape is normalized to a probability
// internally.  product_density is a per-axis tabulated density (piecewise
// linear), the measure being the product over axes.
struct SpectralMeasure {
  MeasureKind kind = MeasureKind::uniform_ball;
  int dimension = 1;
  double total_mass = 1.0;
  double radius = 1.0;                      // uniform_ball
  std::vector<double> half_widths;          // uniform_box
  std::vector<std::vector<double>> grid_x;  // product_density, per axis
  std::vector<std::vector<double>> grid_f;  // product_density, per axis

  static SpectralMeasure ball(int dim, double R, double mass = 1.0);
  static SpectralMeasure box(const std::vector<double>& half_widths,
                             double mass = 1.0);
};

struct MeasureMoments {
  double mu0 = 0.0;
  Eigen::VectorXd abs_first;  // mu_j = E|omega_j|
  Eigen::MatrixXd second;     // E[omega_i omega_j]
};

struct ArrivalSequence {
  std::vector<double> gammas;  // strictly increasing arrival times
  int truncation = 0;
};

// Draw of the positive strictly stable X with Laplace transform
// E e^{-tX} = e^{-t^index}, 0 < index < 1 (Kanter's representation).
double sample_positive_stable(double index, RngStream& stream);

// Kanter's auxiliary function A(phi) on (0, pi) for the given index.
double kanter_a(double index, double phi);

ArrivalSequence sample_arrivals(int K, RngStream& stream);

std::vector<Eigen::VectorXd> sample_frequencies(const SpectralMeasure& mu,
                                                int count, RngStream& stream);

MeasureMoments measure_moments(const SpectralMeasure& mu);

// Guidance for the series truncation: deterministic proxy for the fraction of
// E[sum Gamma_k^{-2/alpha}] lost beyond K (integral tail bound over head sum).
double truncation_tail_fraction(double alpha, int K);

// Mean of the discarded tail sum_{k>K} Gamma_k^{-2/alpha} (integral bound).
double truncation_tail_mean(double alpha, int K);

}  // namespace stablefields
