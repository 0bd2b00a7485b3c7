#pragma once

// Special functions and alpha-dependent constants shared by every
// theoretical formula in the library.

namespace stablefields {

// Gamma function, Lanczos approximation with reflection for negative
// arguments.  Relative accuracy better than 1e-12 on (0, 35).
double gamma_fn(double x);
double log_gamma(double x);  // x > 0

// Probabilists' Hermite polynomial H_n.  The n = -1 convention is
// H_{-1}(x) = sqrt(2*pi) * Psi(x) * exp(x^2/2).
double hermite(int n, double x);

// Upper Gaussian tail Psi(x) = P{N(0,1) > x}.
double gaussian_tail(double x);

// rho_n(u) = (2*pi)^{-(n+1)/2} H_{n-1}(u) exp(-u^2/2); rho_0 == Psi.
double rho(int n, double u);

// Volume of the unit j-ball, omega_j = pi^{j/2} / Gamma(j/2 + 1).
double ball_volume(int j);

// Flag coefficient [N j] = C(N,j) * omega_N / (omega_{N-j} * omega_j).
double flag_coeff(int N, int j);

struct StableConstants {
  double alpha;
  double c_alpha;      // C_alpha = (Gamma(1-alpha) cos(pi alpha/2))^{-1}, 2/pi at alpha=1
  double b_alpha;      // 2^{alpha/2} Gamma(1 + alpha/2)
  double sigma_alpha;  // cos(pi alpha/4)^{2/alpha}
  double tail_const;   // C_{alpha/2} * sigma_alpha^{alpha/2}
};

StableConstants stable_constants(double alpha);  // 0 < alpha < 2

double binomial(int n, int k);

}  // namespace stablefields
