#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

// Deterministic integral geometry of rectangles and convex polytopes.

namespace stablefields {

struct Rectangle {
  std::vector<double> sides;  // T_1, ..., T_N, all positive
  int dim() const { return static_cast<int>(sides.size()); }
  double volume() const;
};

// A facet of the rectangle containing the origin, identified by its axis set.
struct Facet {
  std::vector<int> axes;  // 0-based coordinate indices sigma(J)
  double measure;         // |J| = product of the selected side lengths (1 if empty)
  int dimension() const { return static_cast<int>(axes.size()); }
};

struct ConvexPolytope {
  std::vector<Eigen::VectorXd> vertices;
};

// The C(N,j) j-dimensional facets of T containing the origin.
std::vector<Facet> facets_containing_origin(const Rectangle& T, int j);

// L_j(T): elementary symmetric polynomial of degree j in the side lengths.
// Returns 0 for j > N.
double lk_rectangle(const Rectangle& T, int j);

// Steiner expansion sum_{j=0..N} omega_{N'-j} rho^{N'-j} L_j.
double steiner_tube_volume(const std::vector<double>& lks, double rho,
                           int ambient_dim);

// h_M(direction) = max over vertices of <direction, vertex>.
double support_function(const ConvexPolytope& M, const Eigen::VectorXd& direction);

// Given EC coefficients C_0(u)..C_N(u) multiplying L_0(M)..L_N(M), returns the
// N-j+1 coefficients flag(j+k,k)*C_k multiplying L_{j+k}(M) in E{L_j(A_u)}.
std::vector<double> crofton_lift(const std::vector<double>& coeffs, int j);

// Determinant identity for rank-deficient sums: with p = n/m matrices of rank
// <= m, returns (det(sum r_j A_j), (prod r_j)^m det(sum A_j)).  The rank
// precondition is checked numerically (relative singular value cutoff 1e-10),
// and p*m must equal the matrix dimension n for the identity to hold.
std::pair<double, double> det_rank_identity_check(
    const std::vector<Eigen::MatrixXd>& matrices,
    const std::vector<double>& scalars, int m);

}  // namespace stablefields
