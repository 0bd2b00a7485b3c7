#include "stablefields/geometry.hpp"

#include <Eigen/SVD>
#include <stdexcept>

#include "stablefields/special.hpp"

namespace stablefields {

double Rectangle::volume() const {
  double v = 1.0;
  for (double s : sides) v *= s;
  return v;
}

std::vector<Facet> facets_containing_origin(const Rectangle& T, int j) {
  const int N = T.dim();
  if (j < 0 || j > N)
    throw std::domain_error("facets_containing_origin: need 0 <= j <= N");
  std::vector<Facet> out;
  // enumerate axis subsets of size j
  std::vector<int> idx(j);
  for (int i = 0; i < j; ++i) idx[i] = i;
  while (true) {
    Facet f;
    f.axes = idx;
    f.measure = 1.0;
    for (int a : idx) f.measure *= T.sides[a];
    out.push_back(f);
    if (j == 0) break;
    int i = j - 1;
    while (i >= 0 && idx[i] == N - j + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int t = i + 1; t < j; ++t) idx[t] = idx[t - 1] + 1;
  }
  return out;
}

double lk_rectangle(const Rectangle& T, int j) {
  const int N = T.dim();
  if (j < 0) throw std::domain_error("lk_rectangle: j must be >= 0");
  if (j > N) return 0.0;
  // elementary symmetric polynomial via the usual DP
  std::vector<double> e(j + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < N; ++i)
    for (int k = std::min(j, i + 1); k >= 1; --k)
      e[k] += e[k - 1] * T.sides[i];
  return e[j];
}

double steiner_tube_volume(const std::vector<double>& lks, double rho,
                           int ambient_dim) {
  if (rho < 0.0) throw std::domain_error("steiner_tube_volume: rho must be >= 0");
  const int N = static_cast<int>(lks.size()) - 1;
  double v = 0.0;
  for (int j = 0; j <= N; ++j)
    v += ball_volume(ambient_dim - j) * std::pow(rho, ambient_dim - j) * lks[j];
  return v;
}

double support_function(const ConvexPolytope& M, const Eigen::VectorXd& direction) {
  if (M.vertices.empty())
    throw std::domain_error("support_function: empty vertex set");
  double h = -std::numeric_limits<double>::infinity();
  for (const auto& v : M.vertices) h = std::max(h, direction.dot(v));
  return h;
}

std::vector<double> crofton_lift(const std::vector<double>& coeffs, int j) {
  const int N = static_cast<int>(coeffs.size()) - 1;
  if (j < 0 || j > N) throw std::domain_error("crofton_lift: need 0 <= j <= N");
  std::vector<double> out(N - j + 1);
  for (int k = 0; k <= N - j; ++k) out[k] = flag_coeff(j + k, k) * coeffs[k];
  return out;
}

std::pair<double, double> det_rank_identity_check(
    const std::vector<Eigen::MatrixXd>& matrices,
    const std::vector<double>& scalars, int m) {
  if (matrices.empty() || matrices.size() != scalars.size())
    throw std::invalid_argument("det_rank_identity_check: size mismatch");
  const auto n = matrices.front().rows();
  if (static_cast<long>(matrices.size()) * m != n)
    throw std::invalid_argument(
        "det_rank_identity_check: need (#matrices)*m == dimension");
  Eigen::MatrixXd weighted = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd plain = Eigen::MatrixXd::Zero(n, n);
  double rpow = 1.0;
  for (size_t i = 0; i < matrices.size(); ++i) {
    const Eigen::MatrixXd& A = matrices[i];
    if (A.rows() != n || A.cols() != n)
      throw std::invalid_argument("det_rank_identity_check: non-square input");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto& sv = svd.singularValues();
    if (m < n && sv(m) > 1e-10 * sv(0))
      throw std::invalid_argument("det_rank_identity_check: rank exceeds m");
    weighted += scalars[i] * A;
    plain += A;
    for (int q = 0; q < m; ++q) rpow *= scalars[i];
  }
  return {weighted.determinant(), rpow * plain.determinant()};
}

}  // namespace stablefields
