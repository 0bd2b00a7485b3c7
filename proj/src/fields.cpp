#include "stablefields/fields.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <istream>
#include <mutex>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "stablefields/special.hpp"

namespace stablefields {

namespace {

const double kPi = 3.14159265358979323846;

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

// in-place n-dimensional c2c transform, FFTW sign convention
void fft_nd(std::vector<std::complex<double>>& data, const std::vector<int>& dims,
            int sign) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());  // planning is not thread-safe
    plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(),
                         reinterpret_cast<fftw_complex*>(data.data()),
                         reinterpret_cast<fftw_complex*>(data.data()), sign,
                         FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

// normalized characteristic function of mu/mu_0 (radial closed forms for the
// ball, separable for box/tabulated kinds)
double measure_char(const SpectralMeasure& mu, const Eigen::VectorXd& h) {
  auto sinc = [](double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; };
  switch (mu.kind) {
    case MeasureKind::uniform_ball: {
      double x = mu.radius * h.norm();
      if (x < 1e-8) return 1.0;
      switch (mu.dimension) {
        case 1:
          return std::sin(x) / x;
        case 2:
          return 2.0 * std::cyl_bessel_j(1, x) / x;
        case 3:
          return 3.0 * (std::sin(x) - x * std::cos(x)) / (x * x * x);
        default:
          throw std::runtime_error("measure_char: ball kind supports N <= 3");
      }
    }
    case MeasureKind::uniform_box: {
      double c = 1.0;
      for (int i = 0; i < mu.dimension; ++i) c *= sinc(mu.half_widths[i] * h(i));
      return c;
    }
    case MeasureKind::product_density: {
      double c = 1.0;
      for (int i = 0; i < mu.dimension; ++i) {
        const auto& x = mu.grid_x[i];
        const auto& f = mu.grid_f[i];
        double num = 0.0, den = 0.0;
        for (size_t q = 1; q < x.size(); ++q) {
          double dx = x[q] - x[q - 1];
          num += 0.5 * (f[q] * std::cos(h(i) * x[q]) + f[q - 1] * std::cos(h(i) * x[q - 1])) * dx;
          den += 0.5 * (f[q] + f[q - 1]) * dx;
        }
        c *= num / den;
      }
      return c;
    }
  }
  return 1.0;
}

}  // namespace

GaussianFieldSpec GaussianFieldSpec::squared_exponential(int dim, double sigma2,
                                                         double l) {
  GaussianFieldSpec s;
  s.variance = sigma2;
  s.covariance_kind = CovKind::squared_exponential;
  s.length = l;
  s.spectral_moments = (sigma2 / (l * l)) * Eigen::MatrixXd::Identity(dim, dim);
  return s;
}

GaussianFieldSpec GaussianFieldSpec::from_measure(const SpectralMeasure& mu,
                                                  double sigma2) {
  GaussianFieldSpec s;
  s.variance = sigma2;
  s.covariance_kind = CovKind::from_spectral_measure;
  s.measure = mu;
  s.spectral_moments = sigma2 * measure_moments(mu).second;
  return s;
}

double GaussianFieldSpec::covariance(const Eigen::VectorXd& h) const {
  if (covariance_kind == CovKind::squared_exponential)
    return variance * std::exp(-h.squaredNorm() / (2.0 * length * length));
  return variance * measure_char(measure, h);
}

FieldGrid simulate_gaussian(const GaussianFieldSpec& spec, const Rectangle& T,
                            const std::vector<int>& resolution, RngStream stream) {
  const int N = T.dim();
  if (static_cast<int>(resolution.size()) != N)
    throw std::invalid_argument("simulate_gaussian: resolution/rectangle mismatch");
  if (spec.covariance_kind == CovKind::squared_exponential) {
    // resolve the kernel: spacing <= l/4
    for (int a = 0; a < N; ++a)
      if (T.sides[a] / (resolution[a] - 1) > spec.length / 4.0 + 1e-12)
        throw std::invalid_argument("simulate_gaussian: grid too coarse for kernel");
  }

  FieldGrid grid;
  grid.rectangle = T;
  grid.resolution = resolution;
  grid.provenance.field_kind = "gaussian";
  grid.provenance.master_seed = stream.master_seed;
  grid.provenance.stream_index = stream.stream_index;
  grid.provenance.sigma = std::sqrt(spec.variance);
  const long long nodes = grid.nodes();
  grid.values.resize(nodes);

  if (nodes < 4096) {
    // dense factorization fallback
    Eigen::MatrixXd C(nodes, nodes);
    std::vector<Eigen::VectorXd> pts(nodes, Eigen::VectorXd(N));
    for (long long p = 0; p < nodes; ++p) {
      long long rem = p;
      for (int a = N - 1; a >= 0; --a) {
        pts[p](a) = (rem % resolution[a]) * grid.spacing(a);
        rem /= resolution[a];
      }
    }
    for (long long i = 0; i < nodes; ++i)
      for (long long j = 0; j <= i; ++j) {
        double c = spec.covariance(pts[i] - pts[j]);
        C(i, j) = c;
        C(j, i) = c;
      }
    double jitter = 1e-12 * spec.variance;
    Eigen::LLT<Eigen::MatrixXd> llt;
    while (true) {
      llt.compute(C + jitter * Eigen::MatrixXd::Identity(nodes, nodes));
      if (llt.info() == Eigen::Success) break;
      jitter *= 10.0;
      if (jitter > 1e-5 * spec.variance)
        throw std::runtime_error("simulate_gaussian: covariance not factorizable");
    }
    Eigen::VectorXd z(nodes);
    for (long long i = 0; i < nodes; ++i) z(i) = stream.normal();
    Eigen::VectorXd y = llt.matrixL() * z;
    for (long long i = 0; i < nodes; ++i) grid.values[i] = y(i);
    return grid;
  }

  // circulant embedding
  std::vector<int> M(N);
  long long mtot = 1;
  for (int a = 0; a < N; ++a) {
    M[a] = next_pow2(2 * resolution[a]);
    mtot *= M[a];
  }
  std::vector<std::complex<double>> buf(mtot);
  // base covariance over the torus
  {
    Eigen::VectorXd h(N);
    for (long long p = 0; p < mtot; ++p) {
      long long rem = p;
      for (int a = N - 1; a >= 0; --a) {
        int k = static_cast<int>(rem % M[a]);
        rem /= M[a];
        int d = std::min(k, M[a] - k);
        h(a) = d * grid.spacing(a);
      }
      buf[p] = spec.covariance(h);
    }
  }
  fft_nd(buf, M, FFTW_FORWARD);
  double emax = 0.0, emin = 0.0;
  for (auto& e : buf) {
    emax = std::max(emax, e.real());
    emin = std::min(emin, e.real());
  }
  if (emin < -1e-8 * emax)
    throw std::runtime_error(
        "simulate_gaussian: embedding has negative eigenvalue " +
        std::to_string(emin) + " (max " + std::to_string(emax) + ")");
  for (auto& e : buf) {
    double lam = std::max(0.0, e.real());
    double scale = std::sqrt(lam / static_cast<double>(mtot));
    double re = stream.normal(), im = stream.normal();
    e = std::complex<double>(scale * re, scale * im);
  }
  fft_nd(buf, M, FFTW_BACKWARD);
  // real part on the subgrid
  for (long long p = 0; p < nodes; ++p) {
    long long rem = p, q = 0, strideacc = 1;
    // map row-major subgrid index to embedding index
    std::vector<int> idx(N);
    for (int a = N - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % resolution[a]);
      rem /= resolution[a];
    }
    (void)strideacc;
    for (int a = 0; a < N; ++a) q = q * M[a] + idx[a];
    grid.values[p] = buf[q].real();
  }
  return grid;
}

FieldGrid simulate_subgaussian(const GaussianFieldSpec& spec, double alpha,
                               const Rectangle& T,
                               const std::vector<int>& resolution,
                               RngStream stream) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::domain_error("simulate_subgaussian: alpha must be in (0,2)");
  double X = sample_positive_stable(alpha / 2.0, stream);
  FieldGrid grid = simulate_gaussian(spec, T, resolution, stream);
  grid.provenance.field_kind = "subgaussian";
  grid.provenance.alpha = alpha;
  grid.provenance.X = X;
  grid.provenance.gaussian_values = grid.values;
  double s = std::sqrt(X);
  for (auto& v : grid.values) v *= s;
  return grid;
}

namespace {

// accumulate Re(c * prod_a exp(i om_a x_a)) over the grid
void add_wave(FieldGrid& grid, const std::complex<double>& c,
              const Eigen::VectorXd& omega) {
  const int N = grid.dim();
  // per-axis phase tables
  std::vector<std::vector<std::complex<double>>> phase(N);
  for (int a = 0; a < N; ++a) {
    int R = grid.resolution[a];
    phase[a].resize(R);
    double th = omega(a) * grid.spacing(a);
    std::complex<double> step(std::cos(th), std::sin(th)), p(1.0, 0.0);
    for (int j = 0; j < R; ++j) {
      phase[a][j] = p;
      p *= step;
    }
  }
  const auto& last = phase[N - 1];
  const int R = grid.resolution[N - 1];
  long long outer = grid.nodes() / R;
  for (long long o = 0; o < outer; ++o) {
    std::complex<double> pre = c;
    long long rem = o;
    for (int a = N - 2; a >= 0; --a) {
      pre *= phase[a][rem % grid.resolution[a]];
      rem /= grid.resolution[a];
    }
    double pr = pre.real(), pi = pre.imag();
    double* v = grid.values.data() + o * R;
    for (int j = 0; j < R; ++j)
      v[j] += pr * last[j].real() - pi * last[j].imag();
  }
}

}  // namespace

FieldGrid simulate_concatenated(const SpectralMeasure& mu, double alpha,
                                int n_prime, int K, const Rectangle& T,
                                const std::vector<int>& resolution,
                                RngStream stream) {
  const int N = T.dim();
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::domain_error("simulate_concatenated: alpha must be in (0,2)");
  if (n_prime < 1 || n_prime > N)
    throw std::domain_error("simulate_concatenated: need 1 <= n_prime <= N");
  if (K < 1) throw std::domain_error("simulate_concatenated: K must be >= 1");

  FieldGrid grid;
  grid.rectangle = T;
  grid.resolution = resolution;
  grid.values.assign(grid.nodes(), 0.0);
  auto& prov = grid.provenance;
  prov.field_kind = n_prime == 1 ? "harmonisable" : "concatenated";
  prov.alpha = alpha;
  prov.master_seed = stream.master_seed;
  prov.stream_index = stream.stream_index;
  prov.truncation = K;
  prov.n_prime = n_prime;

  StableConstants sc = stable_constants(alpha);
  double gamma_alpha =
      std::pow(sc.c_alpha * mu.total_mass / sc.b_alpha, 1.0 / alpha);
  prov.gamma_alpha = gamma_alpha;

  ArrivalSequence arr = sample_arrivals(K, stream);
  prov.gammas = arr.gammas;
  prov.omegas.reserve(static_cast<size_t>(K) * n_prime * N);

  for (int k = 0; k < K; ++k) {
    double w = gamma_alpha * std::pow(arr.gammas[k], -1.0 / alpha);
    for (int l = 0; l < n_prime; ++l) {
      Eigen::VectorXd om = sample_frequencies(mu, 1, stream)[0];
      for (int a = 0; a < N; ++a) prov.omegas.push_back(om(a));
      double g1 = stream.normal(), g2 = stream.normal();
      // G1 cos<t,om> + G2 sin<t,om> = Re{(G1 - i G2) e^{i<t,om>}}
      add_wave(grid, std::complex<double>(w * g1, -w * g2), om);
    }
  }
  return grid;
}

FieldGrid simulate_harmonisable(const SpectralMeasure& mu, double alpha, int K,
                                const Rectangle& T,
                                const std::vector<int>& resolution,
                                RngStream stream) {
  return simulate_concatenated(mu, alpha, 1, K, T, resolution, stream);
}

ConditionedGaussianSpec conditioned_spec(const Provenance& prov, int dim) {
  if (prov.gammas.empty())
    throw std::invalid_argument("conditioned_spec: provenance has no draws");
  const int K = static_cast<int>(prov.gammas.size());
  const int np = prov.n_prime;
  if (static_cast<int>(prov.omegas.size()) != K * np * dim)
    throw std::invalid_argument("conditioned_spec: omega layout mismatch");
  ConditionedGaussianSpec cs;
  cs.gamma_alpha = prov.gamma_alpha;
  cs.lambda_tilde = Eigen::MatrixXd::Zero(dim, dim);
  double g2 = prov.gamma_alpha * prov.gamma_alpha;
  double s = 0.0;
  for (int k = 0; k < K; ++k) {
    double wk = std::pow(prov.gammas[k], -2.0 / prov.alpha);
    s += wk;
    for (int l = 0; l < np; ++l) {
      const double* om = prov.omegas.data() + (static_cast<size_t>(k) * np + l) * dim;
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) {
          double t = g2 * wk * om[i] * om[j];
          cs.lambda_tilde(i, j) += t;
          if (i != j) cs.lambda_tilde(j, i) += t;
        }
    }
  }
  cs.sigma_tilde_sq = g2 * np * s;
  return cs;
}

void dump_grid(const FieldGrid& grid, std::ostream& out) {
  nlohmann::json hdr;
  hdr["schema_version"] = 1;
  hdr["field_kind"] = grid.provenance.field_kind;
  hdr["dimension"] = grid.dim();
  hdr["resolution"] = grid.resolution;
  hdr["rectangle"] = grid.rectangle.sides;
  nlohmann::json prov;
  prov["alpha"] = grid.provenance.alpha;
  prov["master_seed"] = grid.provenance.master_seed;
  prov["stream_index"] = grid.provenance.stream_index;
  prov["truncation"] = grid.provenance.truncation;
  prov["n_prime"] = grid.provenance.n_prime;
  prov["gamma_alpha"] = grid.provenance.gamma_alpha;
  prov["X"] = grid.provenance.X;
  prov["sigma"] = grid.provenance.sigma;
  prov["gammas"] = grid.provenance.gammas;
  prov["omegas"] = grid.provenance.omegas;
  hdr["provenance"] = prov;
  out << hdr.dump() << "\n";
  out.write(reinterpret_cast<const char*>(grid.values.data()),
            static_cast<std::streamsize>(grid.values.size() * sizeof(double)));
}

FieldGrid load_grid(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_grid: missing header");
  nlohmann::json hdr = nlohmann::json::parse(line);
  FieldGrid grid;
  grid.resolution = hdr.at("resolution").get<std::vector<int>>();
  grid.rectangle.sides = hdr.at("rectangle").get<std::vector<double>>();
  const auto& prov = hdr.at("provenance");
  grid.provenance.field_kind = hdr.at("field_kind").get<std::string>();
  grid.provenance.alpha = prov.at("alpha").get<double>();
  grid.provenance.master_seed = prov.at("master_seed").get<std::uint64_t>();
  grid.provenance.stream_index = prov.at("stream_index").get<std::uint64_t>();
  grid.provenance.truncation = prov.at("truncation").get<int>();
  grid.provenance.n_prime = prov.at("n_prime").get<int>();
  grid.provenance.gamma_alpha = prov.at("gamma_alpha").get<double>();
  grid.provenance.X = prov.at("X").get<double>();
  grid.provenance.sigma = prov.at("sigma").get<double>();
  grid.provenance.gammas = prov.at("gammas").get<std::vector<double>>();
  grid.provenance.omegas = prov.at("omegas").get<std::vector<double>>();
  grid.values.resize(grid.nodes());
  in.read(reinterpret_cast<char*>(grid.values.data()),
          static_cast<std::streamsize>(grid.values.size() * sizeof(double)));
  if (!in) throw std::runtime_error("load_grid: truncated payload");
  return grid;
}

}  // namespace stablefields
