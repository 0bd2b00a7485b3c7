#include "stablefields/excursion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace stablefields {

namespace {

const double kPi = 3.14159265358979323846;

std::vector<long long> row_major_strides(const std::vector<int>& dims) {
  const int N = static_cast<int>(dims.size());
  std::vector<long long> s(N);
  long long acc = 1;
  for (int a = N - 1; a >= 0; --a) {
    s[a] = acc;
    acc *= dims[a];
  }
  return s;
}

// count cells per dimension under the closed-vertex rule: for every axis
// subset S, a cell at base vertex v exists iff all vertices v+e, e <= S, are in
void count_cells(CubicalSet& set) {
  const int N = set.dim();
  const auto strides = row_major_strides(set.dims);
  set.cell_counts.assign(N + 1, 0);
  for (int mask = 0; mask < (1 << N); ++mask) {
    std::vector<long long> offs;
    for (int sub = mask;; sub = (sub - 1) & mask) {
      long long o = 0;
      for (int a = 0; a < N; ++a)
        if (sub & (1 << a)) o += strides[a];
      offs.push_back(o);
      if (sub == 0) break;
    }
    std::vector<int> limits(N);
    for (int a = 0; a < N; ++a)
      limits[a] = set.dims[a] - ((mask >> a) & 1);
    bool empty = false;
    for (int a = 0; a < N; ++a)
      if (limits[a] <= 0) empty = true;
    if (empty) continue;

    long long cnt = 0;
    std::vector<int> c(N, 0);
    long long base = 0;
    const unsigned char* v = set.vertices.data();
    while (true) {
      bool all = true;
      for (long long o : offs)
        if (!v[base + o]) {
          all = false;
          break;
        }
      if (all) ++cnt;
      int a = N - 1;
      while (a >= 0) {
        ++c[a];
        base += strides[a];
        if (c[a] < limits[a]) break;
        base -= static_cast<long long>(c[a]) * strides[a];
        c[a] = 0;
        --a;
      }
      if (a < 0) break;
    }
    set.cell_counts[__builtin_popcount(static_cast<unsigned>(mask))] += cnt;
  }
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[a] = b;
  }
};

// chi of a 1-D binary sequence sampled with the given stride
long long runs_1d(const unsigned char* v, int n, long long stride) {
  long long runs = 0;
  bool prev = false;
  for (int i = 0; i < n; ++i) {
    bool cur = v[i * stride] != 0;
    if (cur && !prev) ++runs;
    prev = cur;
  }
  return runs;
}

// digital Cauchy-Crofton boundary-length estimate in 2-D:
// L_1 = (pi/2) * mean over directions of  Int chi(A cap line_p) dp
double crofton_l1_2d(const CubicalSet& set, const Rectangle& T) {
  const int n0 = set.dims[0], n1 = set.dims[1];
  const double h0 = T.sides[0] / (n0 - 1), h1 = T.sides[1] / (n1 - 1);
  const double step = 0.5 * std::min(h0, h1);
  const int M = 96;
  const unsigned char* v = set.vertices.data();
  double acc = 0.0;
  for (int m = 0; m < M; ++m) {
    double th = kPi * (m + 0.5) / M;
    double dx = std::cos(th), dy = std::sin(th);
    double nx = -dy, ny = dx;
    double pmin = 1e300, pmax = -1e300, tmin = 1e300, tmax = -1e300;
    for (int cx = 0; cx < 2; ++cx)
      for (int cy = 0; cy < 2; ++cy) {
        double x = cx * T.sides[0], y = cy * T.sides[1];
        double p = x * nx + y * ny, t = x * dx + y * dy;
        pmin = std::min(pmin, p); pmax = std::max(pmax, p);
        tmin = std::min(tmin, t); tmax = std::max(tmax, t);
      }
    double integral = 0.0;
    for (double p = pmin + 0.5 * step; p < pmax; p += step) {
      long long runs = 0;
      bool prev = false;
      for (double t = tmin + 0.5 * step; t < tmax; t += step) {
        double x = p * nx + t * dx, y = p * ny + t * dy;
        int i = static_cast<int>(std::lround(x / h0));
        int j = static_cast<int>(std::lround(y / h1));
        bool cur = i >= 0 && i < n0 && j >= 0 && j < n1 &&
                   v[static_cast<long long>(i) * n1 + j] != 0;
        if (cur && !prev) ++runs;
        prev = cur;
      }
      integral += runs * step;
    }
    acc += integral;
  }
  return 0.5 * kPi * acc / M;
}

// trapezoid weight across one axis of vertex positions
double trap_weight(int i, int n, double h) {
  return (i == 0 || i == n - 1) ? 0.5 * h : h;
}

long long euler_2d_subgrid(const unsigned char* v, int n0, int n1,
                           long long s0, long long s1) {
  // n0 - n1 + n2 over the 2-D slice
  long long v0 = 0, e0 = 0, e1 = 0, f = 0;
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      if (!v[i * s0 + j * s1]) continue;
      ++v0;
      bool r = i + 1 < n0 && v[(i + 1) * s0 + j * s1];
      bool u = j + 1 < n1 && v[i * s0 + (j + 1) * s1];
      if (r) ++e0;
      if (u) ++e1;
      if (r && u && v[(i + 1) * s0 + (j + 1) * s1]) ++f;
    }
  return v0 - e0 - e1 + f;
}

}  // namespace

CubicalSet cubical_from_vertices(const std::vector<int>& dims,
                                 const std::vector<unsigned char>& vertices) {
  CubicalSet set;
  set.dims = dims;
  set.vertices = vertices;
  long long n = 1;
  for (int d : dims) n *= d;
  if (static_cast<long long>(vertices.size()) != n)
    throw std::invalid_argument("cubical_from_vertices: size mismatch");
  count_cells(set);
  return set;
}

CubicalSet threshold(const FieldGrid& grid, double u) {
  CubicalSet set;
  set.dims = grid.resolution;
  set.vertices.resize(grid.values.size());
  for (size_t i = 0; i < grid.values.size(); ++i)
    set.vertices[i] = grid.values[i] >= u ? 1 : 0;
  count_cells(set);
  return set;
}

long long euler_characteristic(const CubicalSet& set) {
  long long chi = 0;
  for (size_t k = 0; k < set.cell_counts.size(); ++k)
    chi += (k % 2 == 0 ? 1 : -1) * set.cell_counts[k];
  return chi;
}

ExcursionGeometry lk_estimates(const CubicalSet& set, const Rectangle& T,
                               double level) {
  const int N = set.dim();
  if (N > 3) throw std::invalid_argument("lk_estimates: only N <= 3 supported");
  ExcursionGeometry g;
  g.level = level;
  g.cell_counts = set.cell_counts;
  g.euler = euler_characteristic(set);
  g.lk_estimates.assign(N + 1, 0.0);
  g.lk_estimates[0] = static_cast<double>(g.euler);

  double cellvol = 1.0;
  std::vector<double> h(N);
  for (int a = 0; a < N; ++a) {
    h[a] = T.sides[a] / (set.dims[a] - 1);
    cellvol *= h[a];
  }
  g.lk_estimates[N] = set.cell_counts[N] * cellvol;

  if (N == 2) {
    g.lk_estimates[1] = crofton_l1_2d(set, T);
  } else if (N == 3) {
    const auto strides = row_major_strides(set.dims);
    const unsigned char* v = set.vertices.data();
    // L_2: line slices along each axis, trapezoid-weighted over the
    // transverse plane (exact for a solid rectangle)
    double l2 = 0.0;
    for (int a = 0; a < 3; ++a) {
      int b = (a + 1) % 3, c = (a + 2) % 3;
      for (int ib = 0; ib < set.dims[b]; ++ib)
        for (int ic = 0; ic < set.dims[c]; ++ic) {
          long long base = ib * strides[b] + ic * strides[c];
          long long chi = runs_1d(v + base, set.dims[a], strides[a]);
          l2 += chi * trap_weight(ib, set.dims[b], h[b]) *
                trap_weight(ic, set.dims[c], h[c]);
        }
    }
    g.lk_estimates[2] = l2;
    // L_1: plane slices perpendicular to each axis
    double l1 = 0.0;
    for (int a = 0; a < 3; ++a) {
      int b = (a + 1) % 3, c = (a + 2) % 3;
      for (int ia = 0; ia < set.dims[a]; ++ia) {
        long long chi = euler_2d_subgrid(v + ia * strides[a], set.dims[b],
                                         set.dims[c], strides[b], strides[c]);
        l1 += chi * trap_weight(ia, set.dims[a], h[a]);
      }
    }
    g.lk_estimates[1] = l1;
  }
  return g;
}

Upcrossings upcrossings_1d(const FieldGrid& grid, double u) {
  if (grid.dim() != 1)
    throw std::invalid_argument("upcrossings_1d: grid must be one-dimensional");
  Upcrossings r;
  r.start_above = grid.values[0] >= u ? 1 : 0;
  for (size_t i = 0; i + 1 < grid.values.size(); ++i)
    if (grid.values[i] < u && grid.values[i + 1] >= u) ++r.count;
  return r;
}

long long euler_oracle_2d(const CubicalSet& set) {
  if (set.dim() != 2)
    throw std::invalid_argument("euler_oracle_2d: set must be two-dimensional");
  const int n0 = set.dims[0], n1 = set.dims[1];
  const unsigned char* v = set.vertices.data();
  auto at = [&](int i, int j) { return v[static_cast<long long>(i) * n1 + j] != 0; };
  UnionFind fg(n0 * n1), bg(n0 * n1);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      int id = i * n1 + j;
      if (at(i, j)) {  // 4-connectivity
        if (i + 1 < n0 && at(i + 1, j)) fg.unite(id, id + n1);
        if (j + 1 < n1 && at(i, j + 1)) fg.unite(id, id + 1);
      } else {  // 8-connectivity
        if (i + 1 < n0 && !at(i + 1, j)) bg.unite(id, id + n1);
        if (j + 1 < n1 && !at(i, j + 1)) bg.unite(id, id + 1);
        if (i + 1 < n0 && j + 1 < n1 && !at(i + 1, j + 1)) bg.unite(id, id + n1 + 1);
        if (i + 1 < n0 && j > 0 && !at(i + 1, j - 1)) bg.unite(id, id + n1 - 1);
      }
    }
  std::vector<unsigned char> fg_seen(n0 * n1, 0), bg_border(n0 * n1, 0),
      bg_seen(n0 * n1, 0);
  long long comps = 0, holes = 0;
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j)
      if (!at(i, j) && (i == 0 || j == 0 || i == n0 - 1 || j == n1 - 1))
        bg_border[bg.find(i * n1 + j)] = 1;
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      int id = i * n1 + j;
      if (at(i, j)) {
        int r = fg.find(id);
        if (!fg_seen[r]) {
          fg_seen[r] = 1;
          ++comps;
        }
      } else {
        int r = bg.find(id);
        if (!bg_seen[r]) {
          bg_seen[r] = 1;
          if (!bg_border[r]) ++holes;
        }
      }
    }
  return comps - holes;
}

}  // namespace stablefields
