#pragma once

#include <vector>

#include "stablefields/fields.hpp"
#include "stablefields/geometry.hpp"

// Excursion-set extraction and discrete geometry: cubical-complex Euler
// characteristic, LK-curvature estimates, 1-D upcrossings, and an independent
// 2-D EC oracle.

namespace stablefields {

// Closed-vertex cubical complex: a k-cell is included iff all 2^k of its
// vertices are, so inclusion is monotone under threshold decrease.
struct CubicalSet {
  std::vector<int> dims;           // vertex counts per axis
  std::vector<unsigned char> vertices;  // row-major, last axis fastest
  std::vector<long long> cell_counts;   // n_0 .. n_N

  int dim() const { return static_cast<int>(dims.size()); }
};

struct ExcursionGeometry {
  double level = 0.0;
  long long euler = 0;
  std::vector<double> lk_estimates;     // L^_0 .. L^_N
  std::vector<long long> cell_counts;   // n_0 .. n_N
};

CubicalSet threshold(const FieldGrid& grid, double u);

// Build directly from a binary vertex grid (tests, oracles).
CubicalSet cubical_from_vertices(const std::vector<int>& dims,
                                 const std::vector<unsigned char>& vertices);

long long euler_characteristic(const CubicalSet& set);

// L^_0 = euler, L^_N = top-cell volume; intermediate curvatures by digital
// Crofton slicing (multi-direction lines in 2-D, axis-aligned flats in 3-D,
// calibrated so a solid axis-aligned rectangle is recovered).
ExcursionGeometry lk_estimates(const CubicalSet& set, const Rectangle& T,
                               double level);

struct Upcrossings {
  long long count = 0;
  int start_above = 0;
};

Upcrossings upcrossings_1d(const FieldGrid& grid, double u);

// Independent check: 4-connected foreground components minus bounded
// 8-connected complement components.
long long euler_oracle_2d(const CubicalSet& set);

}  // namespace stablefields
