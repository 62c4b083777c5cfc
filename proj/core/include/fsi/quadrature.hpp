#pragma once

#include <array>
#include <vector>

namespace fsi {

/// Quadrature on the reference simplex of dimension 2 or 3. Points are given in
/// barycentric coordinates (dim + 1 entries used); weights sum to 1 / dim!.
struct QuadratureRule {
  int dim = 3;
  int degree = 0;
  std::vector<std::array<double, 4>> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Grundmann-Moeller rule exact for polynomials of total degree 2s+1.
QuadratureRule grundmann_moeller(int dim, int s);

/// Smallest Grundmann-Moeller rule on the tetrahedron exact to `order`.
QuadratureRule tetrahedron_rule(int order);

/// Smallest Grundmann-Moeller rule on the triangle exact to `order`.
QuadratureRule triangle_rule(int order);

}  // namespace fsi
