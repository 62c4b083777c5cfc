#include "fsi/quadrature.hpp"

#include <cmath>
#include <functional>

#include "fsi/types.hpp"

namespace fsi {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// All compositions of `total` into `parts` non-negative integers, lexicographic.
void compositions(int total, int parts, std::vector<std::vector<int>>& out) {
  std::vector<int> current(parts, 0);
  std::function<void(int, int)> rec = [&](int slot, int remaining) {
    if (slot == parts - 1) {
      current[slot] = remaining;
      out.push_back(current);
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      current[slot] = v;
      rec(slot + 1, remaining - v);
    }
  };
  rec(0, total);
}

}  // namespace

QuadratureRule grundmann_moeller(int dim, int s) {
  if (dim != 2 && dim != 3) throw PreconditionError("grundmann_moeller: dim must be 2 or 3");
  if (s < 0) throw PreconditionError("grundmann_moeller: s must be non-negative");
  QuadratureRule rule;
  rule.dim = dim;
  const int d = 2 * s + 1;
  rule.degree = d;
  for (int i = 0; i <= s; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    const double denom = d + dim - 2 * i;
    const double w = sign * std::pow(2.0, -2 * s) * std::pow(denom, d) / (factorial(i) * factorial(d + dim - i));
    std::vector<std::vector<int>> betas;
    compositions(s - i, dim + 1, betas);
    for (const auto& beta : betas) {
      std::array<double, 4> p{0.0, 0.0, 0.0, 0.0};
      for (int k = 0; k <= dim; ++k) p[k] = (2.0 * beta[k] + 1.0) / denom;
      rule.points.push_back(p);
      rule.weights.push_back(w);
    }
  }
  return rule;
}

QuadratureRule tetrahedron_rule(int order) {
  const int s = order <= 1 ? 0 : (order) / 2;
  return grundmann_moeller(3, s);
}

QuadratureRule triangle_rule(int order) {
  const int s = order <= 1 ? 0 : (order) / 2;
  return grundmann_moeller(2, s);
}

}  // namespace fsi
