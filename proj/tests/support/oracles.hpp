#pragma once

// Test-side reference computations written without the library's kernels.

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

/// Determinant by cofactor expansion along the first row.
double det_expansion(const Mat3& F);
/// Cofactor matrix from explicit 2x2 minors.
Mat3 cofactor_minors(const Mat3& F);

/// First Piola stress of Saint Venant-Kirchhoff written in the displacement gradient.
Mat3 svk_piola(const Mat3& H, double mu_s, double lambda_s);
/// (det F - 1) cof F with F = I + H.
Mat3 penalty_stress(const Mat3& H);

/// dP_{i a}/dH_{j b} by central differences, flat (i, a, j, b).
std::array<double, 81> central_tangent(const std::function<Mat3(const Mat3&)>& P, const Mat3& H, double eps);

/// Closed-form implicit midpoint amplification for y' = lambda y.
double midpoint_factor(double lambda, double dt);

/// Tensor-product Gauss-Legendre integral over the box [lo, hi].
double box_integral(const std::function<double(const Vec3&)>& f, const Vec3& lo, const Vec3& hi, int points = 6);

/// Trapezoidal sum of dt * (a_k + a_{k+1}) / 2.
double trapezoid(const std::vector<double>& t, const std::vector<double>& a);

}  // namespace oracle
