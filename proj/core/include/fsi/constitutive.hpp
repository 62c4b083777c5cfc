#pragma once

#include <array>
#include <vector>

#include "fsi/discretization.hpp"
#include "fsi/kinematics.hpp"

namespace fsi {

struct MaterialParams {
  double rho_f = 1.0;
  double rho_s = 1.0;
  double mu = 0.01;
  double mu_s = 1.0;
  double lambda_s = 1.0;
  double C_penalty = 10.0;

  /// Throws PreconditionError naming the first invalid parameter.
  void validate() const;
};

Mat3 green_lagrange(const Mat3& F);
/// S = 2 mu_s E + lambda_s tr(E) Id.
Mat3 second_piola(const Mat3& E, double mu_s, double lambda_s);
/// P = (Id+H)(mu_s(H+H^T+H^T H) + lambda_s/2 (2 tr H + |H|^2) Id).
Mat3 first_piola(const Mat3& H, double mu_s, double lambda_s);
/// (det F - 1) cof F with F = Id + H.
Mat3 quasi_inc_stress(const Mat3& H);

/// Saint Venant-Kirchhoff tangent split by polynomial degree in H.
struct SvkParts {
  Tensor4 constant{}, linear{}, quadratic{};
  Tensor4 sum() const;
};

SvkParts svk_parts(const Mat3& H, double mu_s, double lambda_s);
Tensor4 svk_coefficients(const Mat3& H, double mu_s, double lambda_s);

/// Quasi-incompressibility tangent split by degree 0..4 in H.
struct QuasiIncParts {
  std::array<Tensor4, 5> degree{};
  Tensor4 sum() const;
};

/// d cof(F)_{i alpha} / d F_{j beta} = eps_jni eps_{beta q alpha} F_nq (linear in F).
Tensor4 cofactor_derivative(const Mat3& F);
QuasiIncParts quasi_inc_parts(const Mat3& H);
Tensor4 quasi_inc_coefficients(const Mat3& H);

Tensor4 combined_coefficients(const Mat3& H, const MaterialParams& p);

/// Directional derivatives d/ds T(H + sG) at s = 0, in closed form.
Tensor4 svk_derivative(const Mat3& H, const Mat3& G, double mu_s, double lambda_s);
Tensor4 quasi_inc_derivative(const Mat3& H, const Mat3& G);
Tensor4 combined_derivative(const Mat3& H, const Mat3& G, const MaterialParams& p);

/// sum_{j beta} T_{i alpha j beta} A_{j beta}
Mat3 contract(const Tensor4& T, const Mat3& A);

/// How the spatial derivative of the coefficients is obtained.
enum class CoefficientGradient { Projection, Hessian };

/// b at the solid quadrature points (layout cell * nq + q) together with
/// w_{i j beta} = sum_alpha d_alpha b_{i alpha j beta}, stored as w[(i*3+j)*3+beta].
struct ElasticTensorField {
  std::vector<Tensor4> coeffs;
  std::vector<std::array<double, 27>> div_coeffs;
  std::vector<Mat3> grad_xi;
};

/// L2 projection of a displacement gradient onto the continuous solid space.
class GradientProjector {
 public:
  explicit GradientProjector(const Discretization& d);
  /// Returns per node the 3x3 projected gradient (zero away from the solid).
  std::vector<Mat3> project(const Eigen::VectorXd& xi) const;

 private:
  const Discretization* d_;
  std::vector<int> index_;  // node -> solid scalar index
  int n_ = 0;
  Eigen::SimplicialLDLT<SparseMatrix> solver_;
};

ElasticTensorField evaluate_elastic_field(const Discretization& d, const Eigen::VectorXd& xi, const MaterialParams& p,
                                          CoefficientGradient mode, const GradientProjector* projector);

/// b and grad xi at the solid-side quadrature points of each interface facet,
/// flattened as facet * nqf + q.
struct FacetElasticField {
  std::vector<Tensor4> coeffs;
  std::vector<Mat3> grad_xi;
};

FacetElasticField evaluate_facet_field(const Discretization& d, const Eigen::VectorXd& xi, const MaterialParams& p);

/// (div P)_i = sum b_{i alpha j beta} d_alpha d_beta xi_j at the solid quadrature points.
std::vector<Vec3> piola_divergence(const Discretization& d, const ElasticTensorField& b, const Eigen::VectorXd& xi);

/// One sample of the traction reconstruction: coefficients, grad xi and grad d_t xi at the points.
struct TractionSample {
  double time = 0.0;
  std::vector<Tensor4> coeffs;
  std::vector<Mat3> grad_xi;
  std::vector<Mat3> grad_rate;
};

/// sum_{alpha j beta} (int_0^t c d_s d_beta xi_j ds) n_alpha by the trapezoid rule.
std::vector<Vec3> boundary_traction_integral(const std::vector<TractionSample>& history, const std::vector<Vec3>& normals);

/// mu (grad v Finv + Finv^T grad v^T) cof F.
Mat3 fluid_viscous_stress(const Mat3& grad_v, const Mat3& F_inv, const Mat3& cof, double mu);
/// viscous part minus p cof F.
Mat3 lagrangian_fluid_stress(const Mat3& grad_v, double p, const Mat3& F_inv, const Mat3& cof, double mu);
TensorField lagrangian_fluid_stress(const Discretization& d, const TensorField& grad_v, const std::vector<double>& p,
                                    const MapState& m, double mu);

}  // namespace fsi
