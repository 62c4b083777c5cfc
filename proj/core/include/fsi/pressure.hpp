#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fsi/constitutive.hpp"
#include "fsi/discretization.hpp"
#include "fsi/kinematics.hpp"

namespace fsi {

struct PressureField {
  Eigen::VectorXd values;  // per fluid vertex, ordered by Discretization::pressure_vertex
  double time = 0.0;
  double residual_dual = 0.0;  // dual norm of the momentum residual after recovery
  double load_dual = 0.0;      // dual norm of the residual before recovery
};

struct InfSupReport {
  double beta_h = 0.0;
  int velocity_degree = 0;
  int velocity_dofs = 0;
  int pressure_dofs = 0;
  double threshold = 0.0;
  bool pass = false;
};

/// Velocity test space for pressure recovery: fluid dofs that are neither
/// pinned nor on the interface, with its H1 Gram matrix factorized once.
class PressureSystem {
 public:
  explicit PressureSystem(const Discretization& d);

  const std::vector<int>& test_dofs() const { return test_dofs_; }
  /// b(z, q) = -int q cof(grad A) : grad z, rows = test dofs.
  SparseMatrix divergence_form(const MapState& m) const;
  /// rho_f det(grad A) d_t v . z + sigma_f(v) : grad z over the fluid.
  Eigen::VectorXd momentum_residual(const Eigen::VectorXd& v, const Eigen::VectorXd& dtv, const MapState& m,
                                    const MaterialParams& p) const;
  double dual_norm(const Eigen::VectorXd& r) const;

  /// Least-squares pressure minimizing the dual norm of residual + b(., p).
  /// Throws SolveError when the normal equations are singular.
  PressureField recover(const Eigen::VectorXd& v, const Eigen::VectorXd& dtv, const MapState& m,
                        const MaterialParams& p, double time) const;

  /// beta_h^2 = smallest eigenvalue of B K^{-1} B^T against the pressure mass matrix.
  InfSupReport infsup(const MapState& m, double threshold) const;

 private:
  const Discretization* d_;
  std::vector<int> test_dofs_;
  std::vector<int> test_index_;
  Eigen::SimplicialLDLT<SparseMatrix> gram_;
};

PressureField recover_pressure(const Discretization& d, const Eigen::VectorXd& v, const Eigen::VectorXd& dtv,
                               const MapState& m, const MaterialParams& p, double time = 0.0);

InfSupReport measure_infsup(const Discretization& d, const MapState& m, double threshold = 1e-3);

}  // namespace fsi
