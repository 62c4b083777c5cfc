#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fsi/constitutive.hpp"
#include "fsi/discretization.hpp"
#include "fsi/fields.hpp"
#include "fsi/kinematics.hpp"

namespace fsi {

/// Weighted divergence rows q -> int q cof(grad A):grad psi over the fluid,
/// plus the pinned dofs (closures of gamma_in and gamma_2).
struct ConstraintMatrix {
  SparseMatrix div;  // num_pressure x num_dofs
  std::vector<int> pinned_dofs;
  int num_dofs = 0;

  /// Stacked residual [div u; u(pinned)].
  Eigen::VectorXd residual(const Eigen::VectorXd& u) const;
};

ConstraintMatrix build_constraint(const Discretization& d, const MapState& m);

struct DivFreeBasis {
  Eigen::MatrixXd ambient;  // num_dofs x n
  Eigen::MatrixXd free;     // free dofs x n
  std::vector<int> free_dofs;
  std::vector<int> free_index;  // ambient dof -> row of `free`, -1 when pinned
  int constraint_rank = 0;

  int dim() const { return static_cast<int>(ambient.cols()); }
  Eigen::VectorXd expand(const Eigen::VectorXd& coeffs) const { return ambient * coeffs; }
};

/// Numerical nullspace of the constraint (singular values below rel_threshold
/// times the largest), orthonormalized in the mass inner product. When a
/// stiffness matrix is given the basis diagonalizes it (ascending order).
DivFreeBasis build_divfree_basis(const ConstraintMatrix& c, const SparseMatrix& mass, const SparseMatrix* stiffness,
                                 double rel_threshold = 1e-10);

/// Weighted mass rho_f det(grad A) on the fluid and rho_s det(grad phi) on the solid.
SparseMatrix weighted_mass(const Discretization& d, const MapState& m, const MaterialParams& p);

struct GalerkinOperators {
  double time = 0.0;
  Eigen::MatrixXd mass;             // A
  Eigen::MatrixXd mass_fluid;       // fluid part of A
  Eigen::MatrixXd fluid_stiffness;  // S_n
  Eigen::MatrixXd stiffness_sym;    // int b d_beta psi_l,j d_alpha psi_k,i
  Eigen::MatrixXd stiffness_grad;   // int d_alpha b d_beta psi_l,j psi_k,i
  Eigen::VectorXd load;             // int_{gamma_c} g . psi_k
  Eigen::VectorXd lift_load;        // -int sigma(lift) : grad psi_k

  Eigen::MatrixXd structure_stiffness() const { return stiffness_sym + stiffness_grad; }
  Eigen::VectorXd forcing() const { return load + lift_load; }
};

/// Boundary datum g sampled at the interface facet quadrature points (facet * nqf + q).
using InterfaceDatum = std::vector<Vec3>;

Eigen::VectorXd load_vector(const Discretization& d, const DivFreeBasis& basis, const InterfaceDatum& g);

GalerkinOperators assemble_operators(const Discretization& d, const DivFreeBasis& basis, const MapState& m,
                                     const ElasticTensorField& b, const InterfaceDatum& g, const MaterialParams& p,
                                     int threads = 1, const Eigen::VectorXd* lift = nullptr);

/// Unified initial field: v0 on fluid nodes (interface included), xi1 on the
/// solid-only nodes. Throws PreconditionError naming the first interface dof
/// where the two disagree by more than tol.
Eigen::VectorXd unify_initial(const Discretization& d, const VectorField& v0, const VectorField& xi1, double tol = 1e-10);

/// Coefficients of the mass-orthogonal projection onto the basis.
Eigen::VectorXd project_initial(const DivFreeBasis& basis, const SparseMatrix& mass, const Eigen::VectorXd& gamma0);

}  // namespace fsi
