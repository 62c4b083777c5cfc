#include <gtest/gtest.h>

#include "fsi/assembly.hpp"
#include "fsi/solvers.hpp"
#include "two_cube_problem.hpp"

namespace {

const fsi::Problem& problem() {
  static const fsi::Problem pb(oracle::two_cube_p2(), fsi::MaterialParams{}, fsi::SolverConfig{});
  return pb;
}

TEST(Assembly, ConstraintHasOneRowPerPressureDof) {
  const auto& pb = problem();
  EXPECT_EQ(pb.constraint.div.rows(), 27);
  EXPECT_EQ(pb.constraint.div.cols(), 675);
  EXPECT_FALSE(pb.constraint.pinned_dofs.empty());
}

TEST(Assembly, BasisSatisfiesConstraint) {
  const auto& pb = problem();
  ASSERT_GT(pb.basis.dim(), 0);
  for (int k = 0; k < pb.basis.dim(); ++k)
    EXPECT_LE(pb.constraint.residual(pb.basis.ambient.col(k)).lpNorm<Eigen::Infinity>(), 1e-10) << "column " << k;
}

TEST(Assembly, BasisIsMassOrthonormal) {
  const auto& pb = problem();
  const Eigen::MatrixXd G = pb.basis.ambient.transpose() * (pb.mass0 * pb.basis.ambient);
  EXPECT_LE((G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Assembly, DimensionIsFreeDofsMinusRank) {
  const auto& pb = problem();
  EXPECT_EQ(pb.basis.dim(), static_cast<int>(pb.basis.free_dofs.size()) - pb.basis.constraint_rank);
}

TEST(Assembly, EmptyNullspaceIsReported) {
  // Pin every dof: nothing is left.
  const auto& pb = problem();
  fsi::ConstraintMatrix c = pb.constraint;
  c.pinned_dofs.clear();
  for (int i = 0; i < c.num_dofs; ++i) c.pinned_dofs.push_back(i);
  try {
    fsi::build_divfree_basis(c, pb.mass0, nullptr);
    FAIL();
  } catch (const fsi::Error& e) {
    EXPECT_NE(std::string(e.what()).find("W_n is empty"), std::string::npos);
  }
}

TEST(Assembly, OperatorsAtRestAreSymmetricAndDefinite) {
  const auto& pb = problem();
  const auto& d = pb.disc;
  const auto m = fsi::identity_map_state(d);
  const auto b = fsi::evaluate_elastic_field(d, Eigen::VectorXd::Zero(d.num_dofs()), pb.params,
                                             fsi::CoefficientGradient::Projection, &pb.projector);
  const auto ops = fsi::assemble_operators(d, pb.basis, m, b, {}, pb.params);
  const int n = pb.basis.dim();
  EXPECT_LE((ops.mass - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((ops.fluid_stiffness - ops.fluid_stiffness.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((ops.stiffness_sym - ops.stiffness_sym.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(ops.stiffness_grad.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(ops.fluid_stiffness).eigenvalues().minCoeff(), -1e-12);
  EXPECT_LE(ops.load.norm(), 0.0);
}

TEST(Assembly, ThreadCountDoesNotChangeOperators) {
  const auto& pb = problem();
  const auto& d = pb.disc;
  Eigen::VectorXd xi = 0.01 * oracle::smooth_data(d, 1.0);
  const auto m = fsi::identity_map_state(d);
  const auto b = fsi::evaluate_elastic_field(d, xi, pb.params, fsi::CoefficientGradient::Projection, &pb.projector);
  const auto a1 = fsi::assemble_operators(d, pb.basis, m, b, {}, pb.params, 1);
  const auto a2 = fsi::assemble_operators(d, pb.basis, m, b, {}, pb.params, 3);
  const double scale = a1.stiffness_sym.cwiseAbs().maxCoeff();
  EXPECT_LE((a1.stiffness_sym - a2.stiffness_sym).cwiseAbs().maxCoeff(), 1e-13 * scale);
  EXPECT_LE((a1.stiffness_grad - a2.stiffness_grad).cwiseAbs().maxCoeff(), 1e-13 * scale);
}

TEST(Assembly, LoadVectorOfConstantDatum) {
  // int_{gamma_c} g . psi_k with g = e_x equals the x-flux of each basis function over the interface.
  const auto& pb = problem();
  const auto& d = pb.disc;
  std::size_t npts = 0;
  for (const auto& f : d.interface) npts += f.jxw.size();
  const fsi::InterfaceDatum g(npts, fsi::Vec3::UnitX());
  const Eigen::VectorXd l = fsi::load_vector(d, pb.basis, g);
  Eigen::VectorXd direct = Eigen::VectorXd::Zero(pb.basis.dim());
  for (const auto& f : d.interface)
    for (std::size_t q = 0; q < f.jxw.size(); ++q)
      for (int a = 0; a < d.npc; ++a) {
        const int dof = 3 * d.space.node(f.solid_cell, a);
        direct += f.jxw[q] * f.solid_phi[q * d.npc + a] * pb.basis.ambient.row(dof).transpose();
      }
  EXPECT_LE((l - direct).norm(), 1e-14);
}

TEST(Assembly, UnifyInitialNamesMismatchedDof) {
  const auto& d = oracle::two_cube_p2();
  fsi::VectorField v{oracle::uniform_data(d, fsi::Vec3(1, 0, 0)), fsi::Support::Fluid};
  fsi::VectorField x{Eigen::VectorXd::Zero(d.num_dofs()), fsi::Support::Solid};
  try {
    fsi::unify_initial(d, v, x);
    FAIL();
  } catch (const fsi::PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("dof"), std::string::npos);
  }
  x.values = v.values;
  EXPECT_NO_THROW(fsi::unify_initial(d, v, x));
}

TEST(Assembly, ProjectionIsIdempotent) {
  const auto& pb = problem();
  const Eigen::VectorXd g = oracle::smooth_data(pb.disc, 1e-3);
  const Eigen::VectorXd f = fsi::project_initial(pb.basis, pb.mass0, g);
  const Eigen::VectorXd f2 = fsi::project_initial(pb.basis, pb.mass0, pb.basis.expand(f));
  EXPECT_LE((f - f2).norm(), 1e-12 * f.norm());
}

}  // namespace
