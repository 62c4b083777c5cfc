#include <random>

#include <gtest/gtest.h>

#include "fsi/kinematics.hpp"
#include "fsi_fixtures/two_cube.hpp"
#include "oracles.hpp"
#include "random.hpp"

namespace {

using fsi::Mat3;
using fsi::Vec3;

TEST(Kinematics, LeviCivitaDeterminantMatchesExpansion) {
  std::mt19937_64 rng(1);
  for (int s = 0; s < 200; ++s) {
    const Mat3 F = Mat3::Identity() + oracle::random_matrix(rng, 0.8);
    EXPECT_NEAR(fsi::levi_civita_det(F), oracle::det_expansion(F), 1e-14);
  }
}

TEST(Kinematics, CofactorIdentity) {
  std::mt19937_64 rng(2);
  for (int s = 0; s < 200; ++s) {
    const Mat3 F = Mat3::Identity() + oracle::random_matrix(rng, 0.8);
    const Mat3 C = fsi::levi_civita_cof(F);
    EXPECT_LE((C - oracle::cofactor_minors(F)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((F * C.transpose() - oracle::det_expansion(F) * Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Kinematics, LeviCivitaSymbol) {
  EXPECT_EQ(fsi::levi_civita(0, 1, 2), 1.0);
  EXPECT_EQ(fsi::levi_civita(1, 0, 2), -1.0);
  EXPECT_EQ(fsi::levi_civita(0, 0, 2), 0.0);
}

TEST(Kinematics, CheckedInverseThrowsBelowFloor) {
  Mat3 F = Mat3::Identity();
  F(2, 2) = 0.05;
  EXPECT_THROW(fsi::checked_inverse(F, 0.1), fsi::DetFloorError);
  F(2, 2) = 2.0;
  EXPECT_LE((fsi::checked_inverse(F, 0.1) * F - Mat3::Identity()).norm(), 1e-15);
}

TEST(Kinematics, DetFloorErrorCarriesWorstPoint) {
  fsi::TensorField F;
  F.values.assign(6, Mat3::Identity());
  F.values[4](0, 0) = -0.5;
  F.values[2](0, 0) = 0.05;
  try {
    fsi::inverse(F, 0.1, 3);
    FAIL() << "expected DetFloorError";
  } catch (const fsi::DetFloorError& e) {
    EXPECT_DOUBLE_EQ(e.value(), -0.5);
    EXPECT_EQ(e.cell(), 1);
    EXPECT_EQ(e.qp(), 1);
  }
}

// Weak Piola identity: int cof(grad phi) : grad psi = 0 for psi vanishing on the boundary.
TEST(Kinematics, DiscretePiolaIdentity) {
  const auto d = fsi::make_discretization(fsi::fixtures::two_cube(2), 2);
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(d.num_dofs());
  for (int n = 0; n < d.space.num_nodes(); ++n) {
    const Vec3& x = d.space.node_coords[n];
    xi.segment<3>(3 * n) = Vec3(0.1 * x[1] * x[2] + 0.05 * x[0] * x[0], -0.07 * x[0] * x[2], 0.04 * x[1] * x[1] + 0.02 * x[0]);
  }
  std::vector<char> boundary(d.space.num_nodes(), 0);
  for (const auto& nodes : d.space.facet_nodes)
    for (int n : nodes) boundary[n] = 1;
  Eigen::VectorXd r = Eigen::VectorXd::Zero(d.num_dofs());
  for (int c = 0; c < d.mesh.num_cells(); ++c)
    for (int q = 0; q < d.nq; ++q) {
      const Mat3 C = fsi::levi_civita_cof(Mat3::Identity() + fsi::grad_at(d, xi, c, q));
      for (int a = 0; a < d.npc; ++a) r.segment<3>(3 * d.space.node(c, a)) += d.jxw[d.qp(c, q)] * C * d.grad(c, q, a);
    }
  double worst = 0.0;
  int interior = 0;
  for (int n = 0; n < d.space.num_nodes(); ++n)
    if (!boundary[n]) {
      ++interior;
      worst = std::max(worst, r.segment<3>(3 * n).cwiseAbs().maxCoeff());
    }
  EXPECT_GT(interior, 0);
  EXPECT_LE(worst, 1e-10);
}

TEST(Kinematics, HistoryIntegrationIsTrapezoidal) {
  const auto d = fsi::make_discretization(fsi::fixtures::two_cube(1), 1);
  fsi::VelocityHistory h;
  std::vector<double> samples;
  for (int k = 0; k <= 4; ++k) {
    const double t = 0.1 * k;
    h.times.push_back(t);
    fsi::VectorField v;
    v.support = fsi::Support::Fluid;
    v.values = Eigen::VectorXd::Constant(d.num_dofs(), std::sin(t));
    h.velocity.push_back(v);
    samples.push_back(std::sin(t));
  }
  const auto I = fsi::integrate_history(h, 0.4, 0.2);
  EXPECT_NEAR(I[0], oracle::trapezoid(h.times, samples), 1e-15);
  EXPECT_THROW(fsi::integrate_history(h, 0.5, 0.2), fsi::PreconditionError);
  h.times[2] = 0.35;
  EXPECT_THROW(fsi::integrate_history(h, 0.4, 0.2), fsi::PreconditionError);
}

TEST(Kinematics, ZeroVelocityGivesIdentityFlowMap) {
  const auto d = fsi::make_discretization(fsi::fixtures::two_cube(1), 2);
  fsi::VelocityHistory h;
  h.times = {0.0, 0.1};
  fsi::VectorField z{Eigen::VectorXd::Zero(d.num_dofs()), fsi::Support::Fluid};
  h.velocity = {z, z};
  const auto F = fsi::build_flow_map(d, h, 0.1, 0.2);
  for (const auto& M : F.values) EXPECT_EQ(M, Mat3::Identity());
}

TEST(Kinematics, DeformationRejectsFluidOnlyField) {
  const auto d = fsi::make_discretization(fsi::fixtures::two_cube(1), 1);
  fsi::VectorField xi{Eigen::VectorXd::Zero(d.num_dofs()), fsi::Support::Fluid};
  EXPECT_THROW(fsi::build_deformation(d, xi), fsi::PreconditionError);
}

TEST(Kinematics, DetMonitorFindsCompressedCell) {
  const auto d = fsi::make_discretization(fsi::fixtures::two_cube(1), 1);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(d.num_dofs());
  for (int n = 0; n < d.space.num_nodes(); ++n) u[3 * n] = -0.95 * d.space.node_coords[n][0];
  auto flow = fsi::identity_plus_grad(d, u, fsi::Region::Fluid, 0.0);
  const auto m = fsi::make_map_state(d, flow, fsi::identity_field(d), -1.0);
  const auto rep = fsi::det_floor_monitor(d, m, 0.1);
  EXPECT_TRUE(rep.flagged);
  EXPECT_NEAR(rep.min_det, 0.05, 1e-12);
  EXPECT_EQ(rep.region, fsi::Region::Fluid);
}

}  // namespace
