#include <gtest/gtest.h>

#include "fsi/discretization.hpp"
#include "fsi_fixtures/two_cube.hpp"

namespace {

const fsi::Discretization& p2() {
  static const auto d = fsi::make_discretization(fsi::fixtures::two_cube(2), 2);
  return d;
}

TEST(FunctionSpace, TwoCubeNodeCounts) {
  const auto& d = p2();
  EXPECT_EQ(d.space.num_nodes(), 9 * 5 * 5);
  EXPECT_EQ(d.num_dofs(), 675);
  EXPECT_EQ(d.num_pressure(), 27);
  EXPECT_EQ(d.nq, 35);
}

TEST(FunctionSpace, InterfaceNodesAreShared) {
  const auto& s = p2().space;
  int shared = 0;
  for (int n = 0; n < s.num_nodes(); ++n)
    if (s.on_interface(n)) {
      ++shared;
      EXPECT_DOUBLE_EQ(s.node_coords[n][0], 1.0);
    }
  EXPECT_EQ(shared, 25);
}

TEST(FunctionSpace, DegreeThreeIsRejected) {
  EXPECT_THROW(fsi::build_space(fsi::fixtures::two_cube(1), 3), fsi::PreconditionError);
}

TEST(FunctionSpace, ShapeFunctionsPartitionUnityAndReproduceQuadratics) {
  const auto& d = p2();
  auto f = [](const fsi::Vec3& x) { return 1.0 + x[0] - 2.0 * x[1] * x[2] + 0.5 * x[0] * x[0]; };
  Eigen::VectorXd u = Eigen::VectorXd::Zero(d.num_dofs());
  for (int n = 0; n < d.space.num_nodes(); ++n) u[3 * n] = f(d.space.node_coords[n]);
  for (int c = 0; c < d.mesh.num_cells(); c += 7)
    for (int q = 0; q < d.nq; ++q) {
      double sum = 0.0;
      fsi::Vec3 gsum = fsi::Vec3::Zero();
      for (int a = 0; a < d.npc; ++a) {
        sum += d.phi(q, a);
        gsum += d.grad(c, q, a);
      }
      EXPECT_NEAR(sum, 1.0, 1e-14);
      EXPECT_NEAR(gsum.norm(), 0.0, 1e-12);
      const fsi::Vec3& x = d.qx[d.qp(c, q)];
      EXPECT_NEAR(fsi::value_at(d, u, c, q)[0], f(x), 1e-13);
      const fsi::Mat3 g = fsi::grad_at(d, u, c, q);
      EXPECT_NEAR(g(0, 0), 1.0 + x[0], 1e-12);
      EXPECT_NEAR(g(0, 1), -2.0 * x[2], 1e-12);
      EXPECT_NEAR(g(0, 2), -2.0 * x[1], 1e-12);
    }
}

TEST(FunctionSpace, InterfaceNormalsPointFromFluidToSolid) {
  const auto& d = p2();
  ASSERT_EQ(d.interface.size(), 8u);
  double area = 0.0;
  for (const auto& f : d.interface) {
    EXPECT_NEAR(f.normal[0], 1.0, 1e-14);
    for (double w : f.jxw) area += w;
  }
  EXPECT_NEAR(area, 1.0, 1e-14);
}

TEST(FunctionSpace, RegionMassesGiveVolumes) {
  const auto& d = p2();
  Eigen::VectorXd ones = Eigen::VectorXd::Zero(d.num_dofs());
  for (int n = 0; n < d.space.num_nodes(); ++n) ones[3 * n] = 1.0;
  EXPECT_NEAR(ones.dot(fsi::region_mass(d, fsi::Region::Fluid) * ones), 1.0, 1e-13);
  EXPECT_NEAR(ones.dot(fsi::region_mass(d, fsi::Region::Solid) * ones), 1.0, 1e-13);
  EXPECT_NEAR(ones.dot(fsi::region_stiffness(d, fsi::Region::Fluid) * ones), 0.0, 1e-12);
}

}  // namespace
