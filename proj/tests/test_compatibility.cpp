#include <gtest/gtest.h>

#include "fsi/compatibility.hpp"
#include "oracles.hpp"
#include "two_cube_problem.hpp"

namespace {

using fsi::Vec3;

fsi::CompatibilityInput zero_input(const fsi::Discretization& d) {
  fsi::CompatibilityInput in;
  in.v0 = {Eigen::VectorXd::Zero(d.num_dofs()), fsi::Support::Fluid};
  in.xi1 = {Eigen::VectorXd::Zero(d.num_dofs()), fsi::Support::Solid};
  in.p0 = Eigen::VectorXd::Zero(d.num_pressure());
  in.dtp0 = Eigen::VectorXd::Zero(d.num_pressure());
  in.dttp0 = Eigen::VectorXd::Zero(d.num_pressure());
  return in;
}

TEST(Compatibility, ZeroDataPassesEveryCondition) {
  const auto& d = oracle::two_cube_p2();
  const auto r = fsi::check_compatibility(d, zero_input(d), fsi::MaterialParams{});
  for (const auto& c : r.conditions) {
    EXPECT_TRUE(c.evaluated) << c.index;
    EXPECT_EQ(c.residual, 0.0) << c.index;
    EXPECT_TRUE(c.pass) << c.index;
  }
  for (const auto& [name, v] : r.intermediates) EXPECT_EQ(v, 0.0) << name;
  EXPECT_TRUE(r.passed(fsi::Strictness::All));
}

TEST(Compatibility, MissingPressureRatesAreSkipped) {
  const auto& d = oracle::two_cube_p2();
  auto in = zero_input(d);
  in.dtp0.reset();
  in.dttp0.reset();
  const auto r = fsi::check_compatibility(d, in, fsi::MaterialParams{});
  for (int i = 0; i < 5; ++i) EXPECT_TRUE(r.conditions[i].evaluated);
  for (int i = 5; i < 9; ++i) {
    EXPECT_FALSE(r.conditions[i].evaluated);
    EXPECT_TRUE(r.conditions[i].pass);
  }
}

TEST(Compatibility, MatchingConstantsSatisfyConditionOne) {
  const auto& d = oracle::two_cube_p2();
  auto in = zero_input(d);
  in.v0.values = oracle::uniform_data(d, Vec3(0.2, -0.1, 0.3));
  in.xi1.values = in.v0.values;
  const auto r = fsi::check_compatibility(d, in, fsi::MaterialParams{});
  EXPECT_EQ(r.conditions[0].residual, 0.0);
  EXPECT_TRUE(r.passed(fsi::Strictness::Interface));
}

TEST(Compatibility, ConditionOneIsHomogeneous) {
  const auto& d = oracle::two_cube_p2();
  auto in = zero_input(d);
  in.v0.values = oracle::smooth_data(d, 1.0);
  in.xi1.values = oracle::uniform_data(d, Vec3(0.1, 0.2, 0.0));
  const double r1 = fsi::check_compatibility(d, in, fsi::MaterialParams{}).conditions[0].residual;
  in.v0.values *= -3.0;
  in.xi1.values *= -3.0;
  const double r3 = fsi::check_compatibility(d, in, fsi::MaterialParams{}).conditions[0].residual;
  EXPECT_GT(r1, 0.0);
  EXPECT_NEAR(r3, 3.0 * r1, 1e-13 * r3);
  EXPECT_FALSE(fsi::check_compatibility(d, in, fsi::MaterialParams{}).passed(fsi::Strictness::Interface));
}

TEST(Compatibility, ConditionThreeMatchesDirectQuadrature) {
  const auto& d = oracle::two_cube_p2();
  const double mu = 0.37;
  fsi::MaterialParams mp;
  mp.mu = mu;
  auto vel = [](const Vec3& x) { return Vec3(x[1] * x[1], x[0] * x[2], 0.5 * x[0] - x[1] * x[2]); };
  auto pres = [](const Vec3& x) { return 1.0 + x[0] - 2.0 * x[1] + 0.5 * x[2]; };
  auto grad = [](const Vec3& x) {
    fsi::Mat3 G;
    G << 0.0, 2 * x[1], 0.0, x[2], 0.0, x[0], 0.5, -x[2], -x[1];
    return G;
  };
  auto in = zero_input(d);
  in.v0 = fsi::interpolate(d, vel, fsi::Support::Fluid);
  in.p0 = fsi::interpolate_pressure(d, pres);
  const auto r = fsi::check_compatibility(d, in, mp);
  const double direct = std::sqrt(oracle::box_integral(
      [&](const Vec3& x) {
        const fsi::Mat3 G = grad(x);
        return (pres(x) * fsi::Mat3::Identity() - mu * (G + G.transpose())).squaredNorm();
      },
      Vec3::Zero(), Vec3::Ones()));
  EXPECT_NEAR(r.conditions[2].residual, direct, 1e-12);
  EXPECT_FALSE(r.conditions[2].pass);
  EXPECT_EQ(r.conditions[2].domain, "fluid");
  EXPECT_FALSE(r.passed(fsi::Strictness::All));
  EXPECT_TRUE(r.passed(fsi::Strictness::Off));
}

TEST(Compatibility, SeverityAndTolerance) {
  const auto& d = oracle::two_cube_p2();
  auto in = zero_input(d);
  in.v0.values = oracle::uniform_data(d, Vec3(1.0, 0.0, 0.0));
  in.xi1.values = in.v0.values;
  const auto r = fsi::check_compatibility(d, in, fsi::MaterialParams{}, 1e-6);
  for (int i = 0; i < 9; ++i) {
    EXPECT_EQ(r.conditions[i].severity, i < 5 ? fsi::Severity::Error : fsi::Severity::Warn);
    EXPECT_DOUBLE_EQ(r.conditions[i].tolerance, 1e-6 * r.data_scale);
  }
}

TEST(Compatibility, StrictnessNames) {
  EXPECT_EQ(fsi::parse_strictness("all"), fsi::Strictness::All);
  EXPECT_EQ(std::string(fsi::to_string(fsi::Strictness::Interface)), "interface");
  EXPECT_THROW(fsi::parse_strictness("most"), fsi::Error);
}

}  // namespace
