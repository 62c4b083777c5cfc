#include <gtest/gtest.h>

#include "fsi/diagnostics.hpp"
#include "fsi/solvers.hpp"
#include "oracles.hpp"
#include "two_cube_problem.hpp"

namespace {

fsi::GalerkinOperators scalar_ops(double A, double S, double D, double C) {
  fsi::GalerkinOperators op;
  op.mass = Eigen::MatrixXd::Constant(1, 1, A);
  op.fluid_stiffness = Eigen::MatrixXd::Constant(1, 1, S);
  op.stiffness_sym = Eigen::MatrixXd::Constant(1, 1, D);
  op.stiffness_grad = Eigen::MatrixXd::Zero(1, 1);
  op.load = Eigen::VectorXd::Constant(1, C);
  op.lift_load = Eigen::VectorXd::Zero(1);
  return op;
}

TEST(OdeStep, ScalarDecayMatchesClosedForm) {
  const auto op = scalar_ops(1.0, 1.0, 0.0, 0.0);
  const auto s = fsi::ode_step(op, {Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1)}, 0.1);
  EXPECT_NEAR(s.f[0], oracle::midpoint_factor(-1.0, 0.1), 1e-15);
  EXPECT_NEAR(s.f[0], 0.95 / 1.05, 1e-15);
  EXPECT_NEAR(s.h[0], 0.05 * (1.0 + s.f[0]), 1e-15);
}

TEST(OdeStep, ZeroStaysZero) {
  const auto op = scalar_ops(2.0, 0.3, 1.5, 0.0);
  const auto s = fsi::ode_step(op, {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)}, 0.1);
  EXPECT_EQ(s.f[0], 0.0);
  EXPECT_EQ(s.h[0], 0.0);
}

TEST(OdeStep, SkewOperatorConservesNorm) {
  fsi::GalerkinOperators op;
  op.mass = Eigen::MatrixXd::Identity(2, 2);
  op.fluid_stiffness.resize(2, 2);
  op.fluid_stiffness << 0.0, 3.0, -3.0, 0.0;
  op.stiffness_sym = Eigen::MatrixXd::Zero(2, 2);
  op.stiffness_grad = Eigen::MatrixXd::Zero(2, 2);
  op.load = op.lift_load = Eigen::VectorXd::Zero(2);
  fsi::OdeState s{Eigen::Vector2d(0.6, -0.8), Eigen::VectorXd::Zero(2)};
  for (int k = 0; k < 100; ++k) {
    s = fsi::ode_step(op, s, 0.05);
    EXPECT_NEAR(s.f.norm(), 1.0, 1e-12);
  }
}

TEST(OdeStep, OscillatorConservesEnergy) {
  // f' = -D h, h' = f: the midpoint rule keeps f^2 + D h^2.
  const auto op = scalar_ops(1.0, 0.0, 4.0, 0.0);
  fsi::OdeState s{Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1)};
  for (int k = 0; k < 200; ++k) {
    s = fsi::ode_step(op, s, 0.1);
    EXPECT_NEAR(s.f[0] * s.f[0] + 4.0 * s.h[0] * s.h[0], 1.0, 1e-12);
  }
}

TEST(SolverConfig, InvariantsAreChecked) {
  fsi::SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.num_steps(), 10);
  c.dt = 0.1;
  EXPECT_THROW(c.validate(), fsi::PreconditionError);
  c = {};
  c.M_bound = 1.0;
  EXPECT_THROW(c.validate(), fsi::PreconditionError);
  c = {};
  c.relaxation = 0.0;
  EXPECT_THROW(c.validate(), fsi::PreconditionError);
  c = {};
  c.dt = 0.003;
  EXPECT_THROW(c.validate(), fsi::PreconditionError);
}

TEST(RecordUpdate, ConvergesBelowTolerance) {
  fsi::IterationLog log;
  fsi::record_update(log, 1.0, 1e-8, 20);
  fsi::record_update(log, 0.1, 1e-8, 20);
  fsi::record_update(log, 1e-9, 1e-8, 20);
  EXPECT_TRUE(log.converged);
  EXPECT_TRUE(log.contracted);
  ASSERT_EQ(log.ratios.size(), 2u);
  EXPECT_DOUBLE_EQ(log.ratios[0], 0.1);
}

TEST(RecordUpdate, TwoGrowingRatiosMeanNonContraction) {
  fsi::IterationLog log;
  for (double u : {1.0, 0.5, 0.6}) fsi::record_update(log, u, 1e-8, 20);
  EXPECT_TRUE(log.contracted);
  fsi::record_update(log, 0.7, 1e-8, 20);
  EXPECT_FALSE(log.contracted);
}

TEST(RecordUpdate, IterationLimitAndNonFinite) {
  fsi::IterationLog log;
  for (int k = 0; k < 3; ++k) fsi::record_update(log, 0.5 / (k + 1), 1e-8, 3);
  EXPECT_FALSE(log.contracted);
  EXPECT_FALSE(log.converged);
  fsi::IterationLog bad;
  fsi::record_update(bad, std::nan(""), 1e-8, 20);
  EXPECT_FALSE(bad.contracted);
}

TEST(TimeWindowBisect, ReturnsOriginalWhenContracting) {
  fsi::SolverConfig c;
  c.T_bisect_max = 3;
  const auto out = fsi::time_window_bisect([](const fsi::SolverConfig&) { return true; }, c);
  EXPECT_EQ(out.T, c.T);
}

TEST(TimeWindowBisect, HalvesUntilContraction) {
  fsi::SolverConfig c;
  c.T_bisect_max = 3;
  int calls = 0;
  const auto out = fsi::time_window_bisect(
      [&](const fsi::SolverConfig& t) {
        ++calls;
        return t.T <= c.T / 4 * (1 + 1e-12);
      },
      c);
  EXPECT_DOUBLE_EQ(out.T, c.T / 4);
  EXPECT_DOUBLE_EQ(out.dt, c.dt / 4);
  EXPECT_EQ(calls, 3);
}

TEST(TimeWindowBisect, GivesUpAfterLimit) {
  fsi::SolverConfig c;
  c.T_bisect_max = 2;
  int calls = 0;
  EXPECT_THROW(fsi::time_window_bisect(
                   [&](const fsi::SolverConfig&) {
                     ++calls;
                     return false;
                   },
                   c),
               fsi::SolveError);
  EXPECT_EQ(calls, 3);
}

struct SmallProblem : ::testing::Test {
  static const fsi::Problem& pb() {
    static const fsi::Problem p = [] {
      fsi::SolverConfig c;
      c.T = 0.02;
      c.dt = 0.005;
      return fsi::Problem(oracle::two_cube_p2(), fsi::MaterialParams{}, c);
    }();
    return p;
  }
};

TEST_F(SmallProblem, ZeroDataGivesZeroSolutionInOneIteration) {
  const auto res = fsi::nonlinear_solve(pb(), Eigen::VectorXd::Zero(pb().disc.num_dofs()));
  EXPECT_EQ(res.status, fsi::SolveStatus::Converged);
  EXPECT_EQ(res.outer.iterations, 1);
  for (const auto& v : res.trajectory.fields.velocity) EXPECT_EQ(v.norm(), 0.0);
  for (const auto& x : res.trajectory.fields.displacement) EXPECT_EQ(x.norm(), 0.0);
  EXPECT_TRUE(res.membership.member);
}

TEST_F(SmallProblem, AuxiliaryRejectsNonzeroInitialDatum) {
  const Eigen::VectorXd f0 = Eigen::VectorXd::Zero(pb().basis.dim());
  const auto given = fsi::initial_iterate(pb(), f0);
  std::size_t npts = 0;
  for (const auto& f : pb().disc.interface) npts += f.jxw.size();
  std::vector<fsi::InterfaceDatum> g(given.times.size(), fsi::InterfaceDatum(npts, fsi::Vec3::Zero()));
  EXPECT_NO_THROW(fsi::auxiliary_solve(pb(), given, g, f0));
  g[0][3] = fsi::Vec3(0.0, 1e-3, 0.0);
  EXPECT_THROW(fsi::auxiliary_solve(pb(), given, g, f0), fsi::PreconditionError);
}

TEST_F(SmallProblem, AuxiliaryWithZeroDataIsZero) {
  const Eigen::VectorXd f0 = Eigen::VectorXd::Zero(pb().basis.dim());
  const auto given = fsi::initial_iterate(pb(), f0);
  std::size_t npts = 0;
  for (const auto& f : pb().disc.interface) npts += f.jxw.size();
  const std::vector<fsi::InterfaceDatum> g(given.times.size(), fsi::InterfaceDatum(npts, fsi::Vec3::Zero()));
  const auto tr = fsi::auxiliary_solve(pb(), given, g, f0);
  for (const auto& f : tr.f) EXPECT_EQ(f.norm(), 0.0);
}

TEST_F(SmallProblem, TrajectoryInvariants) {
  const auto res = fsi::nonlinear_solve(pb(), oracle::smooth_data(pb().disc, 1e-3));
  ASSERT_EQ(res.status, fsi::SolveStatus::Converged);
  const auto& tr = res.trajectory;
  EXPECT_EQ(tr.h.front().norm(), 0.0);
  EXPECT_EQ(tr.fields.displacement.front().norm(), 0.0);
  // h' = f by the trapezoid rule.
  for (std::size_t k = 1; k < tr.times.size(); ++k) {
    Eigen::VectorXd h = Eigen::VectorXd::Zero(tr.f[0].size());
    for (std::size_t m = 0; m < k; ++m) h += 0.5 * (tr.times[m + 1] - tr.times[m]) * (tr.f[m] + tr.f[m + 1]);
    EXPECT_LE((h - tr.h[k]).norm(), 1e-12 * std::max(1.0, h.norm()));
  }
  EXPECT_LE(fsi::max_divergence_residual(pb(), tr), 1e-10);
  for (const auto& r : fsi::interface_residuals(pb(), tr, res.datum, res.pressure)) EXPECT_EQ(r.velocity, 0.0);
}

TEST_F(SmallProblem, MembershipScalesLinearly) {
  const auto res = fsi::nonlinear_solve(pb(), oracle::smooth_data(pb().disc, 1e-3));
  fsi::History twice = res.trajectory.fields;
  for (auto& v : twice.velocity) v *= 2.0;
  for (auto& x : twice.displacement) x *= 2.0;
  const auto a = fsi::membership_ledger(pb(), res.trajectory.fields);
  const auto b = fsi::membership_ledger(pb(), twice);
  for (std::size_t i = 0; i < a.fluid.values.size(); ++i) EXPECT_NEAR(b.fluid.values[i], 2.0 * a.fluid.values[i], 1e-13);
  for (std::size_t i = 0; i < a.solid.values.size(); ++i) EXPECT_NEAR(b.solid.values[i], 2.0 * a.solid.values[i], 1e-13);
}

TEST_F(SmallProblem, MembershipViolationIsFlaggedNotFatal) {
  fsi::SolverConfig c = pb().config;
  c.M_bound = 1.0 + 1e-12;
  const fsi::Problem p(pb().disc, pb().params, c);
  const auto res = fsi::nonlinear_solve(p, oracle::uniform_data(p.disc, fsi::Vec3(0.1, 0, 0)));
  EXPECT_EQ(res.status, fsi::SolveStatus::Converged);
  EXPECT_FALSE(res.membership.member);
}

TEST_F(SmallProblem, BitwiseDeterministic) {
  const auto a = fsi::nonlinear_solve(pb(), oracle::smooth_data(pb().disc, 1e-3));
  const auto b = fsi::nonlinear_solve(pb(), oracle::smooth_data(pb().disc, 1e-3));
  ASSERT_EQ(a.trajectory.f.size(), b.trajectory.f.size());
  for (std::size_t k = 0; k < a.trajectory.f.size(); ++k) {
    EXPECT_EQ(a.trajectory.fields.velocity[k], b.trajectory.fields.velocity[k]);
    EXPECT_EQ(a.trajectory.fields.displacement[k], b.trajectory.fields.displacement[k]);
  }
}

}  // namespace
