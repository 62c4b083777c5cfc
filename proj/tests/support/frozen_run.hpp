#pragma once

#include <functional>
#include <memory>

#include "fsi/solvers.hpp"

namespace oracle {

struct FrozenRun {
  std::unique_ptr<fsi::Problem> pb;
  fsi::OperatorCache cache;
  std::vector<fsi::InterfaceDatum> datum;
  std::vector<Eigen::VectorXd> loads;
  fsi::TrajectoryState tr;
};

/// Integrates with every operator frozen at the identity maps (the given
/// history is identically zero) and a time-constant interface datum g.
inline FrozenRun frozen_run(const fsi::Discretization& d, int steps, const Eigen::VectorXd& gamma0,
                            const std::function<fsi::Vec3(const fsi::Vec3&)>& g) {
  fsi::SolverConfig c;
  c.dt = 0.005;
  c.T = c.dt * steps;
  FrozenRun run;
  run.pb = std::make_unique<fsi::Problem>(d, fsi::MaterialParams{}, c);
  const Eigen::VectorXd f0 = fsi::project_initial(run.pb->basis, run.pb->mass0, gamma0);
  const auto given = fsi::initial_iterate(*run.pb, Eigen::VectorXd::Zero(run.pb->basis.dim()));
  run.cache = fsi::build_operator_cache(*run.pb, given);
  fsi::InterfaceDatum gk;
  for (const auto& fi : d.interface)
    for (const auto& x : fi.x) gk.push_back(g(x));
  run.datum.assign(given.times.size(), gk);
  run.loads = fsi::interface_loads(*run.pb, run.datum);
  run.tr = fsi::integrate(*run.pb, run.cache, f0, run.loads);
  return run;
}

inline fsi::Vec3 no_traction(const fsi::Vec3&) { return fsi::Vec3::Zero(); }

}  // namespace oracle
