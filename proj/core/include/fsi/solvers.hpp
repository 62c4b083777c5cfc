#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fsi/assembly.hpp"
#include "fsi/pressure.hpp"

namespace fsi {

struct SolverConfig {
  double T = 0.05;
  double dt = 0.005;
  double fp_inner_tol = 1e-8;
  double fp_outer_tol = 1e-8;
  int max_inner_iters = 20;
  int max_outer_iters = 20;
  double M_bound = 10.0;
  int T_bisect_max = 0;
  double relaxation = 1.0;
  double det_floor = 0.1;
  int threads = 1;
  CoefficientGradient coefficient_gradient = CoefficientGradient::Projection;

  void validate() const;
  /// Number of steps; T must be an integer multiple of dt up to 1e-9 relative.
  int num_steps() const;
};

/// Galerkin coefficients (f, h) with h' = f.
struct OdeState {
  Eigen::VectorXd f;
  Eigen::VectorXd h;
};

/// One implicit midpoint step of A f' + S f + D h = C, h' = f, with the
/// operators taken at the midpoint.
OdeState ode_step(const GalerkinOperators& mid, const OdeState& s, double dt);

/// Same step with a cached factorization of A/dt + S/2 + dt D/4. The
/// operators are passed again to step() so the stepper holds no copy.
class MidpointStepper {
 public:
  MidpointStepper() = default;
  MidpointStepper(const GalerkinOperators& mid, double dt);
  OdeState step(const GalerkinOperators& mid, const OdeState& s, const Eigen::VectorXd& forcing) const;

 private:
  double dt_ = 0.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/// Velocity and displacement histories on the time grid t_k = k dt (ambient nodal vectors).
struct History {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> velocity;
  std::vector<Eigen::VectorXd> displacement;
};

struct NormBreakdown {
  std::vector<std::string> names;
  std::vector<double> values;
  double combined() const;
};

/// Discrete stand-ins for the F and S norms (max over steps of L2/H1 norms and
/// first and second difference quotients).
struct NormCalculator {
  SparseMatrix mass_f, stiff_f, mass_s, stiff_s;
  NormBreakdown fluid(const History& h) const;
  NormBreakdown solid(const History& h) const;
  /// Norms of the difference of two histories on the same grid.
  double fluid_diff(const History& a, const History& b) const;
  double solid_diff(const History& a, const History& b) const;
};

struct TrajectoryState {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> f, h;
  History fields;  // velocity = basis f + lift, displacement = basis h
};

/// Reference data shared by every solve on one mesh.
class Problem {
 public:
  Problem(const Discretization& d, const MaterialParams& p, const SolverConfig& cfg);

  const Discretization& disc;
  MaterialParams params;
  SolverConfig config;
  ConstraintMatrix constraint;
  SparseMatrix mass0;
  DivFreeBasis basis;
  NormCalculator norms;
  GradientProjector projector;
  Eigen::VectorXd lift;  // ambient, nonzero only on gamma_in nodes

  int threads() const;
};

/// Maps built from a history at node k (midpoint = false) or t_{k+1/2}.
MapState history_map_state(const Problem& pb, const History& h, int k, bool midpoint);
Eigen::VectorXd history_displacement(const History& h, int k, bool midpoint);

/// Operators of one outer iterate, frozen for all inner sweeps.
struct OperatorCache {
  double dt = 0.0;
  std::vector<GalerkinOperators> nodes;     // t_k, k = 0..N; mass, mass_fluid and stiffness_sym only
  std::vector<GalerkinOperators> midpoints; // t_{k+1/2}
  std::vector<MidpointStepper> steppers;
  std::vector<FacetElasticField> facet_b;   // b at the interface points, per node
  DetMonitorReport det;
};

/// Throws DetFloorError when a map determinant crosses the floor.
OperatorCache build_operator_cache(const Problem& pb, const History& given);

/// Interface datum at every node from the displacement iterate.
std::vector<InterfaceDatum> hhat(const Problem& pb, const OperatorCache& cache, const History& xi_hat);

/// Coefficient loads per node for a datum history.
std::vector<Eigen::VectorXd> interface_loads(const Problem& pb, const std::vector<InterfaceDatum>& g);

TrajectoryState integrate(const Problem& pb, const OperatorCache& cache, const Eigen::VectorXd& f0,
                          const std::vector<Eigen::VectorXd>& node_loads);

/// Constant-in-time outer starting iterate: v = gamma0, xi(t) = t gamma0.
History initial_iterate(const Problem& pb, const Eigen::VectorXd& f0);

/// Throws PreconditionError if g(0) does not vanish.
TrajectoryState auxiliary_solve(const Problem& pb, const History& given, const std::vector<InterfaceDatum>& g,
                                const Eigen::VectorXd& f0);

struct IterationLog {
  std::vector<double> updates;
  std::vector<double> ratios;
  int iterations = 0;
  bool converged = false;
  bool contracted = true;
  std::string reason;
};

struct LinearizedResult {
  TrajectoryState trajectory;
  IterationLog log;
  OperatorCache cache;
  std::vector<InterfaceDatum> datum;
  std::vector<Eigen::VectorXd> loads;
};

LinearizedResult linearized_solve(const Problem& pb, const History& given, const Eigen::VectorXd& f0);

struct MembershipReport {
  NormBreakdown fluid, solid;
  double M_bound = 0.0;
  bool member = true;
};

MembershipReport membership_ledger(const Problem& pb, const History& h);

enum class SolveStatus { Converged, NonContraction };

struct NonlinearResult {
  SolveStatus status = SolveStatus::Converged;
  std::string message;
  TrajectoryState trajectory;
  IterationLog outer;
  std::vector<IterationLog> inner;
  MembershipReport membership;
  DetMonitorReport det;
  std::optional<OperatorCache> cache;        // of the final sweep
  std::vector<InterfaceDatum> datum;         // of the final sweep
  std::vector<Eigen::VectorXd> loads;        // of the final sweep
  std::vector<PressureField> pressure;       // at the step midpoints
  Eigen::VectorXd f0;
};

/// Pressure at every step midpoint of a trajectory, from its own maps.
std::vector<PressureField> recover_trajectory_pressure(const Problem& pb, const TrajectoryState& tr);

/// Runs the outer fixed point; on convergence also recovers the pressure.
NonlinearResult nonlinear_solve(const Problem& pb, const Eigen::VectorXd& gamma0);

/// Halves T and dt until solve(config) reports contraction or T_bisect_max halvings are used.
SolverConfig time_window_bisect(const std::function<bool(const SolverConfig&)>& solve, const SolverConfig& cfg);

/// Appends an update to the log and applies the non-contraction rules.
void record_update(IterationLog& log, double update, double tol, int max_iters);

}  // namespace fsi
