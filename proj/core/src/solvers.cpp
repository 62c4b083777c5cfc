#include "fsi/solvers.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fsi/parallel.hpp"

namespace fsi {

void SolverConfig::validate() const {
  if (!(T > 0.0)) throw PreconditionError("T must be positive");
  if (!(dt > 0.0) || dt > T * (1.0 + 1e-12)) throw PreconditionError("dt must satisfy 0 < dt <= T");
  if (!(fp_inner_tol > 0.0) || !(fp_outer_tol > 0.0)) throw PreconditionError("fixed-point tolerances must be positive");
  if (max_inner_iters < 1 || max_outer_iters < 1) throw PreconditionError("iteration limits must be at least 1");
  if (!(M_bound > 1.0)) throw PreconditionError("M_bound must exceed 1");
  if (T_bisect_max < 0) throw PreconditionError("T_bisect_max must be non-negative");
  if (!(relaxation > 0.0 && relaxation <= 1.0)) throw PreconditionError("relaxation must lie in (0, 1]");
  if (!(det_floor >= 0.0)) throw PreconditionError("det_floor must be non-negative");
  if (threads < 1) throw PreconditionError("threads must be at least 1");
  num_steps();
}

int SolverConfig::num_steps() const {
  const double n = T / dt;
  const long k = std::lround(n);
  if (k < 1 || std::abs(n - static_cast<double>(k)) > 1e-9 * n) throw PreconditionError("T must be a multiple of dt");
  return static_cast<int>(k);
}

OdeState ode_step(const GalerkinOperators& mid, const OdeState& s, double dt) {
  return MidpointStepper(mid, dt).step(mid, s, mid.forcing());
}

MidpointStepper::MidpointStepper(const GalerkinOperators& mid, double dt) : dt_(dt) {
  const Eigen::MatrixXd lhs = mid.mass / dt + 0.5 * mid.fluid_stiffness + 0.25 * dt * mid.structure_stiffness();
  lu_.compute(lhs);
  if (!(std::abs(lu_.determinant()) > 0.0) || !std::isfinite(lhs.sum())) throw SolveError("singular midpoint step matrix");
}

OdeState MidpointStepper::step(const GalerkinOperators& mid, const OdeState& s, const Eigen::VectorXd& forcing) const {
  const Eigen::VectorXd Dh = mid.stiffness_sym * s.h + mid.stiffness_grad * s.h;
  const Eigen::VectorXd Dtf = 0.25 * dt_ * (mid.stiffness_sym * s.f + mid.stiffness_grad * s.f);
  OdeState out;
  out.f = lu_.solve(mid.mass * s.f / dt_ - 0.5 * (mid.fluid_stiffness * s.f) - Dtf - Dh + forcing);
  out.h = s.h + 0.5 * dt_ * (s.f + out.f);
  return out;
}

double NormBreakdown::combined() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

namespace {

double quad_norm(const SparseMatrix& M, const SparseMatrix& K, const Eigen::VectorXd& u, bool with_gradient) {
  double s = u.dot(M * u);
  if (with_gradient) s += u.dot(K * u);
  return std::sqrt(std::max(0.0, s));
}

NormBreakdown history_norms(const SparseMatrix& M, const SparseMatrix& K, const std::vector<double>& t,
                            const std::vector<Eigen::VectorXd>& u, bool include_l2) {
  NormBreakdown nb;
  double l2 = 0.0, h1 = 0.0, d1 = 0.0, d2 = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    l2 = std::max(l2, quad_norm(M, K, u[k], false));
    h1 = std::max(h1, quad_norm(M, K, u[k], true));
    if (k >= 1) {
      const double dt = t[k] - t[k - 1];
      d1 = std::max(d1, quad_norm(M, K, (u[k] - u[k - 1]) / dt, true));
    }
    if (k >= 2) {
      const double dt = t[k] - t[k - 1];
      d2 = std::max(d2, quad_norm(M, K, (u[k] - 2.0 * u[k - 1] + u[k - 2]) / (dt * dt), true));
    }
  }
  if (include_l2) {
    nb.names.push_back("L2");
    nb.values.push_back(l2);
  }
  nb.names.insert(nb.names.end(), {"H1", "dt_H1", "dtt_H1"});
  nb.values.insert(nb.values.end(), {h1, d1, d2});
  return nb;
}

std::vector<Eigen::VectorXd> difference(const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b) {
  if (a.size() != b.size()) throw PreconditionError("histories on different time grids");
  std::vector<Eigen::VectorXd> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

double relative(double num, double den) {
  if (num == 0.0) return 0.0;
  return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
}

}  // namespace

NormBreakdown NormCalculator::fluid(const History& h) const {
  return history_norms(mass_f, stiff_f, h.times, h.velocity, true);
}
NormBreakdown NormCalculator::solid(const History& h) const {
  return history_norms(mass_s, stiff_s, h.times, h.displacement, false);
}
double NormCalculator::fluid_diff(const History& a, const History& b) const {
  return history_norms(mass_f, stiff_f, a.times, difference(a.velocity, b.velocity), true).combined();
}
double NormCalculator::solid_diff(const History& a, const History& b) const {
  return history_norms(mass_s, stiff_s, a.times, difference(a.displacement, b.displacement), false).combined();
}

Problem::Problem(const Discretization& d, const MaterialParams& p, const SolverConfig& cfg)
    : disc(d), params(p), config(cfg), projector(d) {
  params.validate();
  config.validate();
  const MapState m0 = identity_map_state(d);
  constraint = build_constraint(d, m0);
  mass0 = weighted_mass(d, m0, params);
  norms.mass_f = region_mass(d, Region::Fluid);
  norms.stiff_f = region_stiffness(d, Region::Fluid);
  norms.mass_s = region_mass(d, Region::Solid);
  norms.stiff_s = region_stiffness(d, Region::Solid);
  const SparseMatrix stiff = norms.stiff_f + norms.stiff_s;
  basis = build_divfree_basis(constraint, mass0, &stiff);
  lift = Eigen::VectorXd::Zero(d.num_dofs());
}

int Problem::threads() const { return resolve_threads(config.threads); }

namespace {

Eigen::VectorXd integrated_velocity(const History& h, int k, bool midpoint) {
  Eigen::VectorXd X = Eigen::VectorXd::Zero(h.velocity.front().size());
  for (int j = 0; j < k; ++j) X += 0.5 * (h.times[j + 1] - h.times[j]) * (h.velocity[j] + h.velocity[j + 1]);
  if (midpoint) X += 0.125 * (h.times[k + 1] - h.times[k]) * (3.0 * h.velocity[k] + h.velocity[k + 1]);
  return X;
}

double time_at(const History& h, int k, bool midpoint) {
  return midpoint ? 0.5 * (h.times[k] + h.times[k + 1]) : h.times[k];
}

MapState maps_from(const Problem& pb, const Eigen::VectorXd& X, const Eigen::VectorXd& xi, double t) {
  const auto& d = pb.disc;
  TensorField flow = t == 0.0 ? identity_field(d, t) : identity_plus_grad(d, X, Region::Fluid, t);
  MapState m = make_map_state(d, std::move(flow), identity_plus_grad(d, xi, Region::Solid, t), pb.config.det_floor);
  return m;
}

}  // namespace

Eigen::VectorXd history_displacement(const History& h, int k, bool midpoint) {
  return midpoint ? Eigen::VectorXd(0.5 * (h.displacement[k] + h.displacement[k + 1])) : h.displacement[k];
}

MapState history_map_state(const Problem& pb, const History& h, int k, bool midpoint) {
  return maps_from(pb, integrated_velocity(h, k, midpoint), history_displacement(h, k, midpoint), time_at(h, k, midpoint));
}

OperatorCache build_operator_cache(const Problem& pb, const History& given) {
  const auto& d = pb.disc;
  const int N = static_cast<int>(given.times.size()) - 1;
  if (N < 1) throw PreconditionError("history needs at least two time points");
  OperatorCache cache;
  cache.dt = given.times[1] - given.times[0];
  cache.det.min_det = std::numeric_limits<double>::infinity();
  const bool has_lift = pb.lift.size() && pb.lift.lpNorm<Eigen::Infinity>() > 0.0;
  const Eigen::VectorXd* lift = has_lift ? &pb.lift : nullptr;
  const int threads = pb.threads();

  auto ops_at = [&](const Eigen::VectorXd& X, const Eigen::VectorXd& xi, double t) {
    const MapState m = maps_from(pb, X, xi, t);
    const DetMonitorReport rep = det_floor_monitor(d, m, pb.config.det_floor);
    cache.det.merge(rep);
    if (rep.flagged) {
      std::ostringstream os;
      os.precision(17);
      os << "determinant " << rep.min_det << " below floor " << pb.config.det_floor << " in the "
         << to_string(rep.region) << " at t = " << t << " (cell " << rep.cell << ")";
      throw DetFloorError(os.str(), rep.min_det, rep.cell, rep.qp);
    }
    const ElasticTensorField b =
        evaluate_elastic_field(d, xi, pb.params, pb.config.coefficient_gradient, &pb.projector);
    return assemble_operators(d, pb.basis, m, b, {}, pb.params, threads, lift);
  };

  Eigen::VectorXd X = Eigen::VectorXd::Zero(d.num_dofs());
  for (int k = 0; k <= N; ++k) {
    const double t = given.times[k];
    cache.nodes.push_back(ops_at(X, given.displacement[k], t));
    // Node operators only feed the energy ledger.
    cache.nodes.back().fluid_stiffness.resize(0, 0);
    cache.nodes.back().stiffness_grad.resize(0, 0);
    cache.facet_b.push_back(evaluate_facet_field(d, given.displacement[k], pb.params));
    if (k == N) break;
    const double h = given.times[k + 1] - t;
    const Eigen::VectorXd Xm = X + 0.125 * h * (3.0 * given.velocity[k] + given.velocity[k + 1]);
    const Eigen::VectorXd xim = 0.5 * (given.displacement[k] + given.displacement[k + 1]);
    cache.midpoints.push_back(ops_at(Xm, xim, t + 0.5 * h));
    cache.midpoints.back().mass_fluid.resize(0, 0);
    cache.steppers.emplace_back(cache.midpoints.back(), h);
    X += 0.5 * h * (given.velocity[k] + given.velocity[k + 1]);
  }
  return cache;
}

namespace {

std::vector<Mat3> facet_gradients(const Discretization& d, const Eigen::VectorXd& xi) {
  std::vector<Mat3> out;
  for (const auto& fi : d.interface)
    for (std::size_t q = 0; q < fi.jxw.size(); ++q) {
      Mat3 H = Mat3::Zero();
      for (int a = 0; a < d.npc; ++a)
        H.noalias() += xi.segment<3>(3 * d.space.node(fi.solid_cell, a)) * fi.solid_dphi[q * d.npc + a].transpose();
      out.push_back(H);
    }
  return out;
}

std::vector<Vec3> facet_normals(const Discretization& d) {
  std::vector<Vec3> out;
  for (const auto& fi : d.interface)
    for (std::size_t q = 0; q < fi.jxw.size(); ++q) out.push_back(fi.normal);
  return out;
}

}  // namespace

std::vector<InterfaceDatum> hhat(const Problem& pb, const OperatorCache& cache, const History& xi_hat) {
  const auto& d = pb.disc;
  const std::size_t nt = cache.facet_b.size();
  if (xi_hat.displacement.size() != nt) throw PreconditionError("displacement iterate on a different time grid");
  const std::vector<Vec3> normals = facet_normals(d);
  const std::size_t np = normals.size();
  std::vector<InterfaceDatum> g(nt, InterfaceDatum(np, Vec3::Zero()));
  std::vector<Mat3> acc(np, Mat3::Zero());
  std::vector<Mat3> H0 = facet_gradients(d, xi_hat.displacement[0]);
  for (std::size_t k = 0; k + 1 < nt; ++k) {
    const std::vector<Mat3> H1 = facet_gradients(d, xi_hat.displacement[k + 1]);
    for (std::size_t m = 0; m < np; ++m) {
      Tensor4 db;
      for (int e = 0; e < 81; ++e) db[e] = cache.facet_b[k + 1].coeffs[m][e] - cache.facet_b[k].coeffs[m][e];
      acc[m] += contract(db, 0.5 * (H0[m] + H1[m]));
      g[k + 1][m] = -(acc[m] * normals[m]);
    }
    H0 = H1;
  }
  return g;
}

std::vector<Eigen::VectorXd> interface_loads(const Problem& pb, const std::vector<InterfaceDatum>& g) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(g.size());
  for (const auto& gk : g) out.push_back(load_vector(pb.disc, pb.basis, gk));
  return out;
}

TrajectoryState integrate(const Problem& pb, const OperatorCache& cache, const Eigen::VectorXd& f0,
                          const std::vector<Eigen::VectorXd>& node_loads) {
  const int N = static_cast<int>(cache.steppers.size());
  if (static_cast<int>(node_loads.size()) != N + 1) throw PreconditionError("load history size mismatch");
  TrajectoryState tr;
  OdeState s{f0, Eigen::VectorXd::Zero(f0.size())};
  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.f.push_back(s.f);
    tr.h.push_back(s.h);
    tr.fields.times.push_back(t);
    tr.fields.velocity.push_back(pb.basis.ambient * s.f + pb.lift);
    tr.fields.displacement.push_back(pb.basis.ambient * s.h);
  };
  record(cache.nodes[0].time);
  for (int k = 0; k < N; ++k) {
    const Eigen::VectorXd forcing = 0.5 * (node_loads[k] + node_loads[k + 1]) + cache.midpoints[k].lift_load;
    s = cache.steppers[k].step(cache.midpoints[k], s, forcing);
    if (!s.f.allFinite() || !s.h.allFinite()) throw SolveError("non-finite state at step " + std::to_string(k + 1));
    record(cache.nodes[k + 1].time);
  }
  return tr;
}

History initial_iterate(const Problem& pb, const Eigen::VectorXd& f0) {
  const int N = pb.config.num_steps();
  const Eigen::VectorXd g0 = pb.basis.ambient * f0 + pb.lift;
  History h;
  for (int k = 0; k <= N; ++k) {
    const double t = k == N ? pb.config.T : k * pb.config.dt;
    h.times.push_back(t);
    h.velocity.push_back(g0);
    h.displacement.push_back(t * (g0 - pb.lift));
  }
  return h;
}

TrajectoryState auxiliary_solve(const Problem& pb, const History& given, const std::vector<InterfaceDatum>& g,
                                const Eigen::VectorXd& f0) {
  if (g.size() != given.times.size()) throw PreconditionError("boundary datum on a different time grid");
  for (const auto& v : g.front()) {
    if (v.squaredNorm() != 0.0) throw PreconditionError("boundary datum must vanish at t = 0");
  }
  const OperatorCache cache = build_operator_cache(pb, given);
  return integrate(pb, cache, f0, interface_loads(pb, g));
}

void record_update(IterationLog& log, double update, double tol, int max_iters) {
  log.iterations += 1;
  log.updates.push_back(update);
  if (!std::isfinite(update)) {
    log.contracted = false;
    log.reason = "non-finite update";
    return;
  }
  const std::size_t n = log.updates.size();
  if (n >= 2 && log.updates[n - 2] > 0.0) log.ratios.push_back(update / log.updates[n - 2]);
  if (update < tol) {
    log.converged = true;
    return;
  }
  const std::size_t r = log.ratios.size();
  if (r >= 2 && log.ratios[r - 1] >= 1.0 && log.ratios[r - 2] >= 1.0) {
    log.contracted = false;
    log.reason = "two consecutive update ratios >= 1";
    return;
  }
  if (log.iterations >= max_iters) {
    log.contracted = false;
    log.reason = "iteration limit reached without convergence";
  }
}

LinearizedResult linearized_solve(const Problem& pb, const History& given, const Eigen::VectorXd& f0) {
  LinearizedResult res;
  res.cache = build_operator_cache(pb, given);
  History xi_hat = given;
  const double w = pb.config.relaxation;
  while (true) {
    res.datum = hhat(pb, res.cache, xi_hat);
    res.loads = interface_loads(pb, res.datum);
    res.trajectory = integrate(pb, res.cache, f0, res.loads);
    const History& out = res.trajectory.fields;
    const double upd = relative(pb.norms.solid_diff(out, xi_hat), pb.norms.solid(out).combined());
    record_update(res.log, upd, pb.config.fp_inner_tol, pb.config.max_inner_iters);
    if (res.log.converged || !res.log.contracted) break;
    for (std::size_t k = 0; k < xi_hat.displacement.size(); ++k)
      xi_hat.displacement[k] += w * (out.displacement[k] - xi_hat.displacement[k]);
  }
  return res;
}

MembershipReport membership_ledger(const Problem& pb, const History& h) {
  MembershipReport r;
  r.fluid = pb.norms.fluid(h);
  r.solid = pb.norms.solid(h);
  r.M_bound = pb.config.M_bound;
  r.member = r.fluid.combined() <= r.M_bound && r.solid.combined() <= r.M_bound;
  return r;
}

NonlinearResult nonlinear_solve(const Problem& pb, const Eigen::VectorXd& gamma0) {
  NonlinearResult res;
  res.f0 = project_initial(pb.basis, pb.mass0, gamma0 - pb.lift);
  History iterate = initial_iterate(pb, res.f0);
  const double w = pb.config.relaxation;
  res.det.min_det = std::numeric_limits<double>::infinity();
  auto fail = [&](const std::string& why) {
    res.status = SolveStatus::NonContraction;
    res.message = why;
    res.outer.contracted = false;
    if (res.outer.reason.empty()) res.outer.reason = why;
  };
  while (true) {
    res.cache.reset();  // frees the previous sweep's operators before building new ones
    LinearizedResult lin;
    try {
      lin = linearized_solve(pb, iterate, res.f0);
    } catch (const DetFloorError& e) {
      fail(std::string("determinant floor violated: ") + e.what());
      break;
    } catch (const SolveError& e) {
      fail(std::string("linear solve failed: ") + e.what());
      break;
    }
    res.det.merge(lin.cache.det);
    res.inner.push_back(lin.log);
    if (!lin.log.contracted) {
      fail("inner iteration did not contract: " + lin.log.reason);
      res.trajectory = std::move(lin.trajectory);
      break;
    }
    const History& out = lin.trajectory.fields;
    const double fd = pb.norms.fluid_diff(out, iterate);
    const double sd = pb.norms.solid_diff(out, iterate);
    const double fn = pb.norms.fluid(out).combined();
    const double sn = pb.norms.solid(out).combined();
    const double upd = relative(std::hypot(fd, sd), std::hypot(fn, sn));
    record_update(res.outer, upd, pb.config.fp_outer_tol, pb.config.max_outer_iters);
    res.trajectory = std::move(lin.trajectory);
    res.cache = std::move(lin.cache);
    res.loads = std::move(lin.loads);
    res.datum = std::move(lin.datum);
    if (res.outer.converged) break;
    if (!res.outer.contracted) {
      fail("outer iteration did not contract: " + res.outer.reason);
      break;
    }
    for (std::size_t k = 0; k < iterate.times.size(); ++k) {
      iterate.velocity[k] += w * (res.trajectory.fields.velocity[k] - iterate.velocity[k]);
      iterate.displacement[k] += w * (res.trajectory.fields.displacement[k] - iterate.displacement[k]);
    }
  }
  if (!res.trajectory.fields.times.empty()) res.membership = membership_ledger(pb, res.trajectory.fields);
  if (res.status == SolveStatus::Converged) res.pressure = recover_trajectory_pressure(pb, res.trajectory);
  return res;
}

std::vector<PressureField> recover_trajectory_pressure(const Problem& pb, const TrajectoryState& tr) {
  const PressureSystem ps(pb.disc);
  const History& h = tr.fields;
  std::vector<PressureField> out;
  for (std::size_t k = 0; k + 1 < h.times.size(); ++k) {
    const double dt = h.times[k + 1] - h.times[k];
    const MapState m = history_map_state(pb, h, static_cast<int>(k), true);
    const Eigen::VectorXd v = 0.5 * (h.velocity[k] + h.velocity[k + 1]);
    const Eigen::VectorXd dtv = (h.velocity[k + 1] - h.velocity[k]) / dt;
    out.push_back(ps.recover(v, dtv, m, pb.params, 0.5 * (h.times[k] + h.times[k + 1])));
  }
  return out;
}

SolverConfig time_window_bisect(const std::function<bool(const SolverConfig&)>& solve, const SolverConfig& cfg) {
  SolverConfig c = cfg;
  for (int halvings = 0;; ++halvings) {
    if (solve(c)) return c;
    if (halvings >= cfg.T_bisect_max) break;
    c.T *= 0.5;
    c.dt *= 0.5;
  }
  throw SolveError("no contraction after " + std::to_string(cfg.T_bisect_max) + " halvings of T");
}

}  // namespace fsi
