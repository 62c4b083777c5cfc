#include "fsi/run.hpp"

#include <memory>

#include "fsi/diagnostics.hpp"
#include "fsi/output.hpp"

namespace fsi {
namespace {

Preset resolved(const RunConfig& c, Preset p) {
  if (p.kind == "file") p.path = c.resolve(p.path).string();
  return p;
}

struct Setup {
  std::unique_ptr<Discretization> disc;
  CompatibilityInput input;
  Eigen::VectorXd lift;
};

Setup prepare(const RunConfig& c) {
  c.validate();
  Setup s;
  s.disc = std::make_unique<Discretization>(make_discretization(load_mesh(c.resolve(c.mesh_path)), c.degree, c.quad_order));
  const Discretization& d = *s.disc;
  s.input.v0 = vector_preset(d, resolved(c, c.initial.v0), Support::Fluid);
  s.input.xi1 = vector_preset(d, resolved(c, c.initial.xi1), Support::Solid);
  s.input.p0 = pressure_preset(d, resolved(c, c.initial.p0));
  if (c.initial.dtp0) s.input.dtp0 = pressure_preset(d, resolved(c, *c.initial.dtp0));
  if (c.initial.dttp0) s.input.dttp0 = pressure_preset(d, resolved(c, *c.initial.dttp0));
  // Inflow lives on gamma_in nodes that are not also pinned by the solid or shared with it.
  const VectorField vin = vector_preset(d, resolved(c, c.inflow), Support::Fluid);
  s.lift = Eigen::VectorXd::Zero(d.num_dofs());
  for (int n = 0; n < d.space.num_nodes(); ++n) {
    const auto f = d.space.node_flags[n];
    if ((f & kOnGammaIn) && !(f & kOnGamma2) && !d.space.on_interface(n)) s.lift.segment<3>(3 * n) = vin.values.segment<3>(3 * n);
  }
  return s;
}

void report_failure(const RunConfig& c, RunOutcome& o, std::ostream& log) {
  log << "error: " << o.message << "\n";
  if (o.output_dir.empty()) return;
  RunArtifacts a;
  a.exit_code = o.exit_code;
  a.status = o.exit_code == kExitNonContraction ? "non_contraction" : "config_error";
  a.message = o.message;
  a.T_used = c.solver.T;
  a.dt_used = c.solver.dt;
  try {
    emit_outputs(a, o.output_dir);
  } catch (const std::exception& e) {
    log << "error: could not write failure report: " << e.what() << "\n";
  }
}

}  // namespace

RunOutcome run(const RunConfig& cfg, std::ostream& log) {
  RunOutcome out;
  out.output_dir = cfg.resolve(cfg.output_dir);
  Setup s;
  try {
    s = prepare(cfg);
  } catch (const Error& e) {
    out.exit_code = kExitConfig;
    out.message = e.what();
    report_failure(cfg, out, log);
    return out;
  }
  const Discretization& d = *s.disc;

  RunArtifacts art;
  art.disc = &d;
  art.config_text = serialize_config(cfg);
  art.snapshots = cfg.write_snapshots;
  art.compatibility = check_compatibility(d, s.input, cfg.material, cfg.initial.compat_tol);
  if (!art.compatibility->passed(cfg.initial.strictness)) {
    out.exit_code = kExitIncompatible;
    out.message = std::string("initial data fails the compatibility check at strictness '") +
                  to_string(cfg.initial.strictness) + "'";
    art.exit_code = out.exit_code;
    art.status = "incompatible";
    art.message = out.message;
    art.T_used = cfg.solver.T;
    art.dt_used = cfg.solver.dt;
    log << "error: " << out.message << "\n";
    emit_outputs(art, out.output_dir);
    return out;
  }

  SolverConfig sc = cfg.solver;
  sc.threads = effective_threads(cfg);
  std::unique_ptr<Problem> pb;
  NonlinearResult result;
  Eigen::VectorXd gamma0;
  try {
    pb = std::make_unique<Problem>(d, cfg.material, sc);
    pb->lift = s.lift;
    gamma0 = unify_initial(d, s.input.v0, s.input.xi1);
    sc = time_window_bisect(
        [&](const SolverConfig& trial) {
          pb->config = trial;
          result = nonlinear_solve(*pb, gamma0);
          log << "T = " << format_double(trial.T) << ": " << (result.status == SolveStatus::Converged ? "converged" : result.message)
              << "\n";
          return result.status == SolveStatus::Converged;
        },
        sc);
  } catch (const PreconditionError& e) {
    out.exit_code = kExitConfig;
    out.message = e.what();
  } catch (const SolveError& e) {
    out.exit_code = result.status == SolveStatus::NonContraction ? kExitNonContraction : kExitConfig;
    out.message = result.message.empty() ? e.what() : result.message + " (" + e.what() + ")";
  } catch (const Error& e) {
    out.exit_code = kExitConfig;
    out.message = e.what();
  }

  art.problem = pb.get();
  art.result = pb ? &result : nullptr;
  art.T_used = pb ? pb->config.T : sc.T;
  art.dt_used = pb ? pb->config.dt : sc.dt;
  if (pb && !result.trajectory.times.empty()) {
    if (result.cache) art.energy = energy_ledger(*result.cache, result.trajectory, result.loads);
    art.interface = interface_residuals(*pb, result.trajectory, result.datum, result.pressure);
    art.divergence_residual = max_divergence_residual(*pb, result.trajectory);
  }
  art.exit_code = out.exit_code;
  art.status = out.exit_code == kExitOk ? "converged" : out.exit_code == kExitNonContraction ? "non_contraction" : "config_error";
  art.message = out.message;
  try {
    emit_outputs(art, out.output_dir);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    if (out.exit_code == kExitOk) {
      out.exit_code = kExitConfig;
      out.message = e.what();
    }
  }
  if (out.exit_code != kExitOk) log << "error: " << out.message << "\n";
  return out;
}

RunOutcome run_file(const std::filesystem::path& config_path, std::ostream& log) {
  RunConfig c;
  try {
    c = load_config(config_path);
  } catch (const Error& e) {
    RunOutcome o;
    o.exit_code = kExitConfig;
    o.message = e.what();
    // Without a parsed config the report goes next to the config file.
    o.output_dir = config_path.parent_path() / "fsi_failure";
    report_failure(c, o, log);
    return o;
  }
  return run(c, log);
}

int check_file(const std::filesystem::path& config_path, std::ostream& out) {
  try {
    const RunConfig c = load_config(config_path);
    const Setup s = prepare(c);
    const CompatibilityReport r = check_compatibility(*s.disc, s.input, c.material, c.initial.compat_tol);
    out << compatibility_csv(r);
    for (const auto& [name, v] : r.intermediates) out << "# " << name << " " << format_double(v) << "\n";
    out << "# data_scale " << format_double(r.data_scale) << "\n";
    const bool ok = r.passed(c.initial.strictness);
    out << "# strictness " << to_string(c.initial.strictness) << " " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kExitOk : kExitIncompatible;
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int infsup_file(const std::filesystem::path& config_path, std::ostream& out) {
  try {
    const RunConfig c = load_config(config_path);
    c.validate();
    const Discretization d = make_discretization(load_mesh(c.resolve(c.mesh_path)), c.degree, c.quad_order);
    const InfSupReport r = measure_infsup(d, identity_map_state(d), c.infsup_threshold);
    out << "beta_h " << format_double(r.beta_h) << "\n"
        << "velocity_degree " << r.velocity_degree << "\n"
        << "velocity_dofs " << r.velocity_dofs << "\n"
        << "pressure_dofs " << r.pressure_dofs << "\n"
        << "threshold " << format_double(r.threshold) << "\n"
        << "pass " << (r.pass ? "true" : "false") << "\n";
    return r.pass ? kExitOk : kExitIncompatible;
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace fsi
