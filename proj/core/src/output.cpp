#include "fsi/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fsi {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string snapshot_csv(const Discretization& d, const Eigen::VectorXd& nodal, Support s) {
  std::string out = std::string("# schema ") + kSnapshotSchema + "\ndof_index,x,y,z,component,value\n";
  for (int n = 0; n < d.space.num_nodes(); ++n) {
    if (!node_in_support(d.space, n, s)) continue;
    const Vec3& x = d.space.node_coords[n];
    for (int i = 0; i < 3; ++i) {
      const int dof = 3 * n + i;
      out += std::to_string(dof) + ',' + format_double(x[0]) + ',' + format_double(x[1]) + ',' + format_double(x[2]) +
             ',' + std::to_string(i) + ',' + format_double(nodal[dof]) + '\n';
    }
  }
  return out;
}

std::string pressure_snapshot_csv(const Discretization& d, const Eigen::VectorXd& p) {
  std::string out = std::string("# schema ") + kSnapshotSchema + "\ndof_index,x,y,z,component,value\n";
  for (int k = 0; k < d.num_pressure(); ++k) {
    const Vec3& x = d.mesh.vertices[d.pressure_vertex[k]];
    out += std::to_string(k) + ',' + format_double(x[0]) + ',' + format_double(x[1]) + ',' + format_double(x[2]) +
           ",0," + format_double(p[k]) + '\n';
  }
  return out;
}

std::vector<TimeseriesRow> trajectory_timeseries(const Problem& pb, const TrajectoryState& tr,
                                                 const std::vector<PressureField>& pressure) {
  std::vector<TimeseriesRow> rows;
  const auto& h = tr.fields;
  const auto& nm = pb.norms;
  auto qf = [](const SparseMatrix& A, const Eigen::VectorXd& u) { return std::sqrt(std::max(0.0, u.dot(A * u))); };
  for (std::size_t k = 0; k < h.times.size(); ++k) {
    const int s = static_cast<int>(k);
    const double t = h.times[k];
    const auto& v = h.velocity[k];
    const auto& x = h.displacement[k];
    rows.push_back({s, t, "velocity", "L2", qf(nm.mass_f, v)});
    rows.push_back({s, t, "velocity", "H1", std::hypot(qf(nm.mass_f, v), qf(nm.stiff_f, v))});
    rows.push_back({s, t, "displacement", "L2", qf(nm.mass_s, x)});
    rows.push_back({s, t, "displacement", "H1", std::hypot(qf(nm.mass_s, x), qf(nm.stiff_s, x))});
  }
  if (!pressure.empty()) {
    const SparseMatrix mp = pressure_mass(pb.disc);
    for (std::size_t k = 0; k < pressure.size(); ++k) {
      const auto& p = pressure[k];
      rows.push_back({static_cast<int>(k), p.time, "pressure", "L2", qf(mp, p.values)});
      rows.push_back({static_cast<int>(k), p.time, "pressure", "residual_dual", p.residual_dual});
    }
  }
  return rows;
}

std::string timeseries_csv(const std::vector<TimeseriesRow>& rows) {
  std::string out = std::string("# schema ") + kTimeseriesSchema + "\nstep,time,field,metric,value\n";
  for (const auto& r : rows)
    out += std::to_string(r.step) + ',' + format_double(r.time) + ',' + r.field + ',' + r.metric + ',' +
           format_double(r.value) + '\n';
  return out;
}

namespace {

std::string ledger_header(const char* kind, const char* columns) {
  return std::string("# schema ") + kLedgerSchema + " " + kind + "\n" + columns + "\n";
}

}  // namespace

std::string energy_csv(const EnergyLedger& led) {
  std::string out = ledger_header(
      "energy",
      "step,time,kinetic_fluid,kinetic_solid,elastic,dissipation,gradient_term,map_correction,work,imbalance,relative_imbalance");
  for (const auto& r : led.rows) {
    out += std::to_string(r.step);
    for (double v : {r.time, r.kinetic_fluid, r.kinetic_solid, r.elastic, r.dissipation, r.gradient_term,
                     r.map_correction, r.work, r.imbalance, r.relative_imbalance()})
      out += ',' + format_double(v);
    out += '\n';
  }
  return out;
}

std::string iteration_csv(const IterationLog& outer, const std::vector<IterationLog>& inner) {
  std::string out = ledger_header("iterations", "loop,sweep,iteration,update,ratio");
  auto rows = [&](const IterationLog& log, const std::string& loop, int sweep) {
    for (std::size_t i = 0; i < log.updates.size(); ++i) {
      const double ratio = i == 0 ? std::nan("") : log.ratios[i - 1];
      out += loop + ',' + std::to_string(sweep) + ',' + std::to_string(i + 1) + ',' + format_double(log.updates[i]) + ',' +
             format_double(ratio) + '\n';
    }
  };
  rows(outer, "outer", 0);
  for (std::size_t s = 0; s < inner.size(); ++s) rows(inner[s], "inner", static_cast<int>(s + 1));
  return out;
}

std::string membership_csv(const MembershipReport& m) {
  std::string out = ledger_header("membership", "field,norm,value,M_bound,within");
  auto rows = [&](const char* field, const NormBreakdown& b) {
    for (std::size_t i = 0; i < b.values.size(); ++i)
      out += std::string(field) + ',' + b.names[i] + ',' + format_double(b.values[i]) + ',' + format_double(m.M_bound) +
             ',' + (b.values[i] <= m.M_bound ? "1" : "0") + '\n';
  };
  rows("velocity", m.fluid);
  rows("displacement", m.solid);
  return out;
}

std::string interface_csv(const std::vector<InterfaceResidualRow>& rows) {
  std::string out = ledger_header("interface", "step,time,velocity_continuity,traction_defect");
  for (const auto& r : rows)
    out += std::to_string(r.step) + ',' + format_double(r.time) + ',' + format_double(r.velocity) + ',' +
           format_double(r.traction) + '\n';
  return out;
}

std::string compatibility_csv(const CompatibilityReport& r) {
  std::string out = ledger_header("compatibility", "condition,domain,status,residual,tolerance,severity");
  for (const auto& c : r.conditions) {
    const char* status = !c.evaluated ? "skipped" : c.pass ? "pass" : "fail";
    out += std::to_string(c.index) + ',' + c.domain + ',' + status + ',' + format_double(c.residual) + ',' +
           format_double(c.tolerance) + ',' + (c.severity == Severity::Error ? "error" : "warn") + '\n';
  }
  return out;
}

void emit_outputs(const RunArtifacts& a, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const NonlinearResult* res = a.result;
  if (!a.config_text.empty()) write_file_atomic(dir / "config.ini", a.config_text);

  write_file_atomic(dir / "ledger_energy.csv", energy_csv(a.energy.value_or(EnergyLedger{})));
  write_file_atomic(dir / "ledger_iterations.csv", res ? iteration_csv(res->outer, res->inner) : iteration_csv({}, {}));
  write_file_atomic(dir / "ledger_membership.csv", membership_csv(res ? res->membership : MembershipReport{}));
  write_file_atomic(dir / "ledger_interface.csv", interface_csv(a.interface));
  if (a.compatibility) write_file_atomic(dir / "ledger_compatibility.csv", compatibility_csv(*a.compatibility));

  std::vector<TimeseriesRow> ts;
  if (res && a.problem) ts = trajectory_timeseries(*a.problem, res->trajectory, res->pressure);
  write_file_atomic(dir / "timeseries.csv", timeseries_csv(ts));

  if (res && a.disc && a.snapshots) {
    const auto& h = res->trajectory.fields;
    char name[64];
    for (std::size_t k = 0; k < h.times.size(); ++k) {
      std::snprintf(name, sizeof name, "velocity_%04zu.csv", k);
      write_file_atomic(dir / "snapshots" / name, snapshot_csv(*a.disc, h.velocity[k], Support::Fluid));
      std::snprintf(name, sizeof name, "displacement_%04zu.csv", k);
      write_file_atomic(dir / "snapshots" / name, snapshot_csv(*a.disc, h.displacement[k], Support::Solid));
    }
    for (std::size_t k = 0; k < res->pressure.size(); ++k) {
      std::snprintf(name, sizeof name, "pressure_%04zu.csv", k);
      write_file_atomic(dir / "snapshots" / name, pressure_snapshot_csv(*a.disc, res->pressure[k].values));
    }
  }

  nlohmann::ordered_json j;
  j["schema"] = "fsi.status/1";
  j["exit_code"] = a.exit_code;
  j["status"] = a.status;
  j["message"] = a.message;
  j["T"] = format_double(a.T_used);
  j["dt"] = format_double(a.dt_used);
  if (res) {
    j["steps"] = res->trajectory.fields.times.empty() ? 0 : static_cast<int>(res->trajectory.fields.times.size()) - 1;
    j["outer_iterations"] = res->outer.iterations;
    j["outer_converged"] = res->outer.converged;
    j["outer_contracted"] = res->outer.contracted;
    j["outer_reason"] = res->outer.reason;
    nlohmann::ordered_json ratios = nlohmann::ordered_json::array();
    for (double r : res->outer.ratios) ratios.push_back(format_double(r));
    j["outer_ratios"] = ratios;
    j["inner_iterations"] = nlohmann::ordered_json::array();
    for (const auto& l : res->inner) j["inner_iterations"].push_back(l.iterations);
    j["member"] = res->membership.member;
    j["min_det"] = format_double(res->det.min_det);
    j["det_flagged"] = res->det.flagged;
  }
  if (a.energy) {
    j["max_relative_imbalance"] = format_double(a.energy->max_relative_imbalance());
    j["estimate_ratio"] = format_double(a.energy->estimate_ratio);
  }
  j["divergence_residual"] = format_double(a.divergence_residual);
  if (a.compatibility) j["compatibility_data_scale"] = format_double(a.compatibility->data_scale);
  write_file_atomic(dir / "status.json", j.dump(2) + "\n");
}

}  // namespace fsi
