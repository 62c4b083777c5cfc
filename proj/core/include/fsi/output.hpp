#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fsi/compatibility.hpp"
#include "fsi/diagnostics.hpp"
#include "fsi/solvers.hpp"

namespace fsi {

inline constexpr const char* kSnapshotSchema = "fsi.snapshot/1";
inline constexpr const char* kTimeseriesSchema = "fsi.timeseries/1";
inline constexpr const char* kLedgerSchema = "fsi.ledger/1";

/// %.17g
std::string format_double(double v);

/// Writes to a sibling temp file and renames it over the target.
/// Throws Error naming the path on failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// One row per dof of the support: dof_index,x,y,z,component,value.
std::string snapshot_csv(const Discretization& d, const Eigen::VectorXd& nodal, Support s);
/// Pressure values at the fluid vertices, component 0.
std::string pressure_snapshot_csv(const Discretization& d, const Eigen::VectorXd& p);

struct TimeseriesRow {
  int step = 0;
  double time = 0.0;
  std::string field, metric;
  double value = 0.0;
};

std::vector<TimeseriesRow> trajectory_timeseries(const Problem& pb, const TrajectoryState& tr,
                                                 const std::vector<PressureField>& pressure);
std::string timeseries_csv(const std::vector<TimeseriesRow>& rows);

std::string energy_csv(const EnergyLedger& led);
std::string iteration_csv(const IterationLog& outer, const std::vector<IterationLog>& inner);
std::string membership_csv(const MembershipReport& m);
std::string interface_csv(const std::vector<InterfaceResidualRow>& rows);
std::string compatibility_csv(const CompatibilityReport& r);

/// Everything a run leaves behind. Missing pieces produce header-only ledgers.
struct RunArtifacts {
  const Discretization* disc = nullptr;
  const Problem* problem = nullptr;
  const NonlinearResult* result = nullptr;
  std::optional<EnergyLedger> energy;
  std::vector<InterfaceResidualRow> interface;
  std::optional<CompatibilityReport> compatibility;
  std::string config_text;
  bool snapshots = true;
  // status.json
  int exit_code = 0;
  std::string status;
  std::string message;
  double T_used = 0.0;
  double dt_used = 0.0;
  double divergence_residual = 0.0;
};

void emit_outputs(const RunArtifacts& a, const std::filesystem::path& dir);

}  // namespace fsi
