#pragma once

#include <vector>

#include "fsi/solvers.hpp"

namespace fsi {

/// Terms of the discrete energy balance after each step. Cumulative terms
/// start at zero at step 0.
///   E(t_k) + dissipation + gradient_term - map_correction = work + E(0)
/// with E = kinetic_fluid + kinetic_solid + elastic.
struct EnergyRow {
  int step = 0;
  double time = 0.0;
  double kinetic_fluid = 0.0;
  double kinetic_solid = 0.0;
  double elastic = 0.0;
  double dissipation = 0.0;
  double gradient_term = 0.0;   // from the coefficient-gradient part of the structure stiffness
  double map_correction = 0.0;  // change of the weighted mass and stiffness between node and midpoint
  double work = 0.0;
  double imbalance = 0.0;
  double scale = 0.0;

  double energy() const { return kinetic_fluid + kinetic_solid + elastic; }
  double relative_imbalance() const { return scale > 0.0 ? imbalance / scale : 0.0; }
};

struct EnergyLedger {
  std::vector<EnergyRow> rows;
  /// max_k (E_k + dissipation_k) / (E_0 + sum dt |C_m|^2); constants unknown, ratio only.
  double estimate_ratio = 0.0;

  double max_relative_imbalance() const;
};

EnergyLedger energy_ledger(const OperatorCache& cache, const TrajectoryState& tr,
                           const std::vector<Eigen::VectorXd>& node_loads);

struct InterfaceResidualRow {
  int step = 0;
  double time = 0.0;
  double velocity = 0.0;  // max |v - d_t xi| over interface dofs
  double traction = 0.0;  // L2 norm over gamma_c of the traction-balance defect (midpoint rows)
};

/// Velocity continuity at every node and the weak traction defect at every
/// midpoint (pressure may be empty, then it is taken as zero).
std::vector<InterfaceResidualRow> interface_residuals(const Problem& pb, const TrajectoryState& tr,
                                                      const std::vector<InterfaceDatum>& datum,
                                                      const std::vector<PressureField>& pressure);

/// Largest |constraint * velocity| over the steps (pinned rows included).
double max_divergence_residual(const Problem& pb, const TrajectoryState& tr);

}  // namespace fsi
