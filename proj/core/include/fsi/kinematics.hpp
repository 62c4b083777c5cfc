#pragma once

#include <vector>

#include "fsi/discretization.hpp"
#include "fsi/fields.hpp"

namespace fsi {

/// One 3x3 matrix per (cell, quadrature point) over the whole mesh, laid out
/// as cell * nq + q. Cells outside the owning region hold the identity.
struct TensorField {
  std::vector<Mat3> values;
  double time = 0.0;
};

double levi_civita(int i, int j, int k);
/// det F = 1/6 eps_ijk eps_pqr F_ip F_jq F_kr.
double levi_civita_det(const Mat3& F);
/// cof(F)_ij = 1/2 eps_mni eps_pqj F_mp F_nq.
Mat3 levi_civita_cof(const Mat3& F);
/// Throws DetFloorError when det F <= floor.
Mat3 checked_inverse(const Mat3& F, double floor);

std::vector<double> determinant(const TensorField& F);
TensorField cofactor(const TensorField& F);
/// Throws DetFloorError carrying the worst point when any det <= floor.
TensorField inverse(const TensorField& F, double floor, int nq);

/// Velocity samples at increasing times starting from 0.
struct VelocityHistory {
  std::vector<double> times;
  std::vector<VectorField> velocity;
};

/// Nodal values of int_0^t v ds: trapezoid rule over the stored samples, with
/// linear interpolation inside the last interval.
Eigen::VectorXd integrate_history(const VelocityHistory& h, double t, double max_step);

/// Id + grad(int_0^t v ds) on the fluid cells.
TensorField build_flow_map(const Discretization& d, const VelocityHistory& h, double t, double max_step);

/// Id + grad(xi) on the solid cells. Rejects fields supported on the fluid only.
TensorField build_deformation(const Discretization& d, const VectorField& xi, double t = 0.0);

/// Id + grad(u) evaluated on the cells of one region.
TensorField identity_plus_grad(const Discretization& d, const Eigen::VectorXd& u, Region r, double t);
TensorField identity_field(const Discretization& d, double t = 0.0);

struct MapState {
  TensorField flow_grad;
  TensorField defo_grad;
  std::vector<double> det_flow, det_defo;
  TensorField cof_flow, cof_defo;
  TensorField inv_flow;
};

/// Derives determinants, cofactors and the flow inverse. Throws DetFloorError
/// when a fluid determinant drops to the floor.
MapState make_map_state(const Discretization& d, TensorField flow, TensorField defo, double det_floor);
MapState identity_map_state(const Discretization& d, double t = 0.0);

struct DetMonitorReport {
  double min_det = 1.0;
  Region region = Region::Fluid;
  int cell = -1;
  int qp = -1;
  double time = 0.0;
  bool flagged = false;

  /// Keeps the smaller minimum of the two reports.
  void merge(const DetMonitorReport& other);
};

DetMonitorReport det_floor_monitor(const Discretization& d, const MapState& m, double floor);

}  // namespace fsi
