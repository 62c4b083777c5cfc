#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "fsi/mesh.hpp"
#include "fsi/quadrature.hpp"
#include "fsi/space.hpp"

namespace fsi {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Quadrature data on one interface facet, seen from both adjacent cells.
struct InterfaceFacet {
  int facet = -1;
  int fluid_cell = -1;
  int solid_cell = -1;
  Vec3 normal;  // unit, outward from the fluid cell
  std::vector<double> jxw;
  std::vector<Vec3> x;
  // Shape data of each side, indexed q * nodes_per_cell + a.
  std::vector<double> fluid_phi, solid_phi;
  std::vector<Vec3> fluid_dphi, solid_dphi;
};

/// Everything the assembly loops need that only depends on the reference
/// configuration: geometry, cell quadrature, shape tables and the interface.
struct Discretization {
  ReferenceMesh mesh;
  FunctionSpace space;
  QuadratureRule cell_rule;
  QuadratureRule facet_rule;
  int nq = 0;
  int npc = 0;

  std::vector<CellGeometry> geometry;
  std::vector<double> phi_ref;  // q * npc + a, identical for every cell
  std::vector<double> jxw;      // cell * nq + q
  std::vector<Vec3> qx;         // cell * nq + q
  std::vector<Vec3> dphi;       // (cell * nq + q) * npc + a
  std::vector<Mat3> hess;       // cell * npc + a
  std::vector<int> fluid_cells;
  std::vector<int> solid_cells;
  std::vector<InterfaceFacet> interface;

  // Continuous P1 pressure on the fluid vertices.
  std::vector<int> pressure_index;  // per mesh vertex, -1 off the fluid
  std::vector<int> pressure_vertex;

  int qp(int cell, int q) const { return cell * nq + q; }
  double phi(int q, int a) const { return phi_ref[q * npc + a]; }
  const Vec3& grad(int cell, int q, int a) const { return dphi[(cell * nq + q) * npc + a]; }
  const std::vector<int>& cells(Region r) const { return r == Region::Fluid ? fluid_cells : solid_cells; }
  int num_pressure() const { return static_cast<int>(pressure_vertex.size()); }
  int num_dofs() const { return space.num_dofs(); }
};

/// quad_order <= 0 selects 2 * degree + 2.
Discretization make_discretization(ReferenceMesh mesh, int degree, int quad_order = 0);

Vec3 value_at(const Discretization& d, const Eigen::VectorXd& u, int cell, int q);
/// (grad u)_{i alpha} = d u_i / d x_alpha.
Mat3 grad_at(const Discretization& d, const Eigen::VectorXd& u, int cell, int q);

/// Vector mass and H1-seminorm matrices over one region with unit density.
SparseMatrix region_mass(const Discretization& d, Region r);
SparseMatrix region_stiffness(const Discretization& d, Region r);
/// Scalar P1 pressure mass matrix on the fluid.
SparseMatrix pressure_mass(const Discretization& d);

}  // namespace fsi
