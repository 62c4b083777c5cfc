#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fsi/mesh.hpp"
#include "fsi/types.hpp"

namespace fsi {

/// Node flags: which labeled facets a node lies on (closure) and which regions touch it.
enum NodeFlag : std::uint8_t {
  kOnGammaIn = 1u << 0,
  kOnGammaOut = 1u << 1,
  kOnGammaC = 1u << 2,
  kOnGamma2 = 1u << 3,
  kInFluid = 1u << 4,
  kInSolid = 1u << 5,
};

/// Continuous Lagrange space of degree 1 or 2 on the whole reference mesh.
/// Vector-valued fields use 3 dofs per node, dof = 3 * node + component.
/// Interface nodes are single nodes shared by fluid and solid cells.
struct FunctionSpace {
  int degree = 1;
  int nodes_per_cell = 4;
  std::vector<Vec3> node_coords;
  std::vector<int> cell_nodes;           // num_cells * nodes_per_cell
  std::vector<std::uint8_t> node_flags;
  std::vector<std::vector<int>> facet_nodes;  // per mesh facet: 3 or 6 nodes
  std::vector<char> dirichlet_mask;       // per vector dof: pinned by gamma_in / gamma_2

  int num_nodes() const { return static_cast<int>(node_coords.size()); }
  int num_dofs() const { return 3 * num_nodes(); }
  int node(int cell, int local) const { return cell_nodes[cell * nodes_per_cell + local]; }
  static int dof(int node, int component) { return 3 * node + component; }

  bool in_region(int node, Region r) const {
    return node_flags[node] & (r == Region::Fluid ? kInFluid : kInSolid);
  }
  bool on_interface(int node) const { return (node_flags[node] & kInFluid) && (node_flags[node] & kInSolid); }
  bool pinned(int node) const { return node_flags[node] & (kOnGammaIn | kOnGamma2); }
};

/// Builds the nodal layout; throws PreconditionError for degree outside {1, 2}.
FunctionSpace build_space(const ReferenceMesh& mesh, int degree);

int nodes_per_cell(int degree);

/// Affine geometry of one tetrahedron.
struct CellGeometry {
  Mat3 jacobian;  // columns x1-x0, x2-x0, x3-x0
  double det = 0.0;
  std::array<Vec3, 4> grad_lambda;
  Vec3 origin;
};

CellGeometry cell_geometry(const ReferenceMesh& mesh, int cell);

std::array<double, 4> barycentric(const CellGeometry& g, const Vec3& x);

// Local node order for degree 2: vertices 0..3, then edges (01)(02)(03)(12)(13)(23).
inline constexpr std::array<std::array<int, 2>, 6> kEdgeVertices{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

void shape_values(int degree, const std::array<double, 4>& bary, double* values);
void shape_gradients(int degree, const std::array<double, 4>& bary, const CellGeometry& g, Vec3* grads);
/// Hessians are constant per cell for degrees 1 and 2.
void shape_hessians(int degree, const CellGeometry& g, Mat3* hessians);

}  // namespace fsi
