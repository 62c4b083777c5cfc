#include "fsi/space.hpp"

#include <map>
#include <utility>

namespace fsi {

int nodes_per_cell(int degree) {
  if (degree == 1) return 4;
  if (degree == 2) return 10;
  throw PreconditionError("unsupported polynomial degree " + std::to_string(degree));
}

FunctionSpace build_space(const ReferenceMesh& mesh, int degree) {
  FunctionSpace space;
  space.degree = degree;
  space.nodes_per_cell = nodes_per_cell(degree);
  space.node_coords = mesh.vertices;

  std::map<std::pair<int, int>, int> edge_node;
  auto edge = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    const auto it = edge_node.find(key);
    if (it != edge_node.end()) return it->second;
    const int id = static_cast<int>(space.node_coords.size());
    space.node_coords.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    edge_node.emplace(key, id);
    return id;
  };

  space.cell_nodes.reserve(mesh.cells.size() * space.nodes_per_cell);
  for (const auto& cell : mesh.cells) {
    for (int v : cell) space.cell_nodes.push_back(v);
    if (degree == 2) {
      for (const auto& e : kEdgeVertices) space.cell_nodes.push_back(edge(cell[e[0]], cell[e[1]]));
    }
  }

  space.node_flags.assign(space.node_coords.size(), 0);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const std::uint8_t flag = mesh.cell_region[c] == Region::Fluid ? kInFluid : kInSolid;
    for (int a = 0; a < space.nodes_per_cell; ++a) space.node_flags[space.node(c, a)] |= flag;
  }
  for (const auto& facet : mesh.facets) {
    std::vector<int> nodes(facet.vertices.begin(), facet.vertices.end());
    if (degree == 2) {
      const auto& v = facet.vertices;
      nodes.push_back(edge(v[0], v[1]));
      nodes.push_back(edge(v[0], v[2]));
      nodes.push_back(edge(v[1], v[2]));
    }
    std::uint8_t flag = 0;
    switch (facet.label) {
      case FacetLabel::GammaIn: flag = kOnGammaIn; break;
      case FacetLabel::GammaOut: flag = kOnGammaOut; break;
      case FacetLabel::GammaC: flag = kOnGammaC; break;
      case FacetLabel::Gamma2: flag = kOnGamma2; break;
    }
    for (int n : nodes) space.node_flags[n] |= flag;
    space.facet_nodes.push_back(std::move(nodes));
  }
  if (space.node_flags.size() != space.node_coords.size()) {
    throw InvariantError("facet references an edge that belongs to no cell");
  }

  space.dirichlet_mask.assign(space.num_dofs(), 0);
  for (int n = 0; n < space.num_nodes(); ++n) {
    if (space.pinned(n)) {
      for (int k = 0; k < 3; ++k) space.dirichlet_mask[FunctionSpace::dof(n, k)] = 1;
    }
  }
  return space;
}

CellGeometry cell_geometry(const ReferenceMesh& mesh, int cell) {
  CellGeometry g;
  const auto& v = mesh.cells[cell];
  g.origin = mesh.vertices[v[0]];
  for (int k = 0; k < 3; ++k) g.jacobian.col(k) = mesh.vertices[v[k + 1]] - g.origin;
  g.det = g.jacobian.determinant();
  const Mat3 inv = g.jacobian.inverse();
  g.grad_lambda[0] = Vec3::Zero();
  for (int k = 0; k < 3; ++k) {
    g.grad_lambda[k + 1] = inv.row(k).transpose();
    g.grad_lambda[0] -= g.grad_lambda[k + 1];
  }
  return g;
}

std::array<double, 4> barycentric(const CellGeometry& g, const Vec3& x) {
  const Vec3 l = g.jacobian.inverse() * (x - g.origin);
  return {1.0 - l[0] - l[1] - l[2], l[0], l[1], l[2]};
}

void shape_values(int degree, const std::array<double, 4>& b, double* values) {
  if (degree == 1) {
    for (int i = 0; i < 4; ++i) values[i] = b[i];
    return;
  }
  for (int i = 0; i < 4; ++i) values[i] = b[i] * (2.0 * b[i] - 1.0);
  for (int e = 0; e < 6; ++e) values[4 + e] = 4.0 * b[kEdgeVertices[e][0]] * b[kEdgeVertices[e][1]];
}

void shape_gradients(int degree, const std::array<double, 4>& b, const CellGeometry& g, Vec3* grads) {
  if (degree == 1) {
    for (int i = 0; i < 4; ++i) grads[i] = g.grad_lambda[i];
    return;
  }
  for (int i = 0; i < 4; ++i) grads[i] = (4.0 * b[i] - 1.0) * g.grad_lambda[i];
  for (int e = 0; e < 6; ++e) {
    const int i = kEdgeVertices[e][0];
    const int j = kEdgeVertices[e][1];
    grads[4 + e] = 4.0 * (b[j] * g.grad_lambda[i] + b[i] * g.grad_lambda[j]);
  }
}

void shape_hessians(int degree, const CellGeometry& g, Mat3* hessians) {
  if (degree == 1) {
    for (int i = 0; i < 4; ++i) hessians[i].setZero();
    return;
  }
  for (int i = 0; i < 4; ++i) hessians[i] = 4.0 * g.grad_lambda[i] * g.grad_lambda[i].transpose();
  for (int e = 0; e < 6; ++e) {
    const Vec3& gi = g.grad_lambda[kEdgeVertices[e][0]];
    const Vec3& gj = g.grad_lambda[kEdgeVertices[e][1]];
    hessians[4 + e] = 4.0 * (gi * gj.transpose() + gj * gi.transpose());
  }
}

}  // namespace fsi
