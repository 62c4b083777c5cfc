#include "fsi/discretization.hpp"

#include <algorithm>

namespace fsi {

namespace {

void side_shape(const Discretization& d, int cell, const Vec3& x, std::vector<double>& phi,
                std::vector<Vec3>& dphi) {
  const auto& g = d.geometry[cell];
  const auto b = barycentric(g, x);
  const std::size_t off = phi.size();
  phi.resize(off + d.npc);
  dphi.resize(off + d.npc);
  shape_values(d.space.degree, b, phi.data() + off);
  shape_gradients(d.space.degree, b, g, dphi.data() + off);
}

}  // namespace

Discretization make_discretization(ReferenceMesh mesh, int degree, int quad_order) {
  mesh.validate();
  Discretization d;
  d.mesh = std::move(mesh);
  d.space = build_space(d.mesh, degree);
  if (quad_order <= 0) quad_order = 2 * degree + 2;
  d.cell_rule = tetrahedron_rule(quad_order);
  d.facet_rule = triangle_rule(quad_order);
  d.nq = d.cell_rule.size();
  d.npc = d.space.nodes_per_cell;

  const int nc = d.mesh.num_cells();
  d.phi_ref.resize(static_cast<std::size_t>(d.nq) * d.npc);
  for (int q = 0; q < d.nq; ++q) shape_values(degree, d.cell_rule.points[q], &d.phi_ref[q * d.npc]);

  d.geometry.resize(nc);
  d.jxw.resize(static_cast<std::size_t>(nc) * d.nq);
  d.qx.resize(d.jxw.size());
  d.dphi.resize(d.jxw.size() * d.npc);
  d.hess.resize(static_cast<std::size_t>(nc) * d.npc);
  for (int c = 0; c < nc; ++c) {
    const auto g = cell_geometry(d.mesh, c);
    d.geometry[c] = g;
    shape_hessians(degree, g, &d.hess[c * d.npc]);
    for (int q = 0; q < d.nq; ++q) {
      const auto& b = d.cell_rule.points[q];
      d.jxw[d.qp(c, q)] = d.cell_rule.weights[q] * g.det;
      d.qx[d.qp(c, q)] = g.origin + g.jacobian * Vec3(b[1], b[2], b[3]);
      shape_gradients(degree, b, g, &d.dphi[d.qp(c, q) * d.npc]);
    }
    (d.mesh.cell_region[c] == Region::Fluid ? d.fluid_cells : d.solid_cells).push_back(c);
  }

  const auto neighbours = facet_neighbours(d.mesh);
  for (int f = 0; f < static_cast<int>(d.mesh.facets.size()); ++f) {
    const auto& facet = d.mesh.facets[f];
    if (facet.label != FacetLabel::GammaC) continue;
    InterfaceFacet fi;
    fi.facet = f;
    const auto& nb = neighbours[f];
    const bool first_fluid = d.mesh.cell_region[nb.first] == Region::Fluid;
    fi.fluid_cell = first_fluid ? nb.first : nb.second;
    fi.solid_cell = first_fluid ? nb.second : nb.first;

    const Vec3& p0 = d.mesh.vertices[facet.vertices[0]];
    const Vec3& p1 = d.mesh.vertices[facet.vertices[1]];
    const Vec3& p2 = d.mesh.vertices[facet.vertices[2]];
    Vec3 n = (p1 - p0).cross(p2 - p0);
    const double area = 0.5 * n.norm();
    n.normalize();
    Vec3 centroid = Vec3::Zero();
    for (int v : d.mesh.cells[fi.fluid_cell]) centroid += d.mesh.vertices[v];
    centroid /= 4.0;
    if (n.dot(p0 - centroid) < 0.0) n = -n;
    fi.normal = n;

    for (int q = 0; q < d.facet_rule.size(); ++q) {
      const auto& b = d.facet_rule.points[q];
      const Vec3 x = b[0] * p0 + b[1] * p1 + b[2] * p2;
      fi.x.push_back(x);
      fi.jxw.push_back(2.0 * area * d.facet_rule.weights[q]);
      side_shape(d, fi.fluid_cell, x, fi.fluid_phi, fi.fluid_dphi);
      side_shape(d, fi.solid_cell, x, fi.solid_phi, fi.solid_dphi);
    }
    d.interface.push_back(std::move(fi));
  }

  d.pressure_index.assign(d.mesh.num_vertices(), -1);
  for (int c : d.fluid_cells) {
    for (int v : d.mesh.cells[c]) {
      if (d.pressure_index[v] < 0) d.pressure_index[v] = 0;
    }
  }
  for (int v = 0; v < d.mesh.num_vertices(); ++v) {
    if (d.pressure_index[v] >= 0) {
      d.pressure_index[v] = static_cast<int>(d.pressure_vertex.size());
      d.pressure_vertex.push_back(v);
    }
  }
  return d;
}

Vec3 value_at(const Discretization& d, const Eigen::VectorXd& u, int cell, int q) {
  Vec3 out = Vec3::Zero();
  for (int a = 0; a < d.npc; ++a) {
    const int n = d.space.node(cell, a);
    out += d.phi(q, a) * u.segment<3>(3 * n);
  }
  return out;
}

Mat3 grad_at(const Discretization& d, const Eigen::VectorXd& u, int cell, int q) {
  Mat3 out = Mat3::Zero();
  for (int a = 0; a < d.npc; ++a) {
    const int n = d.space.node(cell, a);
    out.noalias() += u.segment<3>(3 * n) * d.grad(cell, q, a).transpose();
  }
  return out;
}

namespace {

template <class Kernel>
SparseMatrix assemble_vector_form(const Discretization& d, Region r, Kernel kernel) {
  std::vector<Eigen::Triplet<double>> trips;
  for (int c : d.cells(r)) {
    for (int q = 0; q < d.nq; ++q) {
      const double w = d.jxw[d.qp(c, q)];
      for (int a = 0; a < d.npc; ++a) {
        for (int b = 0; b < d.npc; ++b) {
          const double v = w * kernel(c, q, a, b);
          const int na = d.space.node(c, a);
          const int nb = d.space.node(c, b);
          for (int k = 0; k < 3; ++k) trips.emplace_back(3 * na + k, 3 * nb + k, v);
        }
      }
    }
  }
  SparseMatrix m(d.num_dofs(), d.num_dofs());
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

}  // namespace

SparseMatrix region_mass(const Discretization& d, Region r) {
  return assemble_vector_form(d, r, [&](int, int q, int a, int b) { return d.phi(q, a) * d.phi(q, b); });
}

SparseMatrix region_stiffness(const Discretization& d, Region r) {
  return assemble_vector_form(d, r, [&](int c, int q, int a, int b) { return d.grad(c, q, a).dot(d.grad(c, q, b)); });
}

SparseMatrix pressure_mass(const Discretization& d) {
  std::vector<Eigen::Triplet<double>> trips;
  for (int c : d.fluid_cells) {
    for (int q = 0; q < d.nq; ++q) {
      const auto& b = d.cell_rule.points[q];
      const double w = d.jxw[d.qp(c, q)];
      for (int a = 0; a < 4; ++a) {
        for (int e = 0; e < 4; ++e) {
          trips.emplace_back(d.pressure_index[d.mesh.cells[c][a]], d.pressure_index[d.mesh.cells[c][e]], w * b[a] * b[e]);
        }
      }
    }
  }
  SparseMatrix m(d.num_pressure(), d.num_pressure());
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

}  // namespace fsi
