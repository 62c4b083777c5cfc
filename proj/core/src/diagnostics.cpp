#include "fsi/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace fsi {

double EnergyLedger::max_relative_imbalance() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.relative_imbalance());
  return m;
}

EnergyLedger energy_ledger(const OperatorCache& cache, const TrajectoryState& tr,
                           const std::vector<Eigen::VectorXd>& node_loads) {
  EnergyLedger led;
  const int N = static_cast<int>(tr.f.size()) - 1;
  if (N < 0) return led;
  auto node_row = [&](int k) {
    EnergyRow r;
    r.step = k;
    r.time = tr.times[k];
    const auto& op = cache.nodes[k];
    const Eigen::VectorXd& f = tr.f[k];
    r.kinetic_fluid = 0.5 * f.dot(op.mass_fluid * f);
    r.kinetic_solid = 0.5 * f.dot(op.mass * f) - r.kinetic_fluid;
    r.elastic = 0.5 * tr.h[k].dot(op.stiffness_sym * tr.h[k]);
    return r;
  };
  EnergyRow first = node_row(0);
  const double E0 = first.energy();
  first.scale = std::abs(E0) * 2.0;
  led.rows.push_back(first);
  double diss = 0.0, grad = 0.0, corr = 0.0, work = 0.0, forcing2 = 0.0;
  double peak = E0;
  for (int k = 0; k < N; ++k) {
    const auto& mid = cache.midpoints[k];
    const double dt = tr.times[k + 1] - tr.times[k];
    const Eigen::VectorXd& f0 = tr.f[k];
    const Eigen::VectorXd& f1 = tr.f[k + 1];
    const Eigen::VectorXd fm = 0.5 * (f0 + f1);
    const Eigen::VectorXd hm = 0.5 * (tr.h[k] + tr.h[k + 1]);
    const Eigen::VectorXd C = 0.5 * (node_loads[k] + node_loads[k + 1]) + mid.lift_load;
    diss += dt * fm.dot(mid.fluid_stiffness * fm);
    grad += dt * fm.dot(mid.stiffness_grad * hm);
    work += dt * fm.dot(C);
    forcing2 += dt * C.squaredNorm();
    const auto& A0 = cache.nodes[k].mass;
    const auto& A1 = cache.nodes[k + 1].mass;
    const auto& D0 = cache.nodes[k].stiffness_sym;
    const auto& D1 = cache.nodes[k + 1].stiffness_sym;
    const Eigen::VectorXd& h0 = tr.h[k];
    const Eigen::VectorXd& h1 = tr.h[k + 1];
    corr += 0.5 * f1.dot((A1 - mid.mass) * f1) - 0.5 * f0.dot((A0 - mid.mass) * f0);
    corr += 0.5 * h1.dot((D1 - mid.stiffness_sym) * h1) - 0.5 * h0.dot((D0 - mid.stiffness_sym) * h0);
    EnergyRow r = node_row(k + 1);
    r.dissipation = diss;
    r.gradient_term = grad;
    r.map_correction = corr;
    r.work = work;
    const double lhs = r.energy() + diss + grad - corr;
    const double rhs = work + E0;
    r.imbalance = std::abs(lhs - rhs);
    r.scale = std::abs(r.energy()) + std::abs(diss) + std::abs(grad) + std::abs(corr) + std::abs(work) + std::abs(E0);
    peak = std::max(peak, r.energy() + diss);
    led.rows.push_back(r);
  }
  const double denom = E0 + forcing2;
  led.estimate_ratio = denom > 0.0 ? peak / denom : 0.0;
  return led;
}

std::vector<InterfaceResidualRow> interface_residuals(const Problem& pb, const TrajectoryState& tr,
                                                      const std::vector<InterfaceDatum>& datum,
                                                      const std::vector<PressureField>& pressure) {
  const auto& d = pb.disc;
  std::vector<InterfaceResidualRow> rows;
  std::vector<int> interface_dofs;
  for (int n = 0; n < d.space.num_nodes(); ++n)
    if (d.space.on_interface(n))
      for (int i = 0; i < 3; ++i) interface_dofs.push_back(3 * n + i);

  const History& h = tr.fields;
  for (std::size_t k = 0; k < h.times.size(); ++k) {
    InterfaceResidualRow r;
    r.step = static_cast<int>(k);
    r.time = h.times[k];
    // Solid view of the rate: d_t xi = sum f psi (h' = f), fluid view: the velocity field.
    const Eigen::VectorXd rate = pb.basis.ambient * tr.f[k];
    for (int dof : interface_dofs) r.velocity = std::max(r.velocity, std::abs(h.velocity[k][dof] - rate[dof]));
    if (k + 1 < h.times.size()) {
      const MapState m = history_map_state(pb, h, static_cast<int>(k), true);
      const Eigen::VectorXd v = 0.5 * (h.velocity[k] + h.velocity[k + 1]);
      const Eigen::VectorXd xi = 0.5 * (h.displacement[k] + h.displacement[k + 1]);
      const FacetElasticField b = evaluate_facet_field(d, xi, pb.params);
      double acc = 0.0;
      std::size_t idx = 0;
      for (const auto& fi : d.interface) {
        // Flow map quantities are constant per cell only for affine maps; take the fluid cell's first point.
        const int kq = d.qp(fi.fluid_cell, 0);
        for (std::size_t q = 0; q < fi.jxw.size(); ++q, ++idx) {
          Mat3 gv = Mat3::Zero();
          for (int a = 0; a < d.npc; ++a)
            gv.noalias() += v.segment<3>(3 * d.space.node(fi.fluid_cell, a)) * fi.fluid_dphi[q * d.npc + a].transpose();
          double p = 0.0;
          if (k < pressure.size() && pressure[k].values.size()) {
            const auto bary = barycentric(d.geometry[fi.fluid_cell], fi.x[q]);
            for (int vtx = 0; vtx < 4; ++vtx)
              p += bary[vtx] * pressure[k].values[d.pressure_index[d.mesh.cells[fi.fluid_cell][vtx]]];
          }
          const Mat3 sigma = lagrangian_fluid_stress(gv, p, m.inv_flow.values[kq], m.cof_flow.values[kq], pb.params.mu);
          Vec3 g = Vec3::Zero();
          if (k + 1 < datum.size()) g = 0.5 * (datum[k][idx] + datum[k + 1][idx]);
          const Vec3 defect = sigma * fi.normal - contract(b.coeffs[idx], b.grad_xi[idx]) * fi.normal - g;
          acc += fi.jxw[q] * defect.squaredNorm();
        }
      }
      r.traction = std::sqrt(std::max(0.0, acc));
    }
    rows.push_back(r);
  }
  return rows;
}

double max_divergence_residual(const Problem& pb, const TrajectoryState& tr) {
  double m = 0.0;
  for (const auto& f : tr.f) {
    const Eigen::VectorXd u = pb.basis.ambient * f;
    m = std::max(m, pb.constraint.residual(u).lpNorm<Eigen::Infinity>());
  }
  return m;
}

}  // namespace fsi
