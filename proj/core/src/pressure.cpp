#include "fsi/pressure.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace fsi {

PressureSystem::PressureSystem(const Discretization& d) : d_(&d) {
  const auto& sp = d.space;
  test_index_.assign(d.num_dofs(), -1);
  for (int n = 0; n < sp.num_nodes(); ++n) {
    if (!sp.in_region(n, Region::Fluid) || sp.in_region(n, Region::Solid) || sp.pinned(n)) continue;
    if (sp.node_flags[n] & kOnGammaC) continue;
    for (int i = 0; i < 3; ++i) {
      test_index_[3 * n + i] = static_cast<int>(test_dofs_.size());
      test_dofs_.push_back(3 * n + i);
    }
  }
  const SparseMatrix full = region_mass(d, Region::Fluid) + region_stiffness(d, Region::Fluid);
  std::vector<Eigen::Triplet<double>> trips;
  for (int col = 0; col < full.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(full, col); it; ++it) {
      const int r = test_index_[it.row()], c = test_index_[it.col()];
      if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
    }
  const int n = static_cast<int>(test_dofs_.size());
  SparseMatrix K(n, n);
  K.setFromTriplets(trips.begin(), trips.end());
  if (n > 0) {
    gram_.compute(K);
    if (gram_.info() != Eigen::Success) throw SolveError("velocity Gram matrix factorization failed");
  }
}

SparseMatrix PressureSystem::divergence_form(const MapState& m) const {
  const auto& d = *d_;
  std::vector<Eigen::Triplet<double>> trips;
  for (int c : d.fluid_cells)
    for (int q = 0; q < d.nq; ++q) {
      const int k = d.qp(c, q);
      const auto& bary = d.cell_rule.points[q];
      for (int a = 0; a < d.npc; ++a) {
        const Vec3 g = m.cof_flow.values[k] * d.grad(c, q, a);
        const int node = d.space.node(c, a);
        for (int i = 0; i < 3; ++i) {
          const int row = test_index_[3 * node + i];
          if (row < 0) continue;
          for (int v = 0; v < 4; ++v)
            trips.emplace_back(row, d.pressure_index[d.mesh.cells[c][v]], -d.jxw[k] * bary[v] * g[i]);
        }
      }
    }
  SparseMatrix G(static_cast<int>(test_dofs_.size()), d.num_pressure());
  G.setFromTriplets(trips.begin(), trips.end());
  return G;
}

Eigen::VectorXd PressureSystem::momentum_residual(const Eigen::VectorXd& v, const Eigen::VectorXd& dtv,
                                                  const MapState& m, const MaterialParams& p) const {
  const auto& d = *d_;
  Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<int>(test_dofs_.size()));
  for (int c : d.fluid_cells)
    for (int q = 0; q < d.nq; ++q) {
      const int k = d.qp(c, q);
      const Mat3 sigma = fluid_viscous_stress(grad_at(d, v, c, q), m.inv_flow.values[k], m.cof_flow.values[k], p.mu);
      const Vec3 acc = p.rho_f * m.det_flow[k] * value_at(d, dtv, c, q);
      for (int a = 0; a < d.npc; ++a) {
        const Vec3 t = d.jxw[k] * (d.phi(q, a) * acc + sigma * d.grad(c, q, a));
        const int node = d.space.node(c, a);
        for (int i = 0; i < 3; ++i) {
          const int row = test_index_[3 * node + i];
          if (row >= 0) r[row] += t[i];
        }
      }
    }
  return r;
}

double PressureSystem::dual_norm(const Eigen::VectorXd& r) const {
  if (r.size() == 0) return 0.0;
  return std::sqrt(std::max(0.0, r.dot(gram_.solve(r))));
}

PressureField PressureSystem::recover(const Eigen::VectorXd& v, const Eigen::VectorXd& dtv, const MapState& m,
                                      const MaterialParams& p, double time) const {
  PressureField out;
  out.time = time;
  const Eigen::VectorXd r0 = momentum_residual(v, dtv, m, p);
  out.load_dual = dual_norm(r0);
  const Eigen::MatrixXd G = Eigen::MatrixXd(divergence_form(m));
  const Eigen::MatrixXd Y = gram_.solve(G);
  Eigen::MatrixXd normal = G.transpose() * Y;
  normal = 0.5 * (normal + normal.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  if (ev.size() == 0 || !(ev[0] > 1e-12 * ev[ev.size() - 1])) {
    throw SolveError("pressure normal equations are singular (discrete inf-sup constant is zero)");
  }
  out.values = normal.ldlt().solve(-(Y.transpose() * r0));
  out.residual_dual = dual_norm(r0 + G * out.values);
  return out;
}

InfSupReport PressureSystem::infsup(const MapState& m, double threshold) const {
  const auto& d = *d_;
  InfSupReport rep;
  rep.velocity_degree = d.space.degree;
  rep.velocity_dofs = static_cast<int>(test_dofs_.size());
  rep.pressure_dofs = d.num_pressure();
  rep.threshold = threshold;
  if (test_dofs_.empty()) return rep;
  const Eigen::MatrixXd G = Eigen::MatrixXd(divergence_form(m));
  Eigen::MatrixXd S = G.transpose() * gram_.solve(G);
  S = 0.5 * (S + S.transpose()).eval();
  const Eigen::MatrixXd Mp = Eigen::MatrixXd(pressure_mass(d));
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(S, Mp, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues()[0];
  rep.beta_h = std::sqrt(std::max(0.0, lmin));
  rep.pass = rep.beta_h > threshold;
  return rep;
}

PressureField recover_pressure(const Discretization& d, const Eigen::VectorXd& v, const Eigen::VectorXd& dtv,
                               const MapState& m, const MaterialParams& p, double time) {
  return PressureSystem(d).recover(v, dtv, m, p, time);
}

InfSupReport measure_infsup(const Discretization& d, const MapState& m, double threshold) {
  return PressureSystem(d).infsup(m, threshold);
}

}  // namespace fsi
