#include "fsi/kinematics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace fsi {

double levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0.0;
  return ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
}

namespace {

struct Perm {
  int i, j, k;
  double sign;
};

constexpr Perm kPerms[6] = {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {2, 0, 1, 1.0},
                            {0, 2, 1, -1.0}, {2, 1, 0, -1.0}, {1, 0, 2, -1.0}};

}  // namespace

double levi_civita_det(const Mat3& F) {
  double s = 0.0;
  for (const auto& a : kPerms)
    for (const auto& b : kPerms) s += a.sign * b.sign * F(a.i, b.i) * F(a.j, b.j) * F(a.k, b.k);
  return s / 6.0;
}

Mat3 levi_civita_cof(const Mat3& F) {
  // eps_mni eps_pqj F_mp F_nq: the permutation's last slot fixes i and j.
  Mat3 c = Mat3::Zero();
  for (const auto& a : kPerms)
    for (const auto& b : kPerms) c(a.k, b.k) += a.sign * b.sign * F(a.i, b.i) * F(a.j, b.j);
  return 0.5 * c;
}

Mat3 checked_inverse(const Mat3& F, double floor) {
  const double det = levi_civita_det(F);
  if (!(det > floor)) {
    std::ostringstream os;
    os.precision(17);
    os << "determinant " << det << " at or below floor " << floor;
    throw DetFloorError(os.str(), det, -1, -1);
  }
  return levi_civita_cof(F).transpose() / det;
}

std::vector<double> determinant(const TensorField& F) {
  std::vector<double> out(F.values.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = levi_civita_det(F.values[k]);
  return out;
}

TensorField cofactor(const TensorField& F) {
  TensorField out{std::vector<Mat3>(F.values.size()), F.time};
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = levi_civita_cof(F.values[k]);
  return out;
}

TensorField inverse(const TensorField& F, double floor, int nq) {
  double worst = std::numeric_limits<double>::infinity();
  std::size_t worst_k = 0;
  TensorField out{std::vector<Mat3>(F.values.size()), F.time};
  for (std::size_t k = 0; k < F.values.size(); ++k) {
    const double det = levi_civita_det(F.values[k]);
    if (!(det > worst)) {
      worst = det;
      worst_k = k;
    }
    if (det > floor) out.values[k] = levi_civita_cof(F.values[k]).transpose() / det;
  }
  if (!F.values.empty() && !(worst > floor)) {
    const int cell = nq > 0 ? static_cast<int>(worst_k) / nq : -1;
    const int qp = nq > 0 ? static_cast<int>(worst_k) % nq : -1;
    std::ostringstream os;
    os.precision(17);
    os << "determinant " << worst << " at or below floor " << floor << " (cell " << cell << ", point " << qp << ")";
    throw DetFloorError(os.str(), worst, cell, qp);
  }
  return out;
}

Eigen::VectorXd integrate_history(const VelocityHistory& h, double t, double max_step) {
  if (h.times.empty() || h.times.size() != h.velocity.size()) throw PreconditionError("empty velocity history");
  if (h.times.front() != 0.0) throw PreconditionError("velocity history must start at t = 0");
  if (!(t >= 0.0) || t > h.times.back() * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "time " << t << " outside history [0, " << h.times.back() << "]";
    throw PreconditionError(os.str());
  }
  for (std::size_t k = 0; k < h.velocity.size(); ++k) {
    if (h.velocity[k].support == Support::Solid) throw PreconditionError("flow map needs a velocity on the fluid region");
    if (k > 0) {
      const double gap = h.times[k] - h.times[k - 1];
      if (!(gap > 0.0)) throw PreconditionError("velocity history times not increasing");
      if (gap > max_step * (1.0 + 1e-12)) throw PreconditionError("velocity history gap larger than one step");
    }
  }
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(h.velocity.front().values.size());
  for (std::size_t k = 0; k + 1 < h.times.size(); ++k) {
    const double t0 = h.times[k];
    const double t1 = h.times[k + 1];
    if (t <= t0) break;
    const auto& v0 = h.velocity[k].values;
    const auto& v1 = h.velocity[k + 1].values;
    if (t >= t1) {
      acc += 0.5 * (t1 - t0) * (v0 + v1);
    } else {
      const double s = (t - t0) / (t1 - t0);
      acc += 0.5 * (t - t0) * (v0 + ((1.0 - s) * v0 + s * v1));
    }
  }
  return acc;
}

TensorField identity_field(const Discretization& d, double t) {
  return TensorField{std::vector<Mat3>(static_cast<std::size_t>(d.mesh.num_cells()) * d.nq, Mat3::Identity()), t};
}

TensorField identity_plus_grad(const Discretization& d, const Eigen::VectorXd& u, Region r, double t) {
  TensorField out = identity_field(d, t);
  for (int c : d.cells(r))
    for (int q = 0; q < d.nq; ++q) out.values[d.qp(c, q)] += grad_at(d, u, c, q);
  return out;
}

TensorField build_flow_map(const Discretization& d, const VelocityHistory& h, double t, double max_step) {
  const Eigen::VectorXd disp = integrate_history(h, t, max_step);
  if (t == 0.0) return identity_field(d, 0.0);
  return identity_plus_grad(d, disp, Region::Fluid, t);
}

TensorField build_deformation(const Discretization& d, const VectorField& xi, double t) {
  if (xi.support == Support::Fluid) throw PreconditionError("displacement defined on the fluid region only");
  if (xi.values.size() != d.num_dofs()) throw PreconditionError("displacement size does not match the space");
  return identity_plus_grad(d, xi.values, Region::Solid, t);
}

MapState make_map_state(const Discretization& d, TensorField flow, TensorField defo, double det_floor) {
  MapState m;
  m.det_flow = determinant(flow);
  m.det_defo = determinant(defo);
  m.cof_flow = cofactor(flow);
  m.cof_defo = cofactor(defo);
  m.inv_flow = inverse(flow, det_floor, d.nq);
  m.flow_grad = std::move(flow);
  m.defo_grad = std::move(defo);
  return m;
}

MapState identity_map_state(const Discretization& d, double t) {
  return make_map_state(d, identity_field(d, t), identity_field(d, t), 0.0);
}

void DetMonitorReport::merge(const DetMonitorReport& other) {
  flagged = flagged || other.flagged;
  if (other.min_det < min_det) {
    min_det = other.min_det;
    region = other.region;
    cell = other.cell;
    qp = other.qp;
    time = other.time;
  }
}

DetMonitorReport det_floor_monitor(const Discretization& d, const MapState& m, double floor) {
  DetMonitorReport r;
  r.min_det = std::numeric_limits<double>::infinity();
  auto scan = [&](const std::vector<double>& det, Region region, double time) {
    for (int c : d.cells(region))
      for (int q = 0; q < d.nq; ++q) {
        const double v = det[d.qp(c, q)];
        if (v < r.min_det || std::isnan(v)) {
          r.min_det = v;
          r.region = region;
          r.cell = c;
          r.qp = q;
          r.time = time;
        }
      }
  };
  scan(m.det_flow, Region::Fluid, m.flow_grad.time);
  scan(m.det_defo, Region::Solid, m.defo_grad.time);
  r.flagged = !(r.min_det >= floor);
  return r;
}

}  // namespace fsi
