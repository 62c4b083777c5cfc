#include "fsi/constitutive.hpp"

#include <string>

namespace fsi {

void MaterialParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw PreconditionError(std::string(name) + " must be positive");
  };
  positive(rho_f, "rho_f");
  positive(rho_s, "rho_s");
  positive(mu, "mu");
  positive(mu_s, "mu_s");
  if (!(lambda_s >= 0.0)) throw PreconditionError("lambda_s must be non-negative");
  positive(C_penalty, "C_penalty");
}

Mat3 green_lagrange(const Mat3& F) { return 0.5 * (F.transpose() * F - Mat3::Identity()); }

Mat3 second_piola(const Mat3& E, double mu_s, double lambda_s) {
  return 2.0 * mu_s * E + lambda_s * E.trace() * Mat3::Identity();
}

Mat3 first_piola(const Mat3& H, double mu_s, double lambda_s) {
  const Mat3 S = mu_s * (H + H.transpose() + H.transpose() * H) +
                 0.5 * lambda_s * (2.0 * H.trace() + H.squaredNorm()) * Mat3::Identity();
  return (Mat3::Identity() + H) * S;
}

Mat3 quasi_inc_stress(const Mat3& H) {
  const Mat3 F = Mat3::Identity() + H;
  return (levi_civita_det(F) - 1.0) * levi_civita_cof(F);
}

namespace {

double delta(int a, int b) { return a == b ? 1.0 : 0.0; }

Tensor4 add(const Tensor4& a, const Tensor4& b) {
  Tensor4 out;
  for (int k = 0; k < 81; ++k) out[k] = a[k] + b[k];
  return out;
}

void axpy(double s, const Tensor4& x, Tensor4& y) {
  for (int k = 0; k < 81; ++k) y[k] += s * x[k];
}

/// T_{i alpha j beta} = A_{i alpha} B_{j beta}
Tensor4 outer(const Mat3& A, const Mat3& B) {
  Tensor4 out;
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a)
      for (int j = 0; j < 3; ++j)
        for (int b = 0; b < 3; ++b) out[t4(i, a, j, b)] = A(i, a) * B(j, b);
  return out;
}

/// Generic SVK tangent evaluated from F, S and their "mixing" tensors; every
/// degree part is an instance of this bilinear pattern with different factors.
Tensor4 svk_pattern(const Mat3& S, const Mat3& Fa, const Mat3& Fb, double mu, double lambda) {
  // delta_ij S_{beta alpha} + mu (Fa_{i beta} Fb_{j alpha} + (Fa Fb^T)_{ij} delta_{alpha beta})
  // + lambda Fa_{i alpha} Fb_{j beta}
  const Mat3 FFt = Fa * Fb.transpose();
  Tensor4 out;
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a)
      for (int j = 0; j < 3; ++j)
        for (int b = 0; b < 3; ++b)
          out[t4(i, a, j, b)] = delta(i, j) * S(b, a) + mu * (Fa(i, b) * Fb(j, a) + FFt(i, j) * delta(a, b)) +
                                lambda * Fa(i, a) * Fb(j, b);
  return out;
}

}  // namespace

Tensor4 SvkParts::sum() const { return add(add(constant, linear), quadratic); }

SvkParts svk_parts(const Mat3& H, double mu, double lambda) {
  const Mat3 I = Mat3::Identity();
  const Mat3 Z = Mat3::Zero();
  SvkParts p;
  p.constant = svk_pattern(Z, I, I, mu, lambda);
  // Linear: S1 = mu (H + H^T) + lambda tr H Id, plus both F slots linearized.
  const Mat3 S1 = mu * (H + H.transpose()) + lambda * H.trace() * I;
  p.linear = add(svk_pattern(S1, H, I, mu, lambda), svk_pattern(Z, I, H, mu, lambda));
  const Mat3 S2 = mu * H.transpose() * H + 0.5 * lambda * H.squaredNorm() * I;
  p.quadratic = svk_pattern(S2, H, H, mu, lambda);
  return p;
}

Tensor4 svk_coefficients(const Mat3& H, double mu_s, double lambda_s) {
  const Mat3 F = Mat3::Identity() + H;
  const Mat3 S = second_piola(green_lagrange(F), mu_s, lambda_s);
  return svk_pattern(S, F, F, mu_s, lambda_s);
}

Tensor4 svk_derivative(const Mat3& H, const Mat3& G, double mu, double lambda) {
  const Mat3 F = Mat3::Identity() + H;
  const Mat3 dS = mu * (G.transpose() * F + F.transpose() * G) + lambda * (F.transpose() * G).trace() * Mat3::Identity();
  return add(svk_pattern(dS, G, F, mu, lambda), svk_pattern(Mat3::Zero(), F, G, mu, lambda));
}

namespace {

struct Perm {
  int a, b, c;
  double sign;
};

constexpr Perm kPerms[6] = {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {2, 0, 1, 1.0},
                            {0, 2, 1, -1.0}, {2, 1, 0, -1.0}, {1, 0, 2, -1.0}};

}  // namespace

Tensor4 cofactor_derivative(const Mat3& F) {
  Tensor4 out{};
  // eps_{j n i} eps_{beta q alpha} F_{n q}
  for (const auto& p : kPerms)
    for (const auto& r : kPerms) out[t4(p.c, r.c, p.a, r.a)] += p.sign * r.sign * F(p.b, r.b);
  return out;
}

Tensor4 QuasiIncParts::sum() const {
  Tensor4 out{};
  for (const auto& d : degree) axpy(1.0, d, out);
  return out;
}

QuasiIncParts quasi_inc_parts(const Mat3& H) {
  const Mat3 I = Mat3::Identity();
  const Mat3 C1 = H.trace() * I - H.transpose();
  const Mat3 C2 = levi_civita_cof(H);
  const double j1 = H.trace();
  const double j2 = 0.5 * (j1 * j1 - (H * H).trace());
  const double j3 = levi_civita_det(H);
  const Tensor4 E0 = cofactor_derivative(I);
  const Tensor4 E1 = cofactor_derivative(H);

  QuasiIncParts p;
  // cof_{i alpha} cof_{j beta} with cof = I + C1 + C2, split by degree.
  p.degree[0] = outer(I, I);
  p.degree[1] = add(outer(C1, I), outer(I, C1));
  p.degree[2] = add(add(outer(C1, C1), outer(C2, I)), outer(I, C2));
  p.degree[3] = add(outer(C1, C2), outer(C2, C1));
  p.degree[4] = outer(C2, C2);
  // (det F - 1) d cof / dF with det F - 1 = j1 + j2 + j3.
  axpy(j1, E0, p.degree[1]);
  axpy(j2, E0, p.degree[2]);
  axpy(j1, E1, p.degree[2]);
  axpy(j3, E0, p.degree[3]);
  axpy(j2, E1, p.degree[3]);
  axpy(j3, E1, p.degree[4]);
  return p;
}

Tensor4 quasi_inc_coefficients(const Mat3& H) {
  const Mat3 F = Mat3::Identity() + H;
  const Mat3 cof = levi_civita_cof(F);
  Tensor4 out = outer(cof, cof);
  axpy(levi_civita_det(F) - 1.0, cofactor_derivative(F), out);
  return out;
}

Tensor4 quasi_inc_derivative(const Mat3& H, const Mat3& G) {
  const Mat3 F = Mat3::Identity() + H;
  const Mat3 cof = levi_civita_cof(F);
  const Tensor4 dcof = cofactor_derivative(F);
  const Mat3 dC = contract(dcof, G);
  Tensor4 out = add(outer(dC, cof), outer(cof, dC));
  axpy((cof.array() * G.array()).sum(), dcof, out);
  axpy(levi_civita_det(F) - 1.0, cofactor_derivative(G), out);
  return out;
}

Tensor4 combined_coefficients(const Mat3& H, const MaterialParams& p) {
  Tensor4 out = svk_coefficients(H, p.mu_s, p.lambda_s);
  axpy(p.C_penalty, quasi_inc_coefficients(H), out);
  return out;
}

Tensor4 combined_derivative(const Mat3& H, const Mat3& G, const MaterialParams& p) {
  Tensor4 out = svk_derivative(H, G, p.mu_s, p.lambda_s);
  axpy(p.C_penalty, quasi_inc_derivative(H, G), out);
  return out;
}

Mat3 contract(const Tensor4& T, const Mat3& A) {
  Mat3 out;
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a) {
      double s = 0.0;
      for (int j = 0; j < 3; ++j)
        for (int b = 0; b < 3; ++b) s += T[t4(i, a, j, b)] * A(j, b);
      out(i, a) = s;
    }
  return out;
}

GradientProjector::GradientProjector(const Discretization& d) : d_(&d) {
  index_.assign(d.space.num_nodes(), -1);
  for (int n = 0; n < d.space.num_nodes(); ++n)
    if (d.space.in_region(n, Region::Solid)) index_[n] = n_++;
  std::vector<Eigen::Triplet<double>> trips;
  for (int c : d.solid_cells)
    for (int q = 0; q < d.nq; ++q) {
      const double w = d.jxw[d.qp(c, q)];
      for (int a = 0; a < d.npc; ++a)
        for (int b = 0; b < d.npc; ++b)
          trips.emplace_back(index_[d.space.node(c, a)], index_[d.space.node(c, b)], w * d.phi(q, a) * d.phi(q, b));
    }
  SparseMatrix m(n_, n_);
  m.setFromTriplets(trips.begin(), trips.end());
  solver_.compute(m);
  if (solver_.info() != Eigen::Success) throw SolveError("solid mass matrix factorization failed");
}

std::vector<Mat3> GradientProjector::project(const Eigen::VectorXd& xi) const {
  const auto& d = *d_;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n_, 9);
  for (int c : d.solid_cells)
    for (int q = 0; q < d.nq; ++q) {
      const Mat3 H = grad_at(d, xi, c, q);
      const double w = d.jxw[d.qp(c, q)];
      for (int a = 0; a < d.npc; ++a) {
        const int row = index_[d.space.node(c, a)];
        for (int k = 0; k < 9; ++k) rhs(row, k) += w * d.phi(q, a) * H(k / 3, k % 3);
      }
    }
  const Eigen::MatrixXd sol = solver_.solve(rhs);
  std::vector<Mat3> out(d.space.num_nodes(), Mat3::Zero());
  for (int n = 0; n < d.space.num_nodes(); ++n) {
    if (index_[n] < 0) continue;
    for (int k = 0; k < 9; ++k) out[n](k / 3, k % 3) = sol(index_[n], k);
  }
  return out;
}

ElasticTensorField evaluate_elastic_field(const Discretization& d, const Eigen::VectorXd& xi, const MaterialParams& p,
                                          CoefficientGradient mode, const GradientProjector* projector) {
  const std::size_t total = static_cast<std::size_t>(d.mesh.num_cells()) * d.nq;
  ElasticTensorField f;
  f.coeffs.assign(total, Tensor4{});
  f.div_coeffs.assign(total, std::array<double, 27>{});
  f.grad_xi.assign(total, Mat3::Zero());
  if (mode == CoefficientGradient::Projection && projector == nullptr)
    throw PreconditionError("projection mode requires a gradient projector");
  if (mode == CoefficientGradient::Hessian && d.space.degree < 2)
    throw PreconditionError("hessian mode requires a degree 2 displacement");
  const std::vector<Mat3> nodal = mode == CoefficientGradient::Projection ? projector->project(xi) : std::vector<Mat3>{};

  for (int c : d.solid_cells)
    for (int q = 0; q < d.nq; ++q) {
      const int k = d.qp(c, q);
      const Mat3 H = grad_at(d, xi, c, q);
      f.grad_xi[k] = H;
      f.coeffs[k] = combined_coefficients(H, p);
      std::array<Mat3, 3> G;
      for (auto& g : G) g.setZero();
      for (int a = 0; a < d.npc; ++a) {
        const int n = d.space.node(c, a);
        if (mode == CoefficientGradient::Projection) {
          const Vec3& dp = d.grad(c, q, a);
          for (int al = 0; al < 3; ++al) G[al] += dp[al] * nodal[n];
        } else {
          const Mat3& h = d.hess[c * d.npc + a];
          const Vec3 u = xi.segment<3>(3 * n);
          for (int al = 0; al < 3; ++al) G[al] += u * h.row(al);
        }
      }
      auto& w = f.div_coeffs[k];
      for (int al = 0; al < 3; ++al) {
        const Tensor4 db = combined_derivative(H, G[al], p);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            for (int b = 0; b < 3; ++b) w[(i * 3 + j) * 3 + b] += db[t4(i, al, j, b)];
      }
    }
  return f;
}

FacetElasticField evaluate_facet_field(const Discretization& d, const Eigen::VectorXd& xi, const MaterialParams& p) {
  FacetElasticField f;
  for (const auto& fi : d.interface) {
    const int nqf = static_cast<int>(fi.jxw.size());
    for (int q = 0; q < nqf; ++q) {
      Mat3 H = Mat3::Zero();
      for (int a = 0; a < d.npc; ++a) {
        const int n = d.space.node(fi.solid_cell, a);
        H.noalias() += xi.segment<3>(3 * n) * fi.solid_dphi[q * d.npc + a].transpose();
      }
      f.grad_xi.push_back(H);
      f.coeffs.push_back(combined_coefficients(H, p));
    }
  }
  return f;
}

std::vector<Vec3> piola_divergence(const Discretization& d, const ElasticTensorField& b, const Eigen::VectorXd& xi) {
  if (d.space.degree < 2) throw PreconditionError("strong divergence needs second derivatives (degree >= 2)");
  std::vector<Vec3> out(static_cast<std::size_t>(d.mesh.num_cells()) * d.nq, Vec3::Zero());
  for (int c : d.solid_cells) {
    // Second derivatives are constant per cell for degree 2.
    std::array<Mat3, 3> hxi;  // hxi[j](alpha, beta)
    for (auto& h : hxi) h.setZero();
    for (int a = 0; a < d.npc; ++a) {
      const int n = d.space.node(c, a);
      for (int j = 0; j < 3; ++j) hxi[j] += xi[3 * n + j] * d.hess[c * d.npc + a];
    }
    for (int q = 0; q < d.nq; ++q) {
      const int k = d.qp(c, q);
      Vec3 v = Vec3::Zero();
      for (int i = 0; i < 3; ++i)
        for (int al = 0; al < 3; ++al)
          for (int j = 0; j < 3; ++j)
            for (int be = 0; be < 3; ++be) v[i] += b.coeffs[k][t4(i, al, j, be)] * hxi[j](al, be);
      out[k] = v;
    }
  }
  return out;
}

std::vector<Vec3> boundary_traction_integral(const std::vector<TractionSample>& history, const std::vector<Vec3>& normals) {
  if (history.empty()) return {};
  if (history.front().time != 0.0) throw PreconditionError("traction history must start at t = 0");
  for (const auto& g : history.front().grad_xi) {
    if (g.squaredNorm() != 0.0) throw PreconditionError("nonzero initial traction: xi(0) must vanish");
  }
  const std::size_t np = normals.size();
  for (const auto& s : history) {
    if (s.coeffs.size() != np || s.grad_rate.size() != np) throw PreconditionError("traction sample size mismatch");
  }
  std::vector<Mat3> acc(np, Mat3::Zero());
  for (std::size_t k = 0; k + 1 < history.size(); ++k) {
    const double dt = history[k + 1].time - history[k].time;
    for (std::size_t m = 0; m < np; ++m) {
      acc[m] += 0.5 * dt *
                (contract(history[k].coeffs[m], history[k].grad_rate[m]) +
                 contract(history[k + 1].coeffs[m], history[k + 1].grad_rate[m]));
    }
  }
  std::vector<Vec3> out(np);
  for (std::size_t m = 0; m < np; ++m) out[m] = acc[m] * normals[m];
  return out;
}

Mat3 fluid_viscous_stress(const Mat3& grad_v, const Mat3& F_inv, const Mat3& cof, double mu) {
  const Mat3 g = grad_v * F_inv;
  return mu * (g + g.transpose()) * cof;
}

Mat3 lagrangian_fluid_stress(const Mat3& grad_v, double p, const Mat3& F_inv, const Mat3& cof, double mu) {
  return fluid_viscous_stress(grad_v, F_inv, cof, mu) - p * cof;
}

TensorField lagrangian_fluid_stress(const Discretization& d, const TensorField& grad_v, const std::vector<double>& p,
                                    const MapState& m, double mu) {
  TensorField out{std::vector<Mat3>(grad_v.values.size(), Mat3::Zero()), grad_v.time};
  for (int c : d.fluid_cells)
    for (int q = 0; q < d.nq; ++q) {
      const int k = d.qp(c, q);
      out.values[k] = lagrangian_fluid_stress(grad_v.values[k], p.empty() ? 0.0 : p[k], m.inv_flow.values[k],
                                              m.cof_flow.values[k], mu);
    }
  return out;
}

}  // namespace fsi
