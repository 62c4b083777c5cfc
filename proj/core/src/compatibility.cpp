#include "fsi/compatibility.hpp"

#include <algorithm>
#include <cmath>

namespace fsi {

namespace {

struct MonomialTables {
  std::array<std::array<int, 3>, Jet::kSize> exps{};
  std::array<std::array<std::array<int, 5>, 5>, 5> lookup{};
  std::vector<std::array<int, 3>> products;  // (i, j, i*j) with total degree <= 4

  MonomialTables() {
    int n = 0;
    for (auto& a : lookup)
      for (auto& b : a) b.fill(-1);
    for (int deg = 0; deg <= Jet::kOrder; ++deg)
      for (int a = deg; a >= 0; --a)
        for (int b = deg - a; b >= 0; --b) {
          const int c = deg - a - b;
          exps[n] = {a, b, c};
          lookup[a][b][c] = n++;
        }
    for (int i = 0; i < Jet::kSize; ++i)
      for (int j = 0; j < Jet::kSize; ++j) {
        const int a = exps[i][0] + exps[j][0], b = exps[i][1] + exps[j][1], c = exps[i][2] + exps[j][2];
        if (a + b + c <= Jet::kOrder) products.push_back({i, j, lookup[a][b][c]});
      }
  }
};

const MonomialTables& tables() {
  static const MonomialTables t;
  return t;
}

}  // namespace

int Jet::index(int a, int b, int c) { return tables().lookup[a][b][c]; }

Jet Jet::constant(double v) {
  Jet j;
  j.c_[0] = v;
  return j;
}

Jet Jet::affine(double v, const Vec3& g) {
  Jet j;
  j.c_[0] = v;
  j.c_[index(1, 0, 0)] = g[0];
  j.c_[index(0, 1, 0)] = g[1];
  j.c_[index(0, 0, 1)] = g[2];
  return j;
}

Jet Jet::derivative(int axis) const {
  const auto& t = tables();
  Jet out;
  for (int i = 0; i < kSize; ++i) {
    auto e = t.exps[i];
    if (e[axis] == 0 || c_[i] == 0.0) continue;
    const double f = e[axis];
    e[axis] -= 1;
    out.c_[t.lookup[e[0]][e[1]][e[2]]] += f * c_[i];
  }
  return out;
}

Jet Jet::operator+(const Jet& o) const {
  Jet r = *this;
  r += o;
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  for (int i = 0; i < kSize; ++i) c_[i] += o.c_[i];
  return *this;
}

Jet Jet::operator-(const Jet& o) const {
  Jet r = *this;
  for (int i = 0; i < kSize; ++i) r.c_[i] -= o.c_[i];
  return r;
}

Jet Jet::operator*(double s) const {
  Jet r = *this;
  for (auto& v : r.c_) v *= s;
  return r;
}

Jet Jet::operator*(const Jet& o) const {
  Jet r;
  for (const auto& p : tables().products) r.c_[p[2]] += c_[p[0]] * o.c_[p[1]];
  return r;
}

namespace {

JetMat identity_times(const Jet& s) {
  JetMat m{};
  for (int i = 0; i < 3; ++i) m[i * 4] = s;
  return m;
}

JetMat add(const JetMat& a, const JetMat& b) {
  JetMat m;
  for (int k = 0; k < 9; ++k) m[k] = a[k] + b[k];
  return m;
}

JetMat scale(const JetMat& a, double s) {
  JetMat m;
  for (int k = 0; k < 9; ++k) m[k] = a[k] * s;
  return m;
}

JetMat scale(const JetMat& a, const Jet& s) {
  JetMat m;
  for (int k = 0; k < 9; ++k) m[k] = a[k] * s;
  return m;
}

JetMat transpose(const JetMat& a) {
  JetMat m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i * 3 + j] = a[j * 3 + i];
  return m;
}

JetMat matmul(const JetMat& a, const JetMat& b) {
  JetMat m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) m[i * 3 + j] += a[i * 3 + k] * b[k * 3 + j];
  return m;
}

JetVec matvec(const JetMat& a, const Vec3& n) {
  JetVec v{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v[i] += a[i * 3 + j] * n[j];
  return v;
}

JetMat sym(const JetMat& a) { return scale(add(a, transpose(a)), 0.5); }

JetMat cof(const JetMat& a) {
  JetMat m;
  auto A = [&](int i, int j) -> const Jet& { return a[((i % 3) * 3) + (j % 3)]; };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i * 3 + j] = A(i + 1, j + 1) * A(i + 2, j + 2) - A(i + 1, j + 2) * A(i + 2, j + 1);
  return m;
}

JetMat grad(const JetVec& u) {
  JetMat m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i * 3 + j] = u[i].derivative(j);
  return m;
}

JetVec grad(const Jet& s) { return {s.derivative(0), s.derivative(1), s.derivative(2)}; }

Jet div(const JetVec& u) { return u[0].derivative(0) + u[1].derivative(1) + u[2].derivative(2); }

JetVec div(const JetMat& a) {
  JetVec v{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v[i] += a[i * 3 + j].derivative(j);
  return v;
}

JetVec laplacian(const JetVec& u) {
  JetVec v{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v[i] += u[i].derivative(j).derivative(j);
  return v;
}

JetVec vsub(const JetVec& a, const JetVec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
JetVec vscale(const JetVec& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
JetVec vscale(const JetVec& a, const Jet& s) { return {a[0] * s, a[1] * s, a[2] * s}; }
JetVec vadd(const JetVec& a, const JetVec& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

double sq(const JetVec& v) {
  double s = 0.0;
  for (const auto& j : v) s += j.value() * j.value();
  return s;
}

double sq(const JetMat& m) {
  double s = 0.0;
  for (const auto& j : m) s += j.value() * j.value();
  return s;
}

/// Barycentric coordinates of a cell as jets around x.
std::array<Jet, 4> lambda_jets(const Discretization& d, int cell, const Vec3& x) {
  const auto& g = d.geometry[cell];
  const auto b = barycentric(g, x);
  std::array<Jet, 4> out;
  for (int i = 0; i < 4; ++i) out[i] = Jet::affine(b[i], g.grad_lambda[i]);
  return out;
}

JetVec vector_jet(const Discretization& d, int cell, const std::array<Jet, 4>& lam, const Eigen::VectorXd& u) {
  JetVec out{};
  for (int a = 0; a < d.npc; ++a) {
    Jet phi;
    if (d.space.degree == 1) {
      phi = lam[a];
    } else if (a < 4) {
      phi = lam[a] * (lam[a] * 2.0 - Jet::constant(1.0));
    } else {
      const auto& e = kEdgeVertices[a - 4];
      phi = lam[e[0]] * lam[e[1]] * 4.0;
    }
    const int n = d.space.node(cell, a);
    for (int i = 0; i < 3; ++i) {
      const double c = u[3 * n + i];
      if (c != 0.0) out[i] += phi * c;
    }
  }
  return out;
}

Jet pressure_jet(const Discretization& d, int cell, const std::array<Jet, 4>& lam, const Eigen::VectorXd& p) {
  Jet out;
  for (int v = 0; v < 4; ++v) {
    const double c = p[d.pressure_index[d.mesh.cells[cell][v]]];
    if (c != 0.0) out += lam[v] * c;
  }
  return out;
}

struct PointFields {
  JetVec v, xi;
  Jet p, dtp, dttp;
};

struct Derived {
  JetMat grad_v, D, sigma, S1, S2, S3, S4, E1, E2;
  JetVec div_sigma;
  Jet div_v;
};

Derived derive(const PointFields& f, const MaterialParams& m) {
  Derived r;
  const JetMat I = identity_times(Jet::constant(1.0));
  r.grad_v = grad(f.v);
  r.div_v = div(f.v);
  r.D = sym(r.grad_v);
  r.sigma = add(scale(r.D, 2.0 * m.mu), scale(I, f.p * -1.0));
  r.div_sigma = div(r.sigma);
  r.S3 = add(identity_times(r.div_v), scale(transpose(r.grad_v), -1.0));
  // 1/rho_f div(div sigma) Id - 1/rho_f grad(div sigma) + 2 cof(grad v)
  r.S4 = add(add(identity_times(div(r.div_sigma) * (1.0 / m.rho_f)), scale(grad(r.div_sigma), -1.0 / m.rho_f)),
             scale(cof(r.grad_v), 2.0));
  const JetMat quad = add(matmul(r.D, r.D), scale(matmul(transpose(r.grad_v), r.grad_v), -2.0));
  r.S1 = add(scale(quad, -m.mu), matmul(r.sigma, r.S3));
  const JetMat grad_xi = grad(f.xi);
  r.E1 = add(add(scale(sym(grad_xi), 2.0 * m.mu_s), identity_times(div(f.xi) * m.lambda_s)), identity_times(r.div_v));
  const JetVec divE1 = div(r.E1);
  r.S2 = add(add(add(identity_times(f.dttp), scale(r.S3, f.dtp * 2.0)), scale(r.S4, f.p)),
             add(add(scale(sym(grad(divE1)), 2.0 * m.mu), scale(matmul(quad, r.S3), -2.0)), scale(matmul(r.D, r.S4), 2.0)));
  r.E2 = add(add(scale(matmul(grad_xi, r.E1), 2.0), scale(matmul(transpose(grad_xi), grad_xi), 2.0 * m.mu_s)),
             add(scale(grad_xi, m.lambda_s), scale(add(scale(r.S3, r.div_v), r.S4), 2.0)));
  return r;
}

}  // namespace

Strictness parse_strictness(const std::string& s) {
  if (s == "off") return Strictness::Off;
  if (s == "interface") return Strictness::Interface;
  if (s == "all") return Strictness::All;
  throw ParseError("unknown compatibility strictness '" + s + "'");
}

const char* to_string(Strictness s) {
  switch (s) {
    case Strictness::Off: return "off";
    case Strictness::Interface: return "interface";
    case Strictness::All: return "all";
  }
  return "?";
}

bool CompatibilityReport::passed(Strictness s) const {
  if (s == Strictness::Off) return true;
  if (s == Strictness::Interface) return conditions[0].pass;
  for (const auto& c : conditions)
    if (c.evaluated && c.severity == Severity::Error && !c.pass) return false;
  return true;
}

CompatibilityReport check_compatibility(const Discretization& d, const CompatibilityInput& in, const MaterialParams& m,
                                        double rel_tol) {
  if (in.v0.values.size() != d.num_dofs() || in.xi1.values.size() != d.num_dofs())
    throw PreconditionError("initial data size does not match the space");
  if (in.p0.size() != d.num_pressure()) throw PreconditionError("pressure data size does not match the fluid vertices");
  const bool have1 = in.dtp0.has_value();
  const bool have2 = have1 && in.dttp0.has_value();
  const Eigen::VectorXd zero_p = Eigen::VectorXd::Zero(d.num_pressure());

  CompatibilityReport rep;
  std::array<double, 9> acc{};
  std::map<std::string, double> inter;
  double scale2 = 0.0;

  // Volume conditions 3 and 4 and the data scale over the fluid.
  for (int c : d.fluid_cells)
    for (int q = 0; q < d.nq; ++q) {
      const int k = d.qp(c, q);
      const auto lam = lambda_jets(d, c, d.qx[k]);
      PointFields f;
      f.v = vector_jet(d, c, lam, in.v0.values);
      f.p = pressure_jet(d, c, lam, in.p0);
      const JetMat gv = grad(f.v);
      const JetMat defect3 = add(identity_times(f.p), scale(sym(gv), -2.0 * m.mu));
      const JetVec defect4 = vsub(grad(f.p), vscale(laplacian(f.v), m.mu));
      const double w = d.jxw[k];
      acc[2] += w * sq(defect3);
      acc[3] += w * sq(defect4);
      double s = sq(f.v) + f.p.value() * f.p.value();
      if (have1) {
        const double v = pressure_jet(d, c, lam, *in.dtp0).value();
        s += v * v;
      }
      if (have2) {
        const double v = pressure_jet(d, c, lam, *in.dttp0).value();
        s += v * v;
      }
      scale2 += w * s;
    }
  for (int c : d.solid_cells)
    for (int q = 0; q < d.nq; ++q) {
      const int k = d.qp(c, q);
      scale2 += d.jxw[k] * value_at(d, in.xi1.values, c, q).squaredNorm();
    }

  for (const auto& fi : d.interface)
    for (std::size_t q = 0; q < fi.jxw.size(); ++q) {
      const Vec3& x = fi.x[q];
      const Vec3& n = fi.normal;
      const auto lf = lambda_jets(d, fi.fluid_cell, x);
      const auto ls = lambda_jets(d, fi.solid_cell, x);
      PointFields f;
      f.v = vector_jet(d, fi.fluid_cell, lf, in.v0.values);
      f.xi = vector_jet(d, fi.solid_cell, ls, in.xi1.values);
      f.p = pressure_jet(d, fi.fluid_cell, lf, in.p0);
      f.dtp = pressure_jet(d, fi.fluid_cell, lf, have1 ? *in.dtp0 : zero_p);
      f.dttp = pressure_jet(d, fi.fluid_cell, lf, have2 ? *in.dttp0 : zero_p);
      const Derived r = derive(f, m);
      const double w = fi.jxw[q];
      acc[0] += w * sq(vsub(f.v, f.xi));
      acc[1] += w * sq(matvec(r.sigma, n));
      acc[4] += w * sq(r.div_sigma);
      const JetMat dtpI = identity_times(f.dtp);
      acc[5] += w * sq(vsub(matvec(dtpI, n), vadd(matvec(r.S1, n), matvec(r.E1, n))));
      acc[6] += w * sq(vsub(vscale(div(add(r.S1, dtpI)), m.rho_s), vscale(div(r.E1), m.rho_f)));
      const JetVec lhs8 = vscale(vadd(vscale(div(r.E1), r.div_v * 2.0), div(r.E2)), m.rho_f);
      acc[7] += w * sq(vsub(lhs8, div(r.S2)));
      const JetMat left9 = add(r.E2, scale(add(scale(r.S3, r.div_v), r.S4), -2.0));
      acc[8] += w * sq(vsub(matvec(left9, n), vscale(matvec(r.S2, n), m.rho_s)));
      inter["S1"] += w * sq(r.S1);
      inter["S2"] += w * sq(r.S2);
      inter["S3"] += w * sq(r.S3);
      inter["S4"] += w * sq(r.S4);
      inter["E1"] += w * sq(r.E1);
      inter["E2"] += w * sq(r.E2);
    }

  rep.data_scale = std::sqrt(std::max(0.0, scale2));
  for (auto& [k, v] : inter) rep.intermediates[k] = std::sqrt(std::max(0.0, v));
  for (int i = 0; i < 9; ++i) {
    auto& c = rep.conditions[i];
    c.index = i + 1;
    c.domain = (i == 2 || i == 3) ? "fluid" : "gamma_c";
    c.severity = i >= 5 ? Severity::Warn : Severity::Error;
    c.evaluated = i < 5 || (i < 7 ? have1 : have2);
    c.tolerance = rel_tol * rep.data_scale;
    c.residual = c.evaluated ? std::sqrt(std::max(0.0, acc[i])) : 0.0;
    c.pass = !c.evaluated || c.residual <= c.tolerance;
  }
  return rep;
}

}  // namespace fsi
