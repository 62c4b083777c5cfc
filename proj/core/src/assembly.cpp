#include "fsi/assembly.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "fsi/parallel.hpp"

namespace fsi {

Eigen::VectorXd ConstraintMatrix::residual(const Eigen::VectorXd& u) const {
  Eigen::VectorXd r(div.rows() + static_cast<Eigen::Index>(pinned_dofs.size()));
  r.head(div.rows()) = div * u;
  for (std::size_t k = 0; k < pinned_dofs.size(); ++k) r[div.rows() + k] = u[pinned_dofs[k]];
  return r;
}

ConstraintMatrix build_constraint(const Discretization& d, const MapState& m) {
  ConstraintMatrix c;
  c.num_dofs = d.num_dofs();
  for (int k = 0; k < d.num_dofs(); ++k)
    if (d.space.dirichlet_mask[k]) c.pinned_dofs.push_back(k);
  for (int cell : d.fluid_cells)
    for (int q = 0; q < d.nq; ++q) {
      const double det = m.det_flow[d.qp(cell, q)];
      if (!(det > 0.0)) {
        std::ostringstream os;
        os << "flow map determinant " << det << " not positive in cell " << cell;
        throw DetFloorError(os.str(), det, cell, q);
      }
    }
  std::vector<Eigen::Triplet<double>> trips;
  for (int cell : d.fluid_cells) {
    for (int q = 0; q < d.nq; ++q) {
      const int k = d.qp(cell, q);
      const Mat3& cof = m.cof_flow.values[k];
      const auto& bary = d.cell_rule.points[q];
      for (int a = 0; a < d.npc; ++a) {
        const Vec3 g = cof * d.grad(cell, q, a);
        const int node = d.space.node(cell, a);
        for (int v = 0; v < 4; ++v) {
          const int row = d.pressure_index[d.mesh.cells[cell][v]];
          const double w = d.jxw[k] * bary[v];
          for (int i = 0; i < 3; ++i) trips.emplace_back(row, 3 * node + i, w * g[i]);
        }
      }
    }
  }
  c.div.resize(d.num_pressure(), d.num_dofs());
  c.div.setFromTriplets(trips.begin(), trips.end());
  return c;
}

DivFreeBasis build_divfree_basis(const ConstraintMatrix& c, const SparseMatrix& mass, const SparseMatrix* stiffness,
                                 double rel_threshold) {
  DivFreeBasis basis;
  std::vector<char> pinned(c.num_dofs, 0);
  for (int k : c.pinned_dofs) pinned[k] = 1;
  basis.free_index.assign(c.num_dofs, -1);
  for (int k = 0; k < c.num_dofs; ++k)
    if (!pinned[k]) {
      basis.free_index[k] = static_cast<int>(basis.free_dofs.size());
      basis.free_dofs.push_back(k);
    }
  const int nf = static_cast<int>(basis.free_dofs.size());
  if (nf == 0) throw InvariantError("W_n is empty: every dof is pinned");

  auto restrict = [&](const SparseMatrix& m, bool rows_free) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows_free ? nf : m.rows(), nf);
    for (int col = 0; col < m.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
        const int fc = basis.free_index[it.col()];
        if (fc < 0) continue;
        if (rows_free) {
          const int fr = basis.free_index[it.row()];
          if (fr >= 0) out(fr, fc) += it.value();
        } else {
          out(it.row(), fc) += it.value();
        }
      }
    return out;
  };

  const Eigen::MatrixXd B = restrict(c.div, false);
  Eigen::MatrixXd N;
  if (B.rows() == 0) {
    N = Eigen::MatrixXd::Identity(nf, nf);
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() ? s[0] : 0.0;
    int rank = 0;
    for (int k = 0; k < s.size(); ++k)
      if (s[k] > rel_threshold * smax) ++rank;
    basis.constraint_rank = rank;
    if (rank >= nf) throw InvariantError("W_n is empty: the constraint has full column rank");
    N = svd.matrixV().rightCols(nf - rank);
  }

  const Eigen::MatrixXd Mf = restrict(mass, true);
  const Eigen::MatrixXd G = N.transpose() * Mf * N;
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success) throw SolveError("mass matrix not positive definite on the nullspace");
  // N L^{-T} is mass-orthonormal.
  N = llt.matrixU().solve<Eigen::OnTheRight>(N);
  if (stiffness) {
    const Eigen::MatrixXd Kf = restrict(*stiffness, true);
    Eigen::MatrixXd Kb = N.transpose() * Kf * N;
    Kb = 0.5 * (Kb + Kb.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Kb);
    Eigen::MatrixXd V = eig.eigenvectors();
    // Fix the sign of each eigenvector so the construction is reproducible.
    for (int k = 0; k < V.cols(); ++k) {
      Eigen::Index imax = 0;
      V.col(k).cwiseAbs().maxCoeff(&imax);
      if (V(imax, k) < 0.0) V.col(k) = -V.col(k);
    }
    N = N * V;
  }
  basis.free = N;
  basis.ambient = Eigen::MatrixXd::Zero(c.num_dofs, N.cols());
  for (int k = 0; k < nf; ++k) basis.ambient.row(basis.free_dofs[k]) = N.row(k);
  return basis;
}

SparseMatrix weighted_mass(const Discretization& d, const MapState& m, const MaterialParams& p) {
  std::vector<Eigen::Triplet<double>> trips;
  for (int c = 0; c < d.mesh.num_cells(); ++c) {
    const bool fluid = d.mesh.cell_region[c] == Region::Fluid;
    for (int q = 0; q < d.nq; ++q) {
      const int k = d.qp(c, q);
      const double w = d.jxw[k] * (fluid ? p.rho_f * m.det_flow[k] : p.rho_s * m.det_defo[k]);
      for (int a = 0; a < d.npc; ++a)
        for (int b = 0; b < d.npc; ++b) {
          const double v = w * d.phi(q, a) * d.phi(q, b);
          const int na = d.space.node(c, a);
          const int nb = d.space.node(c, b);
          for (int i = 0; i < 3; ++i) trips.emplace_back(3 * na + i, 3 * nb + i, v);
        }
    }
  }
  SparseMatrix out(d.num_dofs(), d.num_dofs());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

Eigen::VectorXd load_vector(const Discretization& d, const DivFreeBasis& basis, const InterfaceDatum& g) {
  Eigen::VectorXd amb = Eigen::VectorXd::Zero(d.num_dofs());
  if (!g.empty()) {
    std::size_t k = 0;
    for (const auto& fi : d.interface) {
      for (std::size_t q = 0; q < fi.jxw.size(); ++q, ++k) {
        if (k >= g.size()) throw PreconditionError("interface datum has too few points");
        for (int a = 0; a < d.npc; ++a) {
          const int n = d.space.node(fi.solid_cell, a);
          amb.segment<3>(3 * n) += fi.jxw[q] * fi.solid_phi[q * d.npc + a] * g[k];
        }
      }
    }
    if (k != g.size()) throw PreconditionError("interface datum size does not match the interface quadrature");
  }
  return basis.ambient.transpose() * amb;
}

namespace {

struct Buffers {
  Eigen::MatrixXd mass, mass_fluid, fluid, sym, grad;
  Eigen::VectorXd lift;
};

}  // namespace

GalerkinOperators assemble_operators(const Discretization& d, const DivFreeBasis& basis, const MapState& m,
                                     const ElasticTensorField& b, const InterfaceDatum& g, const MaterialParams& p,
                                     int threads, const Eigen::VectorXd* lift) {
  const int nf = static_cast<int>(basis.free_dofs.size());
  if (static_cast<int>(basis.free_index.size()) != d.num_dofs()) throw PreconditionError("basis does not match the space");
  const std::size_t npts = static_cast<std::size_t>(d.mesh.num_cells()) * d.nq;
  if (m.det_flow.size() != npts || b.coeffs.size() != npts) throw PreconditionError("field layout does not match the mesh");

  const int nc = d.mesh.num_cells();
  const int workers = std::max(1, std::min(threads, nc));
  std::vector<Buffers> buf(workers);
  parallel_chunks(nc, workers, [&](int w, int begin, int end) {
    Buffers& B = buf[w];
    B.mass = Eigen::MatrixXd::Zero(nf, nf);
    B.mass_fluid = Eigen::MatrixXd::Zero(nf, nf);
    B.fluid = Eigen::MatrixXd::Zero(nf, nf);
    B.sym = Eigen::MatrixXd::Zero(nf, nf);
    B.grad = Eigen::MatrixXd::Zero(nf, nf);
    B.lift = Eigen::VectorXd::Zero(nf);
    std::vector<int> fi(d.npc * 3);
    std::vector<Vec3> ga(d.npc), cb(d.npc);
    for (int c = begin; c < end; ++c) {
      for (int a = 0; a < d.npc; ++a)
        for (int i = 0; i < 3; ++i) fi[3 * a + i] = basis.free_index[3 * d.space.node(c, a) + i];
      const bool fluid = d.mesh.cell_region[c] == Region::Fluid;
      Eigen::MatrixXd& M = fluid ? B.mass_fluid : B.mass;
      for (int q = 0; q < d.nq; ++q) {
        const int k = d.qp(c, q);
        const double w = d.jxw[k];
        const double wm = w * (fluid ? p.rho_f * m.det_flow[k] : p.rho_s * m.det_defo[k]);
        for (int bb = 0; bb < d.npc; ++bb)
          for (int a = 0; a < d.npc; ++a) {
            const double v = wm * d.phi(q, a) * d.phi(q, bb);
            for (int i = 0; i < 3; ++i) {
              const int r = fi[3 * bb + i], col = fi[3 * a + i];
              if (r >= 0 && col >= 0) M(r, col) += v;
            }
          }
        if (fluid) {
          const Mat3& Finv = m.inv_flow.values[k];
          const Mat3& cof = m.cof_flow.values[k];
          for (int a = 0; a < d.npc; ++a) {
            ga[a] = Finv.transpose() * d.grad(c, q, a);
            cb[a] = cof * d.grad(c, q, a);
          }
          // sigma(e_j x grad phi_a) : (e_i x grad phi_b)
          //   = mu (delta_ij g_a . c_b + (g_a)_i (c_b)_j)
          for (int bb = 0; bb < d.npc; ++bb)
            for (int a = 0; a < d.npc; ++a) {
              const double dot = ga[a].dot(cb[bb]);
              for (int i = 0; i < 3; ++i) {
                const int r = fi[3 * bb + i];
                for (int j = 0; j < 3; ++j) {
                  const double v = p.mu * w * ((i == j ? dot : 0.0) + ga[a][i] * cb[bb][j]);
                  const int col = fi[3 * a + j];
                  if (r >= 0 && col >= 0) B.fluid(r, col) += v;
                  if (lift && r >= 0 && col < 0) B.lift[r] -= v * (*lift)[3 * d.space.node(c, a) + j];
                }
              }
            }
        } else {
          const Tensor4& bc = b.coeffs[k];
          const auto& wc = b.div_coeffs[k];
          for (int bb = 0; bb < d.npc; ++bb) {
            const Vec3& gb = d.grad(c, q, bb);
            const double pb = d.phi(q, bb);
            for (int a = 0; a < d.npc; ++a) {
              const Vec3& gA = d.grad(c, q, a);
              for (int i = 0; i < 3; ++i) {
                const int r = fi[3 * bb + i];
                if (r < 0) continue;
                for (int j = 0; j < 3; ++j) {
                  const int col = fi[3 * a + j];
                  if (col < 0) continue;
                  double s = 0.0;
                  for (int al = 0; al < 3; ++al)
                    for (int be = 0; be < 3; ++be) s += bc[t4(i, al, j, be)] * gA[be] * gb[al];
                  double t = 0.0;
                  for (int be = 0; be < 3; ++be) t += wc[(i * 3 + j) * 3 + be] * gA[be];
                  B.sym(r, col) += w * s;
                  B.grad(r, col) += w * t * pb;
                }
              }
            }
          }
        }
      }
    }
  });
  for (int w = 1; w < workers; ++w) {
    buf[0].mass += buf[w].mass;
    buf[0].mass_fluid += buf[w].mass_fluid;
    buf[0].fluid += buf[w].fluid;
    buf[0].sym += buf[w].sym;
    buf[0].grad += buf[w].grad;
    buf[0].lift += buf[w].lift;
  }
  const Eigen::MatrixXd& N = basis.free;
  GalerkinOperators ops;
  ops.time = m.flow_grad.time;
  ops.mass_fluid = N.transpose() * buf[0].mass_fluid * N;
  ops.mass_fluid = 0.5 * (ops.mass_fluid + ops.mass_fluid.transpose()).eval();
  ops.mass = N.transpose() * buf[0].mass * N;
  ops.mass = 0.5 * (ops.mass + ops.mass.transpose()).eval();
  ops.mass += ops.mass_fluid;
  ops.fluid_stiffness = N.transpose() * buf[0].fluid * N;
  ops.stiffness_sym = N.transpose() * buf[0].sym * N;
  ops.stiffness_sym = 0.5 * (ops.stiffness_sym + ops.stiffness_sym.transpose()).eval();
  ops.stiffness_grad = N.transpose() * buf[0].grad * N;
  ops.lift_load = N.transpose() * buf[0].lift;
  ops.load = load_vector(d, basis, g);
  return ops;
}

Eigen::VectorXd unify_initial(const Discretization& d, const VectorField& v0, const VectorField& xi1, double tol) {
  if (v0.values.size() != d.num_dofs() || xi1.values.size() != d.num_dofs())
    throw PreconditionError("initial data size does not match the space");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(d.num_dofs());
  for (int n = 0; n < d.space.num_nodes(); ++n) {
    const bool fluid = d.space.in_region(n, Region::Fluid);
    const bool solid = d.space.in_region(n, Region::Solid);
    for (int i = 0; i < 3; ++i) {
      const int dof = 3 * n + i;
      if (fluid && solid && std::abs(v0.values[dof] - xi1.values[dof]) > tol) {
        std::ostringstream os;
        os.precision(17);
        os << "initial velocity and displacement rate differ on interface dof " << dof << " (" << v0.values[dof]
           << " vs " << xi1.values[dof] << ")";
        throw PreconditionError(os.str());
      }
      g[dof] = fluid ? v0.values[dof] : xi1.values[dof];
    }
  }
  return g;
}

Eigen::VectorXd project_initial(const DivFreeBasis& basis, const SparseMatrix& mass, const Eigen::VectorXd& gamma0) {
  return basis.ambient.transpose() * (mass * gamma0);
}

}  // namespace fsi
