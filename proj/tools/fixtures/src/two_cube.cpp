#include "fsi_fixtures/two_cube.hpp"

#include <algorithm>
#include <map>

namespace fsi::fixtures {

ReferenceMesh two_cube(int n) {
  if (n < 1) throw PreconditionError("two_cube needs n >= 1");
  ReferenceMesh m;
  const int nx = 2 * n + 1, ny = n + 1, nz = n + 1;
  const double h = 1.0 / n;
  auto vid = [&](int i, int j, int k) { return (k * ny + j) * nx + i; };
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) m.vertices.emplace_back(i * h, j * h, k * h);

  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < 2 * n; ++i) {
        const Region r = i < n ? Region::Fluid : Region::Solid;
        for (const auto& p : perms) {
          int c[3] = {i, j, k};
          std::array<int, 4> tet{};
          tet[0] = vid(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[p[s]];
            tet[s + 1] = vid(c[0], c[1], c[2]);
          }
          m.cells.push_back(tet);
          m.cell_region.push_back(r);
          if (m.cell_volume(m.num_cells() - 1) < 0.0) std::swap(m.cells.back()[2], m.cells.back()[3]);
        }
      }

  std::map<std::array<int, 3>, std::vector<int>> faces;
  const int local[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  for (int c = 0; c < m.num_cells(); ++c)
    for (const auto& lf : local) {
      std::array<int, 3> f{m.cells[c][lf[0]], m.cells[c][lf[1]], m.cells[c][lf[2]]};
      std::sort(f.begin(), f.end());
      faces[f].push_back(c);
    }
  for (const auto& [f, adj] : faces) {
    if (adj.size() == 2) {
      if (m.cell_region[adj[0]] != m.cell_region[adj[1]]) m.facets.push_back({f, FacetLabel::GammaC});
      continue;
    }
    if (m.cell_region[adj[0]] == Region::Solid) {
      m.facets.push_back({f, FacetLabel::Gamma2});
      continue;
    }
    const Vec3& a = m.vertices[f[0]];
    const bool top = a[2] == 1.0 && m.vertices[f[1]][2] == 1.0 && m.vertices[f[2]][2] == 1.0;
    m.facets.push_back({f, top ? FacetLabel::GammaOut : FacetLabel::GammaIn});
  }
  m.validate();
  return m;
}

ReferenceMesh translated(ReferenceMesh mesh, const Vec3& offset) {
  for (auto& x : mesh.vertices) x += offset;
  return mesh;
}

}  // namespace fsi::fixtures
