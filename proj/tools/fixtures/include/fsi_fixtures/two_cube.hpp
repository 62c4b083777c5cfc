#pragma once

#include "fsi/mesh.hpp"

namespace fsi::fixtures {

/// Fluid cube [0,1]^3 next to the solid cube [1,2]x[0,1]^2, each split into
/// n^3 sub-cubes of six tetrahedra. Fluid faces x=0, y=0, y=1, z=0 form the
/// inflow boundary, z=1 the outflow, x=1 the interface, solid outer faces gamma_2.
ReferenceMesh two_cube(int n);

/// Same mesh with every vertex shifted by `offset`.
ReferenceMesh translated(ReferenceMesh mesh, const Vec3& offset);

}  // namespace fsi::fixtures
