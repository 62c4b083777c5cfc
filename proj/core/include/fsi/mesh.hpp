#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "fsi/types.hpp"

namespace fsi {

enum class FacetLabel { GammaIn, GammaOut, GammaC, Gamma2 };

const char* to_string(FacetLabel label);

struct BoundaryFacet {
  std::array<int, 3> vertices;
  FacetLabel label;
};

/// Fixed reference configuration: tetrahedral cells split into a fluid and a
/// solid region, with labeled boundary and interface facets.
struct ReferenceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> cells;
  std::vector<Region> cell_region;
  std::vector<BoundaryFacet> facets;

  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_vertices() const { return static_cast<int>(vertices.size()); }

  /// Signed volume of cell c (positive for correctly oriented cells).
  double cell_volume(int c) const;
  double total_volume() const;

  /// Throws InvariantError naming the offending entity when a mesh invariant fails.
  void validate() const;
};

/// Cells adjacent to a facet, found by matching vertex triples.
struct FacetNeighbours {
  int first = -1;
  int second = -1;
  int count = 0;
};

std::vector<FacetNeighbours> facet_neighbours(const ReferenceMesh& mesh);

ReferenceMesh parse_mesh(std::istream& in);
ReferenceMesh load_mesh(const std::filesystem::path& path);
void write_mesh(std::ostream& out, const ReferenceMesh& mesh);

}  // namespace fsi
