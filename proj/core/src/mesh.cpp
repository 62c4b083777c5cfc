#include "fsi/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace fsi {

namespace {

using FaceKey = std::array<int, 3>;

FaceKey sorted(std::array<int, 3> f) {
  std::sort(f.begin(), f.end());
  return f;
}

constexpr std::array<std::array<int, 3>, 4> kCellFaces{{{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

std::map<FaceKey, std::vector<int>> cell_faces(const ReferenceMesh& mesh) {
  std::map<FaceKey, std::vector<int>> faces;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    for (const auto& lf : kCellFaces) {
      faces[sorted({cell[lf[0]], cell[lf[1]], cell[lf[2]]})].push_back(c);
    }
  }
  return faces;
}

std::string next_data_line(std::istream& in, int& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    return line;
  }
  throw ParseError("unexpected end of mesh file after line " + std::to_string(line_no));
}

int read_section_count(std::istream& in, int& line_no, const std::string& keyword) {
  std::istringstream ls(next_data_line(in, line_no));
  std::string word;
  long long count = -1;
  if (!(ls >> word >> count) || word != keyword || count < 0) {
    throw ParseError("line " + std::to_string(line_no) + ": expected '" + keyword + " <count>'");
  }
  return static_cast<int>(count);
}

}  // namespace

const char* to_string(FacetLabel label) {
  switch (label) {
    case FacetLabel::GammaIn: return "gamma_in";
    case FacetLabel::GammaOut: return "gamma_out";
    case FacetLabel::GammaC: return "gamma_c";
    case FacetLabel::Gamma2: return "gamma_2";
  }
  return "?";
}

double ReferenceMesh::cell_volume(int c) const {
  const auto& cell = cells[c];
  const Vec3 a = vertices[cell[1]] - vertices[cell[0]];
  const Vec3 b = vertices[cell[2]] - vertices[cell[0]];
  const Vec3 d = vertices[cell[3]] - vertices[cell[0]];
  return a.dot(b.cross(d)) / 6.0;
}

double ReferenceMesh::total_volume() const {
  double v = 0.0;
  for (int c = 0; c < num_cells(); ++c) v += cell_volume(c);
  return v;
}

std::vector<FacetNeighbours> facet_neighbours(const ReferenceMesh& mesh) {
  const auto faces = cell_faces(mesh);
  std::vector<FacetNeighbours> out(mesh.facets.size());
  for (std::size_t f = 0; f < mesh.facets.size(); ++f) {
    const auto it = faces.find(sorted(mesh.facets[f].vertices));
    if (it == faces.end()) continue;
    out[f].count = static_cast<int>(it->second.size());
    out[f].first = it->second[0];
    if (it->second.size() > 1) out[f].second = it->second[1];
  }
  return out;
}

void ReferenceMesh::validate() const {
  if (cells.size() != cell_region.size()) {
    throw InvariantError("cell/region count mismatch");
  }
  const int nv = num_vertices();
  for (int c = 0; c < num_cells(); ++c) {
    for (int v : cells[c]) {
      if (v < 0 || v >= nv) throw InvariantError("cell " + std::to_string(c) + " references missing vertex");
    }
    if (!(cell_volume(c) > 0.0)) {
      throw InvariantError("cell " + std::to_string(c) + " has non-positive volume");
    }
  }
  const bool any_fluid = std::find(cell_region.begin(), cell_region.end(), Region::Fluid) != cell_region.end();
  const bool any_solid = std::find(cell_region.begin(), cell_region.end(), Region::Solid) != cell_region.end();
  if (!any_fluid) throw InvariantError("Fluid region empty");
  if (!any_solid) throw InvariantError("Solid region empty");

  const auto faces = cell_faces(*this);
  std::map<FaceKey, int> labeled;
  for (std::size_t f = 0; f < facets.size(); ++f) {
    const auto& facet = facets[f];
    const std::string id = "facet " + std::to_string(f);
    for (int v : facet.vertices) {
      if (v < 0 || v >= nv) throw InvariantError(id + " references missing vertex");
    }
    const FaceKey key = sorted(facet.vertices);
    if (!labeled.emplace(key, static_cast<int>(f)).second) {
      throw InvariantError(id + " labeled more than once");
    }
    const auto it = faces.find(key);
    if (it == faces.end()) throw InvariantError(id + " is not a face of any cell");
    const auto& adj = it->second;
    if (facet.label == FacetLabel::GammaC) {
      const bool conforming = adj.size() == 2 && cell_region[adj[0]] != cell_region[adj[1]];
      if (!conforming) throw InvariantError("interface not conforming (" + id + ")");
    } else if (adj.size() != 1) {
      throw InvariantError(id + " labeled " + to_string(facet.label) + " is not on the outer boundary");
    }
  }
  for (const auto& [key, adj] : faces) {
    const bool exterior = adj.size() == 1;
    const bool interface = adj.size() == 2 && cell_region[adj[0]] != cell_region[adj[1]];
    if ((exterior || interface) && labeled.find(key) == labeled.end()) {
      throw InvariantError("unlabeled " + std::string(exterior ? "boundary" : "interface") + " face (" +
                           std::to_string(key[0]) + " " + std::to_string(key[1]) + " " +
                           std::to_string(key[2]) + ")");
    }
    if (adj.size() > 2) throw InvariantError("face shared by more than two cells");
  }
}

ReferenceMesh parse_mesh(std::istream& in) {
  int line_no = 0;
  {
    std::istringstream ls(next_data_line(in, line_no));
    std::string magic, version;
    ls >> magic >> version;
    if (magic != "fsi-mesh" || version != "v1") throw ParseError("missing 'fsi-mesh v1' header");
  }
  ReferenceMesh mesh;
  const int nv = read_section_count(in, line_no, "vertices");
  mesh.vertices.reserve(nv);
  for (int i = 0; i < nv; ++i) {
    std::istringstream ls(next_data_line(in, line_no));
    Vec3 x;
    if (!(ls >> x[0] >> x[1] >> x[2])) throw ParseError("line " + std::to_string(line_no) + ": bad vertex");
    mesh.vertices.push_back(x);
  }
  const int nc = read_section_count(in, line_no, "cells");
  for (int i = 0; i < nc; ++i) {
    std::istringstream ls(next_data_line(in, line_no));
    std::array<int, 4> cell{};
    std::string region;
    if (!(ls >> cell[0] >> cell[1] >> cell[2] >> cell[3] >> region)) {
      throw ParseError("line " + std::to_string(line_no) + ": bad cell");
    }
    if (region == "fluid") {
      mesh.cell_region.push_back(Region::Fluid);
    } else if (region == "solid") {
      mesh.cell_region.push_back(Region::Solid);
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unknown region '" + region + "'");
    }
    mesh.cells.push_back(cell);
  }
  const int nf = read_section_count(in, line_no, "facets");
  for (int i = 0; i < nf; ++i) {
    std::istringstream ls(next_data_line(in, line_no));
    BoundaryFacet facet{};
    std::string label;
    if (!(ls >> facet.vertices[0] >> facet.vertices[1] >> facet.vertices[2] >> label)) {
      throw ParseError("line " + std::to_string(line_no) + ": bad facet");
    }
    if (label == "gamma_in") {
      facet.label = FacetLabel::GammaIn;
    } else if (label == "gamma_out") {
      facet.label = FacetLabel::GammaOut;
    } else if (label == "gamma_c") {
      facet.label = FacetLabel::GammaC;
    } else if (label == "gamma_2") {
      facet.label = FacetLabel::Gamma2;
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unknown facet label '" + label + "'");
    }
    mesh.facets.push_back(facet);
  }
  return mesh;
}

ReferenceMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file " + path.string());
  ReferenceMesh mesh = parse_mesh(in);
  mesh.validate();
  return mesh;
}

void write_mesh(std::ostream& out, const ReferenceMesh& mesh) {
  out << "fsi-mesh v1\n";
  out << "vertices " << mesh.vertices.size() << '\n';
  char buf[128];
  for (const auto& x : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", x[0], x[1], x[2]);
    out << buf;
  }
  out << "cells " << mesh.cells.size() << '\n';
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    out << cell[0] << ' ' << cell[1] << ' ' << cell[2] << ' ' << cell[3] << ' '
        << (mesh.cell_region[c] == Region::Fluid ? "fluid" : "solid") << '\n';
  }
  out << "facets " << mesh.facets.size() << '\n';
  for (const auto& f : mesh.facets) {
    out << f.vertices[0] << ' ' << f.vertices[1] << ' ' << f.vertices[2] << ' ' << to_string(f.label) << '\n';
  }
}

}  // namespace fsi
