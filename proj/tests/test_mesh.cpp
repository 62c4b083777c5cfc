#include <sstream>

#include <gtest/gtest.h>

#include "fsi/mesh.hpp"
#include "fsi_fixtures/two_cube.hpp"

namespace {

TEST(ReferenceMesh, TwoCubeCountsAndVolume) {
  const auto m = fsi::fixtures::two_cube(2);
  EXPECT_EQ(m.num_vertices(), 5 * 3 * 3);
  EXPECT_EQ(m.num_cells(), 6 * 16);
  EXPECT_NEAR(m.total_volume(), 2.0, 1e-14);
  int gc = 0;
  for (const auto& f : m.facets) gc += f.label == fsi::FacetLabel::GammaC;
  EXPECT_EQ(gc, 8);
}

TEST(ReferenceMesh, RoundTripThroughText) {
  const auto m = fsi::fixtures::two_cube(1);
  std::stringstream s;
  fsi::write_mesh(s, m);
  const auto back = fsi::parse_mesh(s);
  ASSERT_EQ(back.num_cells(), m.num_cells());
  for (int v = 0; v < m.num_vertices(); ++v) EXPECT_EQ(back.vertices[v], m.vertices[v]);
  EXPECT_EQ(back.facets.size(), m.facets.size());
}

TEST(ReferenceMesh, MissingInterfaceLabelIsRejected) {
  auto m = fsi::fixtures::two_cube(1);
  std::erase_if(m.facets, [](const fsi::BoundaryFacet& f) { return f.label == fsi::FacetLabel::GammaC; });
  EXPECT_THROW(m.validate(), fsi::InvariantError);
}

TEST(ReferenceMesh, NegativeCellIsRejected) {
  auto m = fsi::fixtures::two_cube(1);
  std::swap(m.cells[0][0], m.cells[0][1]);
  EXPECT_THROW(m.validate(), fsi::InvariantError);
}

TEST(ReferenceMesh, BadHeaderIsParseError) {
  std::istringstream s("not-a-mesh\n");
  EXPECT_THROW(fsi::parse_mesh(s), fsi::ParseError);
}

}  // namespace
