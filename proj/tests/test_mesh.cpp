#include <gtest/gtest.h>

#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "spherefv/mesh.hpp"

using namespace spherefv;
constexpr double pi = std::numbers::pi;

namespace {

const std::vector<std::pair<int, int>> kShipped = {{4, 8}, {8, 16}, {16, 32}, {32, 64}, {64, 128}};

}  // namespace

TEST(Mesh, SmallestMeshCellCount) {
  const WebMesh m = build_web_mesh(4, 8, CoarseningRule::none());
  EXPECT_EQ(m.num_cells(), 18);
  double total = 0;
  for (const Cell& c : m.cells) total += (c.lambda_e - c.lambda_w) * (std::sin(c.phi_n) - std::sin(c.phi_s));
  EXPECT_NEAR(total, 4 * pi, 1e-12);
  EXPECT_TRUE(validate(m).pass());
}

TEST(Mesh, ShippedResolutionsValidate) {
  for (const auto& [nb, nl] : kShipped) {
    for (const CoarseningRule rule : {CoarseningRule{}, CoarseningRule::none()}) {
      const WebMesh m = build_web_mesh(nb, nl, rule);
      const ValidationReport r = validate(m);
      EXPECT_TRUE(r.pass()) << nb << "x" << nl << ": " << (r.failures.empty() ? "" : r.failures.front());
      EXPECT_LE(r.area_error, 1e-12);
    }
  }
}

TEST(Mesh, MeridionalEdgesStayInOneBand) {
  const WebMesh m = build_web_mesh(16, 32);
  for (const Edge& e : m.edges) {
    if (e.kind != EdgeKind::meridional) continue;
    EXPECT_EQ(m.cells[e.left_cell].band, m.cells[e.right_cell].band);
    EXPECT_EQ(e.start.lambda, e.end.lambda);
    EXPECT_LT(e.start.phi, e.end.phi);  // south to north
    // left cell lies west of the edge
    EXPECT_NEAR(std::remainder(m.cells[e.left_cell].lambda_e - e.start.lambda, 2 * pi), 0.0, 1e-14);
  }
}

TEST(Mesh, CoarseningTransitionsAtQuarterPi) {
  const WebMesh m = build_web_mesh(8, 16);
  ASSERT_EQ(m.bands.size(), 8u);
  EXPECT_TRUE(m.bands[0].cap);
  EXPECT_TRUE(m.bands[7].cap);
  EXPECT_EQ(m.bands[1].lon_count, 8);
  EXPECT_EQ(m.bands[6].lon_count, 8);
  for (int b = 2; b <= 5; ++b) EXPECT_EQ(m.bands[b].lon_count, 16);

  std::set<double> lines;
  for (const Edge& e : m.edges) {
    if (e.nonconformal) {
      EXPECT_EQ(e.kind, EdgeKind::zonal);
      lines.insert(e.start.phi);
    }
  }
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_NEAR(*lines.begin(), -pi / 4, 1e-15);
  EXPECT_NEAR(*lines.rbegin(), pi / 4, 1e-15);
}

TEST(Mesh, NoCoarseningMeansConformal) {
  const WebMesh m = build_web_mesh(16, 32, CoarseningRule::none());
  for (const Edge& e : m.edges) EXPECT_FALSE(e.nonconformal);
  for (const Band& b : m.bands) {
    if (!b.cap) EXPECT_EQ(b.lon_count, 32);
  }
}

TEST(Mesh, BoundaryShapes) {
  const WebMesh m = build_web_mesh(16, 32);
  for (const Cell& c : m.cells) {
    const auto bnd = m.boundary(c.id);
    if (c.cap) {
      const int lon = m.bands[c.band == 0 ? 1 : m.n_bands - 2].lon_count;
      EXPECT_EQ(static_cast<int>(bnd.size()), lon);
      for (const SignedEdge& se : bnd) {
        EXPECT_EQ(m.edges[se.edge].kind, EdgeKind::polar_cap_rim);
        EXPECT_EQ(se.sign, bnd.front().sign);
      }
    } else {
      EXPECT_GE(bnd.size(), 4u);
    }
  }
  EXPECT_THROW(m.boundary(-1), UnknownCell);
  EXPECT_THROW(m.boundary(m.num_cells()), UnknownCell);
}

TEST(Mesh, CellSidesMatchEdgeLengths) {
  // The edge lengths around each cell add up to the cell perimeter from the
  // cell's own corner coordinates.
  const WebMesh m = build_web_mesh(16, 32);
  for (const Cell& c : m.cells) {
    double sum = 0;
    for (const SignedEdge& se : m.boundary(c.id)) sum += m.edges[se.edge].length;
    double perimeter;
    if (c.cap) {
      const double phi = c.band == 0 ? c.phi_n : c.phi_s;
      perimeter = 2 * pi * std::cos(phi);
    } else {
      const double dl = c.lambda_e - c.lambda_w;
      perimeter = 2 * (c.phi_n - c.phi_s) + dl * (std::cos(c.phi_s) + std::cos(c.phi_n));
    }
    EXPECT_NEAR(sum, perimeter, 1e-13) << "cell " << c.id;
  }
}

TEST(Mesh, VerticesAreSharedExactly) {
  const WebMesh m = build_web_mesh(16, 32);
  std::map<std::pair<int, int>, int> uses;
  for (const Edge& e : m.edges) {
    EXPECT_EQ((m.start_x(e) - sph_to_cart(m.vertices[e.start_vertex].point)).norm(), 0.0);
    ++uses[{e.start_vertex, 0}];
    ++uses[{e.end_vertex, 0}];
  }
  // Every vertex is the endpoint of at least two edges (closed loops).
  for (const auto& [key, count] : uses) EXPECT_GE(count, 2);
}

TEST(Mesh, InvalidResolutions) {
  EXPECT_THROW(build_web_mesh(5, 16), InvalidResolution);
  EXPECT_THROW(build_web_mesh(2, 16), InvalidResolution);
  EXPECT_THROW(build_web_mesh(8, 3), InvalidResolution);
  EXPECT_THROW(build_web_mesh(8, 16, CoarseningRule{true, 1.5}), InvalidResolution);
}

TEST(Mesh, SwappedEdgeFailsOrientation) {
  WebMesh m = build_web_mesh(8, 16);
  Edge& e = m.edges[m.num_edges() / 2];
  std::swap(e.left_cell, e.right_cell);
  const ValidationReport r = validate(m);
  EXPECT_FALSE(r.pass());
  EXPECT_FALSE(r.orientation_ok);
}

TEST(Mesh, RemovedCapFailsArea) {
  WebMesh m = build_web_mesh(8, 16);
  m.cells.pop_back();
  m.boundaries.pop_back();
  const ValidationReport r = validate(m);
  EXPECT_FALSE(r.pass());
  EXPECT_FALSE(r.area_ok);
  EXPECT_NEAR(r.area_error, 2 * pi * (1 - std::sin(3 * pi / 8)), 1e-12);
}

TEST(Mesh, DiameterShrinksWithRefinement) {
  const double d1 = max_cell_diameter(build_web_mesh(8, 16));
  const double d2 = max_cell_diameter(build_web_mesh(16, 32));
  EXPECT_GT(d1, d2);
  EXPECT_NEAR(d1 / d2, 2.0, 0.3);
}

TEST(Mesh, CsvHasOneRowPerCellAndEdge) {
  const WebMesh m = build_web_mesh(8, 16);
  std::ostringstream out;
  write_mesh_csv(out, m);
  std::istringstream in(out.str());
  std::string line;
  int cells = 0, edges = 0;
  while (std::getline(in, line)) {
    if (line.rfind("cell,", 0) == 0) ++cells;
    if (line.rfind("edge,", 0) == 0) ++edges;
  }
  EXPECT_EQ(cells, m.num_cells());
  EXPECT_EQ(edges, m.num_edges());
}
