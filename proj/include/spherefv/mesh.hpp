#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spherefv/geometry.hpp"

namespace spherefv {

enum class EdgeKind { meridional, zonal, polar_cap_rim };

const char* to_string(EdgeKind kind);

// Longitude merging toward the poles. A band's longitude count is halved once
// for every power threshold^k (k >= 1) that exceeds cos of the band's
// poleward latitude.
struct CoarseningRule {
  bool enabled = true;
  double threshold = 0.5;

  static CoarseningRule none() { return {false, 0.5}; }
};

struct Vertex {
  SpherePointd point;
  Vec3d x;
};

struct Band {
  double phi_s = 0;
  double phi_n = 0;
  bool cap = false;
  int level = 0;      // number of halvings relative to the equator count
  int lon_count = 1;  // cells in the band (1 for a cap)
  int first_cell = 0;
};

struct Cell {
  int id = 0;
  double lambda_w = 0;
  double lambda_e = 0;
  double phi_s = 0;
  double phi_n = 0;
  double area = 0;
  int band = 0;
  bool cap = false;

  double lambda_center() const { return 0.5 * (lambda_w + lambda_e); }
  double phi_center() const { return 0.5 * (phi_s + phi_n); }
};

// An oriented edge. The in-surface normal nu points from left_cell into
// right_cell: east for meridional edges, north for zonal and rim edges.
// start/end are ordered so that nu = tangent ^ n, i.e. meridional edges run
// south to north and zonal edges run east to west.
struct Edge {
  int id = 0;
  EdgeKind kind = EdgeKind::meridional;
  int start_vertex = 0;
  int end_vertex = 0;
  SpherePointd start;
  SpherePointd end;
  double length = 0;
  int left_cell = 0;
  int right_cell = 0;
  bool nonconformal = false;
};

// sign = +1 when the edge normal points out of the cell.
struct SignedEdge {
  int edge = 0;
  int sign = 1;
};

// Latitude/longitude cell complex covering the sphere, with polar cap cells
// and non-conformal longitude halving toward the poles.
struct WebMesh {
  int n_bands = 0;
  int n_lon_equator = 0;
  CoarseningRule rule;
  std::vector<double> latitude_lines;  // n_bands + 1 values, -pi/2 .. pi/2
  std::vector<Band> bands;
  std::vector<Vertex> vertices;
  std::vector<Cell> cells;
  std::vector<Edge> edges;
  std::vector<std::vector<SignedEdge>> boundaries;

  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  std::span<const SignedEdge> boundary(int cell_id) const;

  const Vec3d& start_x(const Edge& e) const { return vertices[e.start_vertex].x; }
  const Vec3d& end_x(const Edge& e) const { return vertices[e.end_vertex].x; }
};

WebMesh build_web_mesh(int n_bands, int n_lon_equator, CoarseningRule rule = {});

struct ValidationReport {
  double area_error = 0;  // |sum of areas - 4 pi|
  bool area_ok = true;
  bool orientation_ok = true;
  bool two_sided_ok = true;
  bool nonconformal_ok = true;
  std::vector<std::string> failures;

  bool pass() const { return area_ok && orientation_ok && two_sided_ok && nonconformal_ok; }
};

ValidationReport validate(const WebMesh& mesh);

/// Largest great-circle distance between two corners of a cell (the cap
/// diameter for the polar cells).
double max_cell_diameter(const WebMesh& mesh);

void write_mesh_csv(std::ostream& out, const WebMesh& mesh);

}  // namespace spherefv
