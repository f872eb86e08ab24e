#include "spherefv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "spherefv/csv.hpp"

namespace spherefv {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kTol = 1e-12;

int coarsening_level(double phi_poleward, const CoarseningRule& rule) {
  if (!rule.enabled) return 0;
  const double c = std::cos(phi_poleward);
  int level = 0;
  double t = rule.threshold;
  while (level < 30 && c < t) {
    ++level;
    t *= rule.threshold;
  }
  return level;
}

// Longitude of fine index k on the equator grid. k == n_lon wraps to k == 0
// so that vertices are shared bit-for-bit across the date line.
double fine_longitude(int k, int n_lon) {
  return -pi + k * (2 * pi / n_lon);
}

}  // namespace

const char* to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::meridional: return "meridional";
    case EdgeKind::zonal: return "zonal";
    case EdgeKind::polar_cap_rim: return "polar-cap-rim";
  }
  return "?";
}

std::span<const SignedEdge> WebMesh::boundary(int cell_id) const {
  if (cell_id < 0 || cell_id >= static_cast<int>(boundaries.size())) {
    throw UnknownCell("unknown cell id " + std::to_string(cell_id));
  }
  return boundaries[cell_id];
}

WebMesh build_web_mesh(int n_bands, int n_lon_equator, CoarseningRule rule) {
  if (n_bands < 4 || n_bands % 2 != 0) {
    throw InvalidResolution("n_bands must be even and >= 4");
  }
  if (n_lon_equator < 4) throw InvalidResolution("n_lon_equator must be >= 4");
  if (rule.enabled && !(rule.threshold > 0 && rule.threshold < 1)) {
    throw InvalidResolution("coarsening threshold must lie in (0, 1)");
  }

  WebMesh mesh;
  mesh.n_bands = n_bands;
  mesh.n_lon_equator = n_lon_equator;
  mesh.rule = rule;

  const int N = n_lon_equator;
  const double dphi = pi / n_bands;
  mesh.latitude_lines.resize(n_bands + 1);
  for (int i = 0; i <= n_bands; ++i) mesh.latitude_lines[i] = (i - n_bands / 2) * dphi;
  mesh.latitude_lines.front() = -pi / 2;
  mesh.latitude_lines.back() = pi / 2;

  mesh.bands.resize(n_bands);
  for (int b = 0; b < n_bands; ++b) {
    Band& band = mesh.bands[b];
    band.phi_s = mesh.latitude_lines[b];
    band.phi_n = mesh.latitude_lines[b + 1];
    band.cap = (b == 0 || b == n_bands - 1);
    if (band.cap) continue;
    const double poleward = band.phi_s + band.phi_n > 0 ? band.phi_n : band.phi_s;
    band.level = coarsening_level(poleward, rule);
    const int factor = 1 << band.level;
    if (N % factor != 0 || N / factor < 2) {
      throw InvalidResolution("n_lon_equator = " + std::to_string(N) +
                              " is not divisible by 2^" + std::to_string(band.level) +
                              " with at least two cells left");
    }
    band.lon_count = N / factor;
  }

  // Cells, band by band from south to north.
  for (int b = 0; b < n_bands; ++b) {
    Band& band = mesh.bands[b];
    band.first_cell = mesh.num_cells();
    if (band.cap) {
      Cell c;
      c.id = mesh.num_cells();
      c.lambda_w = -pi;
      c.lambda_e = pi;
      c.phi_s = band.phi_s;
      c.phi_n = band.phi_n;
      c.area = 2 * pi * (std::sin(band.phi_n) - std::sin(band.phi_s));
      c.band = b;
      c.cap = true;
      mesh.cells.push_back(c);
      continue;
    }
    const int factor = 1 << band.level;
    const double width = factor * (2 * pi / N);
    for (int j = 0; j < band.lon_count; ++j) {
      Cell c;
      c.id = mesh.num_cells();
      c.lambda_w = fine_longitude(j * factor, N);
      c.lambda_e = fine_longitude((j + 1) * factor, N);
      c.phi_s = band.phi_s;
      c.phi_n = band.phi_n;
      c.area = width * (std::sin(band.phi_n) - std::sin(band.phi_s));
      c.band = b;
      mesh.cells.push_back(c);
    }
  }

  auto cell_at = [&](int b, int k) {
    const Band& band = mesh.bands[b];
    if (band.cap) return band.first_cell;
    return band.first_cell + (k % N) / (1 << band.level);
  };

  // Vertices live on the interior latitude lines; the spacing on a line is the
  // finer of its two neighbouring (non-cap) bands.
  std::vector<int> line_step(n_bands + 1, 0);
  std::vector<std::map<int, int>> vertex_id(n_bands + 1);
  for (int i = 1; i < n_bands; ++i) {
    int level = 64;
    if (!mesh.bands[i - 1].cap) level = std::min(level, mesh.bands[i - 1].level);
    if (!mesh.bands[i].cap) level = std::min(level, mesh.bands[i].level);
    line_step[i] = 1 << level;
    for (int k = 0; k < N; k += line_step[i]) {
      Vertex v;
      v.point = {fine_longitude(k, N), mesh.latitude_lines[i]};
      v.x = sph_to_cart(v.point);
      vertex_id[i][k] = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back(v);
    }
  }
  auto vertex_at = [&](int line, int k) { return vertex_id[line].at(k % N); };

  auto add_edge = [&](Edge e) {
    e.id = mesh.num_edges();
    e.start = mesh.vertices[e.start_vertex].point;
    e.end = mesh.vertices[e.end_vertex].point;
    mesh.edges.push_back(e);
  };

  // Meridional edges: the west side of every non-cap cell, south to north.
  for (int b = 1; b < n_bands - 1; ++b) {
    const Band& band = mesh.bands[b];
    const int factor = 1 << band.level;
    for (int j = 0; j < band.lon_count; ++j) {
      Edge e;
      e.kind = EdgeKind::meridional;
      e.start_vertex = vertex_at(b, j * factor);
      e.end_vertex = vertex_at(b + 1, j * factor);
      e.length = arc_length(ArcKind::meridian, 0.0, band.phi_s, band.phi_n);
      e.left_cell = band.first_cell + (j + band.lon_count - 1) % band.lon_count;
      e.right_cell = band.first_cell + j;
      add_edge(e);
    }
  }

  // Zonal and rim edges: one per vertex interval on each interior line,
  // running east to west.
  for (int i = 1; i < n_bands; ++i) {
    const int step = line_step[i];
    const Band& south = mesh.bands[i - 1];
    const Band& north = mesh.bands[i];
    const double phi = mesh.latitude_lines[i];
    for (int k = 0; k < N; k += step) {
      Edge e;
      e.kind = (south.cap || north.cap) ? EdgeKind::polar_cap_rim : EdgeKind::zonal;
      e.nonconformal = !south.cap && !north.cap && south.level != north.level;
      e.start_vertex = vertex_at(i, k + step);
      e.end_vertex = vertex_at(i, k);
      e.length = arc_length(ArcKind::latitude, phi, 0.0, step * (2 * pi / N));
      e.left_cell = cell_at(i - 1, k);
      e.right_cell = cell_at(i, k);
      add_edge(e);
    }
  }

  mesh.boundaries.assign(mesh.cells.size(), {});
  for (const Edge& e : mesh.edges) {
    mesh.boundaries[e.left_cell].push_back({e.id, +1});
    mesh.boundaries[e.right_cell].push_back({e.id, -1});
  }
  return mesh;
}

namespace {

void fail(ValidationReport& report, bool& flag, const std::string& message) {
  flag = false;
  if (report.failures.size() < 64) report.failures.push_back(message);
}

bool longitude_within(double lambda, double lw, double le) {
  // le may be pi while vertices are normalized to -pi.
  if (lambda >= lw - kTol && lambda <= le + kTol) return true;
  const double shifted = lambda + 2 * pi;
  return shifted >= lw - kTol && shifted <= le + kTol;
}

}  // namespace

ValidationReport validate(const WebMesh& mesh) {
  ValidationReport report;
  const int nc = mesh.num_cells();
  auto valid_cell = [&](int id) { return id >= 0 && id < nc; };

  // Areas.
  double total = 0;
  for (const Cell& c : mesh.cells) {
    total += c.area;
    const double expected = (c.lambda_e - c.lambda_w) * (std::sin(c.phi_n) - std::sin(c.phi_s));
    if (std::abs(expected - c.area) > kTol) {
      fail(report, report.area_ok, "cell " + std::to_string(c.id) + " area mismatch");
    }
  }
  report.area_error = std::abs(total - 4 * pi);
  if (report.area_error > kTol) {
    std::ostringstream msg;
    msg << "sum of cell areas differs from 4 pi by " << report.area_error;
    fail(report, report.area_ok, msg.str());
  }

  // Two-sided edges: each edge is listed by exactly its two cells, with
  // opposite signs matching left/right.
  if (static_cast<int>(mesh.boundaries.size()) != nc) {
    fail(report, report.two_sided_ok, "boundary list count differs from cell count");
  }
  std::vector<int> plus_count(mesh.edges.size(), 0), minus_count(mesh.edges.size(), 0);
  for (int c = 0; c < static_cast<int>(mesh.boundaries.size()); ++c) {
    for (const SignedEdge& se : mesh.boundaries[c]) {
      if (se.edge < 0 || se.edge >= mesh.num_edges()) {
        fail(report, report.two_sided_ok, "cell " + std::to_string(c) + " lists unknown edge");
        continue;
      }
      const Edge& e = mesh.edges[se.edge];
      const int expected = (c == e.left_cell) ? +1 : (c == e.right_cell ? -1 : 0);
      if (expected == 0 || se.sign != expected) {
        fail(report, report.two_sided_ok,
             "edge " + std::to_string(e.id) + " sign inconsistent in cell " + std::to_string(c));
      }
      (se.sign > 0 ? plus_count : minus_count)[se.edge]++;
    }
  }
  for (const Edge& e : mesh.edges) {
    if (!valid_cell(e.left_cell) || !valid_cell(e.right_cell) || e.left_cell == e.right_cell) {
      fail(report, report.two_sided_ok, "edge " + std::to_string(e.id) + " lacks two distinct cells");
    }
    if (plus_count[e.id] != 1 || minus_count[e.id] != 1) {
      fail(report, report.two_sided_ok,
           "edge " + std::to_string(e.id) + " does not appear once with each sign");
    }
  }

  // Orientation closure: with signs derived from each edge's left/right
  // cells, the boundary must be a single directed loop.
  for (int c = 0; c < static_cast<int>(mesh.boundaries.size()); ++c) {
    std::map<int, int> next;
    bool ok = true;
    for (const SignedEdge& se : mesh.boundaries[c]) {
      if (se.edge < 0 || se.edge >= mesh.num_edges()) {
        ok = false;
        break;
      }
      const Edge& e = mesh.edges[se.edge];
      int sign = 0;
      if (c == e.left_cell) sign = +1;
      else if (c == e.right_cell) sign = -1;
      if (sign == 0) {
        ok = false;
        break;
      }
      const int from = sign > 0 ? e.start_vertex : e.end_vertex;
      const int to = sign > 0 ? e.end_vertex : e.start_vertex;
      if (!next.emplace(from, to).second) {
        ok = false;
        break;
      }
    }
    if (ok && !next.empty()) {
      // Walk the successor map; a single loop visits every entry once.
      int v = next.begin()->first;
      std::size_t steps = 0;
      do {
        auto it = next.find(v);
        if (it == next.end()) {
          ok = false;
          break;
        }
        v = it->second;
        ++steps;
      } while (v != next.begin()->first && steps <= next.size());
      ok = ok && steps == next.size() && v == next.begin()->first;
    }
    if (!ok || next.empty()) {
      fail(report, report.orientation_ok, "cell " + std::to_string(c) + " boundary is not a closed loop");
    }
  }

  // Side lengths and endpoint placement, including non-conformal splits.
  for (int c = 0; c < std::min<int>(nc, static_cast<int>(mesh.boundaries.size())); ++c) {
    const Cell& cell = mesh.cells[c];
    double south = 0, north = 0, west = 0, east = 0;
    for (const SignedEdge& se : mesh.boundaries[c]) {
      if (se.edge < 0 || se.edge >= mesh.num_edges()) continue;
      const Edge& e = mesh.edges[se.edge];
      for (const SpherePointd& p : {e.start, e.end}) {
        const bool lat_ok = p.phi >= cell.phi_s - kTol && p.phi <= cell.phi_n + kTol;
        if (!lat_ok || !longitude_within(p.lambda, cell.lambda_w, cell.lambda_e)) {
          fail(report, report.nonconformal_ok,
               "edge " + std::to_string(e.id) + " endpoint outside cell " + std::to_string(c));
        }
      }
      if (e.kind == EdgeKind::meridional) {
        (c == e.right_cell ? west : east) += e.length;
      } else {
        (c == e.right_cell ? south : north) += e.length;
      }
    }
    const double dlam = cell.lambda_e - cell.lambda_w;
    const double dphi = cell.phi_n - cell.phi_s;
    auto check = [&](double got, double want, const char* side) {
      if (std::abs(got - want) > kTol) {
        fail(report, report.nonconformal_ok,
             "cell " + std::to_string(c) + " " + side + " side length mismatch");
      }
    };
    if (cell.cap) {
      const bool south_cap = cell.phi_s <= -pi / 2;
      check(south_cap ? north : south, dlam * std::cos(south_cap ? cell.phi_n : cell.phi_s), "rim");
      check(south_cap ? south : north, 0.0, "pole");
    } else {
      check(south, dlam * std::cos(cell.phi_s), "south");
      check(north, dlam * std::cos(cell.phi_n), "north");
      check(west, dphi, "west");
      check(east, dphi, "east");
    }
  }
  return report;
}

double max_cell_diameter(const WebMesh& mesh) {
  double diameter = 0;
  for (const Cell& c : mesh.cells) {
    if (c.cap) {
      const double rim = c.phi_s <= -pi / 2 ? c.phi_n : c.phi_s;
      const Vec3d a = sph_to_cart(SpherePointd{0.0, rim});
      const Vec3d b = sph_to_cart(SpherePointd{pi, rim});
      diameter = std::max(diameter, great_circle_distance(a, b));
      continue;
    }
    const Vec3d corners[4] = {
        sph_to_cart(SpherePointd{c.lambda_w, c.phi_s}), sph_to_cart(SpherePointd{c.lambda_e, c.phi_s}),
        sph_to_cart(SpherePointd{c.lambda_w, c.phi_n}), sph_to_cart(SpherePointd{c.lambda_e, c.phi_n})};
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        diameter = std::max(diameter, great_circle_distance(corners[i], corners[j]));
      }
    }
  }
  return diameter;
}

void write_mesh_csv(std::ostream& out, const WebMesh& mesh) {
  out << "record,id,lambda_w,lambda_e,phi_s,phi_n,area\n";
  for (const Cell& c : mesh.cells) {
    out << "cell," << c.id << ',' << format_double(c.lambda_w) << ',' << format_double(c.lambda_e)
        << ',' << format_double(c.phi_s) << ',' << format_double(c.phi_n) << ','
        << format_double(c.area) << '\n';
  }
  out << "record,id,kind,lambda_start,phi_start,lambda_end,phi_end,length,left,right\n";
  for (const Edge& e : mesh.edges) {
    out << "edge," << e.id << ',' << to_string(e.kind) << ',' << format_double(e.start.lambda) << ','
        << format_double(e.start.phi) << ',' << format_double(e.end.lambda) << ','
        << format_double(e.end.phi) << ',' << format_double(e.length) << ',' << e.left_cell << ','
        << e.right_cell << '\n';
  }
}

}  // namespace spherefv
