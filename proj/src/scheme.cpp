#include "spherefv/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "spherefv/exact_sum.hpp"
#include "spherefv/parallel.hpp"

namespace spherefv {

namespace {

// g_e seen through the scheme's vertex-cached potentials.
struct SchemeEdgeFlux {
  const TotalFluxScheme* scheme;
  int edge;

  double value(double u) const { return scheme->edge_flux_value(edge, u); }
  double derivative(double u) const { return scheme->edge_flux_derivative(edge, u); }
};

double wrap_angle(double d) { return normalize_longitude(d); }

}  // namespace

void SchemeConfig::validate() const {
  if (order != 1 && order != 2) throw ConfigError("scheme order must be 1 or 2");
  if (!(cfl > 0 && cfl <= 1)) throw ConfigError("cfl must lie in (0, 1]");
  if (order == 2 && cfl > 0.5) throw ConfigError("order 2 requires cfl <= 0.5");
  if (!(t_max > 0) || !std::isfinite(t_max)) throw ConfigError("t_max must be positive");
}

double CellState::mass() const {
  ExactSum acc;
  for (int k = 0; k < u.size(); ++k) acc.add(mesh->cells[k].area * u[k]);
  return acc.result();
}

TotalFluxScheme::TotalFluxScheme(std::shared_ptr<const WebMesh> mesh, FluxField flux, SchemeConfig config)
    : mesh_(std::move(mesh)), flux_(std::move(flux)), config_(config) {
  config_.validate();
  if (!flux_.has_potential()) {
    throw std::invalid_argument("the total-flux scheme needs a gradient flux");
  }
  const WebMesh& m = *mesh_;
  if (const auto& axis = flux_.axis_profile()) {
    vertex_axis_dot_.resize(m.vertices.size());
    for (std::size_t v = 0; v < m.vertices.size(); ++v) {
      vertex_axis_dot_[v] = axis->axis.dot(m.vertices[v].x);
    }
  }

  geometry_.resize(m.cells.size());
  for (const Cell& c : m.cells) {
    CellGeometry& g = geometry_[c.id];
    g.lambda_center = c.lambda_center();
    g.phi_centroid = band_centroid_latitude(c.phi_s, c.phi_n);
    g.dlambda = c.lambda_e - c.lambda_w;
  }
  std::vector<std::map<int, double>> north(m.cells.size()), south(m.cells.size());
  for (const Edge& e : m.edges) {
    if (e.kind == EdgeKind::meridional) {
      geometry_[e.left_cell].east = e.right_cell;
      geometry_[e.right_cell].west = e.left_cell;
    } else {
      north[e.left_cell][e.right_cell] += e.length;
      south[e.right_cell][e.left_cell] += e.length;
    }
  }
  auto normalize = [](const std::map<int, double>& in) {
    double total = 0;
    for (const auto& [cell, w] : in) total += w;
    std::vector<std::pair<int, double>> out;
    for (const auto& [cell, w] : in) out.emplace_back(cell, w / total);
    return out;
  };
  for (const Cell& c : m.cells) {
    geometry_[c.id].north = normalize(north[c.id]);
    geometry_[c.id].south = normalize(south[c.id]);
  }

  edge_offsets_.resize(m.edges.size());
  for (const Edge& e : m.edges) {
    double lambda_mid, phi_mid;
    if (e.kind == EdgeKind::meridional) {
      lambda_mid = e.start.lambda;
      phi_mid = 0.5 * (e.start.phi + e.end.phi);
    } else {
      const double west = e.end.lambda;
      double east = e.start.lambda;
      if (east <= west) east += 2 * std::numbers::pi;
      lambda_mid = 0.5 * (west + east);
      phi_mid = e.start.phi;
    }
    const CellGeometry& l = geometry_[e.left_cell];
    const CellGeometry& r = geometry_[e.right_cell];
    edge_offsets_[e.id] = {wrap_angle(lambda_mid - l.lambda_center), phi_mid - l.phi_centroid,
                           wrap_angle(lambda_mid - r.lambda_center), phi_mid - r.phi_centroid};
  }
}

void TotalFluxScheme::freeze_value_range(double lo, double hi) {
  if (!(lo <= hi)) throw InvalidRange("freeze_value_range: lo > hi");
  frozen_range_ = std::make_pair(lo, hi);
}

double TotalFluxScheme::vertex_potential(int vertex, double u) const {
  if (!vertex_axis_dot_.empty()) return flux_.axis_profile()->profile.value(u) * vertex_axis_dot_[vertex];
  return flux_.potential(mesh_->vertices[vertex].x, u);
}

double TotalFluxScheme::vertex_potential_du(int vertex, double u) const {
  if (!vertex_axis_dot_.empty()) {
    return flux_.axis_profile()->profile.derivative(u) * vertex_axis_dot_[vertex];
  }
  return flux_.potential_du(mesh_->vertices[vertex].x, u);
}

double TotalFluxScheme::edge_flux_value(int edge, double u) const {
  const Edge& e = mesh_->edges[edge];
  return vertex_potential(e.start_vertex, u) - vertex_potential(e.end_vertex, u);
}

double TotalFluxScheme::edge_flux_derivative(int edge, double u) const {
  const Edge& e = mesh_->edges[edge];
  return vertex_potential_du(e.start_vertex, u) - vertex_potential_du(e.end_vertex, u);
}

double TotalFluxScheme::edge_lipschitz(int edge, double lo, double hi) const {
  return lipschitz_bound(SchemeEdgeFlux{this, edge}, lo, hi);
}

std::pair<double, double> TotalFluxScheme::value_range(const Eigen::VectorXd& u) const {
  if (frozen_range_) return *frozen_range_;
  return {u.minCoeff(), u.maxCoeff()};
}

std::vector<double> TotalFluxScheme::edge_speeds(double lo, double hi) const {
  const WebMesh& m = *mesh_;
  std::vector<double> speeds(m.edges.size());
  if (const auto& axis = flux_.axis_profile()) {
    // g_e = (axis . (x_start - x_end)) * profile(u): the 64-sample bound
    // factors into |kappa_e| times the profile's sampled slope.
    ScalarFunction profile{axis->profile.value, axis->profile.derivative};
    const double profile_lip = lipschitz_bound(profile, lo, hi);
    for (const Edge& e : m.edges) {
      const double kappa = vertex_axis_dot_[e.start_vertex] - vertex_axis_dot_[e.end_vertex];
      speeds[e.id] = std::abs(kappa) * profile_lip;
    }
  } else {
    parallel_chunks(m.num_edges(), [&](int begin, int end) {
      for (int e = begin; e < end; ++e) speeds[e] = edge_lipschitz(e, lo, hi);
    });
  }
  return speeds;
}

TimeStepEstimate TotalFluxScheme::cfl_dt(const CellState& state) const {
  const auto [lo, hi] = value_range(state.u);
  const std::vector<double> speeds = edge_speeds(lo, hi);
  double dt = std::numeric_limits<double>::infinity();
  for (const Cell& c : mesh_->cells) {
    double total = 0;
    for (const SignedEdge& se : mesh_->boundary(c.id)) total += speeds[se.edge];
    if (total > 0) dt = std::min(dt, c.area / total);
  }
  if (!std::isfinite(dt)) return {config_.cfl * config_.t_max, true};
  return {config_.cfl * dt, false};
}

double TotalFluxScheme::godunov_arg(int edge, double a, double b) const {
  if (a == b) return a;
  if (const auto& axis = flux_.axis_profile()) {
    const Edge& e = mesh_->edges[edge];
    if (vertex_axis_dot_[e.start_vertex] == vertex_axis_dot_[e.end_vertex]) return a;  // g_e == 0
    if (axis->profile.critical_points) {
      const std::vector<double> critical =
          axis->profile.critical_points(std::min(a, b), std::max(a, b));
      return godunov_argument(SchemeEdgeFlux{this, edge}, a, b, critical);
    }
  }
  return godunov_argument(SchemeEdgeFlux{this, edge}, a, b);
}

TotalFluxScheme::FluxTerms TotalFluxScheme::physical_terms(int edge, double u) const {
  const Edge& e = mesh_->edges[edge];
  FluxTerms t;
  t.v[0] = vertex_potential(e.start_vertex, u);
  t.v[1] = -vertex_potential(e.end_vertex, u);
  t.n = 2;
  return t;
}

TotalFluxScheme::FluxTerms TotalFluxScheme::numerical_terms(int edge, double a, double b,
                                                            double speed) const {
  if (config_.numerical_flux == NumericalFluxKind::godunov) {
    return physical_terms(edge, godunov_arg(edge, a, b));
  }
  const FluxTerms ta = physical_terms(edge, a);
  const FluxTerms tb = physical_terms(edge, b);
  FluxTerms t;
  t.v = {0.5 * ta.v[0], 0.5 * ta.v[1], 0.5 * tb.v[0], 0.5 * tb.v[1], -0.5 * speed * (b - a)};
  t.n = 5;
  return t;
}

double EdgeNumericalFlux::operator()(int edge, double a, double b) const {
  const TotalFluxScheme::FluxTerms t = scheme_->numerical_terms(edge, a, b, speeds_[edge]);
  ExactSum acc;
  for (int i = 0; i < t.n; ++i) acc.add(t.v[i]);
  return acc.result();
}

EdgeNumericalFlux TotalFluxScheme::numerical_flux(const CellState& state) const {
  const auto [lo, hi] = value_range(state.u);
  return EdgeNumericalFlux(*this, edge_speeds(lo, hi));
}

double TotalFluxScheme::check_dt(const CellState& state, double dt) const {
  if (state.mesh != mesh_) throw MeshMismatch("state lives on a different mesh");
  if (!(dt >= 0) || !std::isfinite(dt)) throw CflViolation("time step must be finite and >= 0");
  const TimeStepEstimate limit = cfl_dt(state);
  if (dt > limit.dt * (1 + 1e-12)) {
    std::ostringstream msg;
    msg << "dt = " << dt << " exceeds the CFL limit " << limit.dt;
    throw CflViolation(msg.str());
  }
  return limit.dt;
}

Eigen::VectorXd TotalFluxScheme::apply_balance(const Eigen::VectorXd& u, double dt,
                                               const std::vector<FluxTerms>& edge_terms) const {
  const WebMesh& m = *mesh_;
  Eigen::VectorXd out(u.size());
  parallel_chunks(m.num_cells(), [&](int begin, int end) {
    ExactSum acc;
    for (int k = begin; k < end; ++k) {
      acc.clear();
      for (const SignedEdge& se : m.boundaries[k]) {
        const FluxTerms& t = edge_terms[se.edge];
        for (int i = 0; i < t.n; ++i) acc.add(se.sign * t.v[i]);
      }
      out[k] = u[k] - dt * acc.result() / m.cells[k].area;
    }
  });
  return out;
}

CellState TotalFluxScheme::step_first_order(const CellState& state, double dt) const {
  check_dt(state, dt);
  const WebMesh& m = *mesh_;
  const auto [lo, hi] = value_range(state.u);
  const bool lf = config_.numerical_flux == NumericalFluxKind::lax_friedrichs;
  const std::vector<double> speeds = lf ? edge_speeds(lo, hi) : std::vector<double>(m.edges.size(), 0.0);

  std::vector<FluxTerms> terms(m.edges.size());
  parallel_chunks(m.num_edges(), [&](int begin, int end) {
    for (int e = begin; e < end; ++e) {
      const Edge& edge = m.edges[e];
      terms[e] = numerical_terms(e, state.u[edge.left_cell], state.u[edge.right_cell], speeds[e]);
    }
  });
  return {mesh_, apply_balance(state.u, dt, terms), state.t + dt};
}

CellState TotalFluxScheme::step_muscl(const CellState& state, double dt) const {
  if (config_.order != 2) throw ConfigError("step_muscl requires order 2");
  check_dt(state, dt);
  const WebMesh& m = *mesh_;
  const Eigen::VectorXd& u = state.u;
  const int nc = m.num_cells();

  // Coordinate slopes in lambda, then in phi using neighbour values shifted
  // to this cell's longitude.
  Eigen::VectorXd slope_lambda = Eigen::VectorXd::Zero(nc);
  Eigen::VectorXd slope_phi = Eigen::VectorXd::Zero(nc);
  for (const Cell& c : m.cells) {
    if (c.cap) continue;
    const CellGeometry& g = geometry_[c.id];
    slope_lambda[c.id] = minmod((u[g.east] - u[c.id]) / g.dlambda, (u[c.id] - u[g.west]) / g.dlambda);
  }
  auto side_value = [&](const CellGeometry& g, const std::vector<std::pair<int, double>>& side) {
    double v = 0;
    for (const auto& [n, w] : side) {
      v += w * (u[n] + slope_lambda[n] * wrap_angle(g.lambda_center - geometry_[n].lambda_center));
    }
    return v;
  };
  for (const Cell& c : m.cells) {
    if (c.cap) continue;
    const CellGeometry& g = geometry_[c.id];
    const double v_north = side_value(g, g.north);
    const double v_south = side_value(g, g.south);
    const double phi_north = geometry_[g.north.front().first].phi_centroid;
    const double phi_south = geometry_[g.south.front().first].phi_centroid;
    slope_phi[c.id] = minmod((v_north - u[c.id]) / (phi_north - g.phi_centroid),
                             (u[c.id] - v_south) / (g.phi_centroid - phi_south));
  }

  // Edge traces at time n.
  std::vector<double> trace_left(m.edges.size()), trace_right(m.edges.size());
  for (const Edge& e : m.edges) {
    const auto& off = edge_offsets_[e.id];
    const int l = e.left_cell, r = e.right_cell;
    trace_left[e.id] = u[l] + slope_lambda[l] * off[0] + slope_phi[l] * off[1];
    trace_right[e.id] = u[r] + slope_lambda[r] * off[2] + slope_phi[r] * off[3];
  }

  // Hancock predictor: half step with each cell's own traces. Caps keep
  // their first-order value.
  Eigen::VectorXd u_half(nc);
  parallel_chunks(nc, [&](int begin, int end) {
    ExactSum acc;
    for (int k = begin; k < end; ++k) {
      if (m.cells[k].cap) {
        u_half[k] = u[k];
        continue;
      }
      acc.clear();
      for (const SignedEdge& se : m.boundaries[k]) {
        const double trace = se.sign > 0 ? trace_left[se.edge] : trace_right[se.edge];
        const FluxTerms t = physical_terms(se.edge, trace);
        for (int i = 0; i < t.n; ++i) acc.add(se.sign * t.v[i]);
      }
      u_half[k] = u[k] - 0.5 * dt * acc.result() / m.cells[k].area;
    }
  });

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const Edge& e : m.edges) {
    trace_left[e.id] += u_half[e.left_cell] - u[e.left_cell];
    trace_right[e.id] += u_half[e.right_cell] - u[e.right_cell];
    lo = std::min({lo, trace_left[e.id], trace_right[e.id]});
    hi = std::max({hi, trace_left[e.id], trace_right[e.id]});
  }
  if (frozen_range_) {
    std::tie(lo, hi) = *frozen_range_;
  } else {
    lo = std::min(lo, u.minCoeff());
    hi = std::max(hi, u.maxCoeff());
  }
  const bool lf = config_.numerical_flux == NumericalFluxKind::lax_friedrichs;
  const std::vector<double> speeds = lf ? edge_speeds(lo, hi) : std::vector<double>(m.edges.size(), 0.0);

  std::vector<FluxTerms> terms(m.edges.size());
  parallel_chunks(m.num_edges(), [&](int begin, int end) {
    for (int e = begin; e < end; ++e) {
      terms[e] = numerical_terms(e, trace_left[e], trace_right[e], speeds[e]);
    }
  });
  return {mesh_, apply_balance(u, dt, terms), state.t + dt};
}

CellState TotalFluxScheme::step(const CellState& state, double dt) const {
  return config_.order == 2 ? step_muscl(state, dt) : step_first_order(state, dt);
}

TimeStepEstimate cfl_dt(const CellState& state, const FluxField& flux, const SchemeConfig& config) {
  return TotalFluxScheme(state.mesh, flux, config).cfl_dt(state);
}

CellState step_first_order(const CellState& state, const FluxField& flux, const SchemeConfig& config,
                           double dt) {
  return TotalFluxScheme(state.mesh, flux, config).step_first_order(state, dt);
}

CellState step_muscl(const CellState& state, const FluxField& flux, const SchemeConfig& config,
                     double dt) {
  return TotalFluxScheme(state.mesh, flux, config).step_muscl(state, dt);
}

}  // namespace spherefv
