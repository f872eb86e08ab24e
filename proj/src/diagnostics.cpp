#include "spherefv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "spherefv/csv.hpp"
#include "spherefv/exact_sum.hpp"

namespace spherefv {

double lq_norm(const CellState& state, double q) {
  if (!(q >= 1)) throw InvalidRange("lq_norm: q must be >= 1");
  if (q == kInfinityNorm) return state.u.size() == 0 ? 0.0 : state.u.cwiseAbs().maxCoeff();
  ExactSum acc;
  for (int k = 0; k < state.u.size(); ++k) {
    acc.add(state.mesh->cells[k].area * std::pow(std::abs(state.u[k]), q));
  }
  return std::pow(acc.result(), 1.0 / q);
}

double l1_distance(const CellState& a, const CellState& b) {
  if (a.mesh != b.mesh || a.u.size() != b.u.size()) throw MeshMismatch("l1_distance: states on different meshes");
  ExactSum acc;
  for (int k = 0; k < a.u.size(); ++k) acc.add(a.mesh->cells[k].area * std::abs(a.u[k] - b.u[k]));
  return acc.result();
}

Eigen::VectorXd entropy_residual(const WebMesh& mesh, const Eigen::VectorXd& u0, const Eigen::VectorXd& u1,
                                 double dt, double k, const EdgeFluxFn& q) {
  std::vector<double> edge_entropy_flux(mesh.edges.size());
  for (const Edge& e : mesh.edges) {
    const auto Q = kruzkov_edge_flux([&q, id = e.id](double a, double b) { return q(id, a, b); }, k);
    edge_entropy_flux[e.id] = Q(u0[e.left_cell], u0[e.right_cell]);
  }
  Eigen::VectorXd r(mesh.num_cells());
  for (const Cell& c : mesh.cells) {
    double flux = 0;
    for (const SignedEdge& se : mesh.boundary(c.id)) flux += se.sign * edge_entropy_flux[se.edge];
    r[c.id] = c.area * (std::abs(u1[c.id] - k) - std::abs(u0[c.id] - k)) / dt + flux;
  }
  return r;
}

Eigen::VectorXd entropy_residual(const CellState& state_n, const CellState& state_np1, double dt, double k,
                                 const EdgeNumericalFlux& q) {
  if (state_n.mesh != state_np1.mesh) throw MeshMismatch("entropy_residual: states on different meshes");
  return entropy_residual(*state_n.mesh, state_n.u, state_np1.u, dt, k,
                          [&q](int e, double a, double b) { return q(e, a, b); });
}

std::vector<double> kruzkov_constants(double lo, double hi, int count) {
  const double pad = 0.1 * (hi - lo);
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    out[i] = count == 1 ? 0.5 * (lo + hi)
                        : (lo - pad) + (hi - lo + 2 * pad) * (static_cast<double>(i) / (count - 1));
  }
  return out;
}

double max_entropy_residual(const CellState& state_n, const CellState& state_np1, double dt,
                            const EdgeNumericalFlux& q, const std::vector<double>& constants) {
  double worst = -std::numeric_limits<double>::infinity();
  for (double k : constants) worst = std::max(worst, entropy_residual(state_n, state_np1, dt, k, q).maxCoeff());
  return worst;
}

double tv_along_zonal_field(const CellState& state) {
  const WebMesh& mesh = *state.mesh;
  double tv = 0;
  for (const Edge& e : mesh.edges) {
    if (e.kind != EdgeKind::meridional) continue;
    const double phi_mid = 0.5 * (e.start.phi + e.end.phi);
    tv += e.length * std::cos(phi_mid) * std::abs(state.u[e.left_cell] - state.u[e.right_cell]);
  }
  return tv;
}

double divergence_measure_norm(const CellState& state, const EdgeNumericalFlux& q) {
  const WebMesh& mesh = *state.mesh;
  std::vector<double> flux(mesh.edges.size());
  for (const Edge& e : mesh.edges) flux[e.id] = q(e.id, state.u[e.left_cell], state.u[e.right_cell]);
  double total = 0;
  ExactSum acc;
  for (const Cell& c : mesh.cells) {
    acc.clear();
    for (const SignedEdge& se : mesh.boundary(c.id)) acc.add(se.sign * flux[se.edge]);
    total += std::abs(acc.result());
  }
  return total;
}

DiagnosticsRecord diagnose(const CellState& state, const TotalFluxScheme& scheme) {
  DiagnosticsRecord r;
  r.time = state.t;
  r.mass = state.mass();
  r.l1 = lq_norm(state, 1);
  r.l2 = lq_norm(state, 2);
  r.linf = lq_norm(state, kInfinityNorm);
  r.tv_zonal = tv_along_zonal_field(state);
  r.div_measure = divergence_measure_norm(state, scheme.numerical_flux(state));
  return r;
}

void DiagnosticsReport::write_csv(std::ostream& out) const {
  out << "time,mass,l1,l2,linf,entropy_residual_max,tv_zonal,div_measure\n";
  for (const DiagnosticsRecord& r : records) {
    out << format_double(r.time) << ',' << format_double(r.mass) << ',' << format_double(r.l1) << ','
        << format_double(r.l2) << ',' << format_double(r.linf) << ',' << format_double(r.entropy_residual_max)
        << ',' << format_double(r.tv_zonal) << ',' << format_double(r.div_measure) << '\n';
  }
}

}  // namespace spherefv
