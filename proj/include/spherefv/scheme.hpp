#pragma once

#include <array>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "spherefv/flux.hpp"
#include "spherefv/mesh.hpp"
#include "spherefv/numerical_flux.hpp"

namespace spherefv {

enum class NumericalFluxKind { godunov, lax_friedrichs };
enum class Limiter { minmod };

struct SchemeConfig {
  NumericalFluxKind numerical_flux = NumericalFluxKind::godunov;
  int order = 1;
  double cfl = 0.45;
  Limiter limiter = Limiter::minmod;
  // Time step used when every edge flux is degenerate (cfl * t_max).
  double t_max = 1.0;

  /// Throws ConfigError for out-of-range settings (cfl <= 0.5 at order 2).
  void validate() const;
};

// Cell averages u_K at time t on a mesh.
struct CellState {
  std::shared_ptr<const WebMesh> mesh;
  Eigen::VectorXd u;
  double t = 0;

  /// Total mass sum_K area(K) u_K.
  double mass() const;
};

struct TimeStepEstimate {
  double dt = 0;
  bool degenerate_flux = false;
};

// Per-edge numerical total flux q_e(a, b) from the left cell into the right
// cell, frozen for one value range (Lax-Friedrichs speeds depend on it).
class EdgeNumericalFlux;

// Total-flux finite volume scheme on a web mesh:
//
//   area(K) u_K^{n+1} = area(K) u_K^n - dt sum_{(e,s) in dK} s q_e(u_left, u_right)
//
// Each q_e is evaluated once per step as a short list of summands; a cell's
// balance is their exact sum, so constant states are fixed points bit for bit
// and every edge contributes with opposite signs to its two cells.
class TotalFluxScheme {
 public:
  TotalFluxScheme(std::shared_ptr<const WebMesh> mesh, FluxField flux, SchemeConfig config);

  const WebMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const WebMesh>& mesh_ptr() const { return mesh_; }
  const FluxField& flux() const { return flux_; }
  const SchemeConfig& config() const { return config_; }

  /// Use [lo, hi] instead of the state's range for Lipschitz bounds.
  void freeze_value_range(double lo, double hi);
  void unfreeze_value_range() { frozen_range_.reset(); }

  /// dt = cfl min_K area(K) / sum_{e in dK} Lip(g_e).
  TimeStepEstimate cfl_dt(const CellState& state) const;

  CellState step(const CellState& state, double dt) const;
  CellState step_first_order(const CellState& state, double dt) const;
  CellState step_muscl(const CellState& state, double dt) const;

  /// Numerical fluxes with the speeds the first-order step uses for `state`.
  EdgeNumericalFlux numerical_flux(const CellState& state) const;

  /// g_e(u) = h(start, u) - h(end, u).
  double edge_flux_value(int edge, double u) const;
  double edge_flux_derivative(int edge, double u) const;
  /// Lipschitz bound of g_e on [lo, hi].
  double edge_lipschitz(int edge, double lo, double hi) const;

 private:
  friend class EdgeNumericalFlux;

  // Up to five summands of one edge flux value.
  struct FluxTerms {
    std::array<double, 5> v{};
    int n = 0;
  };

  std::pair<double, double> value_range(const Eigen::VectorXd& u) const;
  std::vector<double> edge_speeds(double lo, double hi) const;
  double vertex_potential(int vertex, double u) const;
  double vertex_potential_du(int vertex, double u) const;
  double godunov_arg(int edge, double a, double b) const;
  FluxTerms physical_terms(int edge, double u) const;
  FluxTerms numerical_terms(int edge, double a, double b, double speed) const;
  double check_dt(const CellState& state, double dt) const;
  // u_K - dt / area(K) * sum of signed per-edge terms.
  Eigen::VectorXd apply_balance(const Eigen::VectorXd& u, double dt,
                                const std::vector<FluxTerms>& edge_terms) const;

  std::shared_ptr<const WebMesh> mesh_;
  FluxField flux_;
  SchemeConfig config_;
  std::optional<std::pair<double, double>> frozen_range_;
  std::vector<double> vertex_axis_dot_;  // axis . x_v for axis fluxes

  // Reconstruction geometry (order 2).
  struct CellGeometry {
    double lambda_center = 0;
    double phi_centroid = 0;
    double dlambda = 0;
    int west = -1;
    int east = -1;
    std::vector<std::pair<int, double>> north;  // (cell, weight)
    std::vector<std::pair<int, double>> south;
  };
  std::vector<CellGeometry> geometry_;
  // Offsets (dlambda, dphi) of each edge midpoint from the left and right
  // cell reconstruction points.
  std::vector<std::array<double, 4>> edge_offsets_;
};

class EdgeNumericalFlux {
 public:
  EdgeNumericalFlux(const TotalFluxScheme& scheme, std::vector<double> speeds)
      : scheme_(&scheme), speeds_(std::move(speeds)) {}

  double operator()(int edge, double a, double b) const;
  double speed(int edge) const { return speeds_[edge]; }

 private:
  const TotalFluxScheme* scheme_;
  std::vector<double> speeds_;
};

TimeStepEstimate cfl_dt(const CellState& state, const FluxField& flux, const SchemeConfig& config);
CellState step_first_order(const CellState& state, const FluxField& flux, const SchemeConfig& config,
                           double dt);
CellState step_muscl(const CellState& state, const FluxField& flux, const SchemeConfig& config,
                     double dt);

inline double minmod(double a, double b) {
  if (a > 0 && b > 0) return std::min(a, b);
  if (a < 0 && b < 0) return std::max(a, b);
  return 0.0;
}

}  // namespace spherefv
