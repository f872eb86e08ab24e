#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "spherefv/scheme.hpp"

// Discrete counterparts of the stability properties of entropy solutions:
// weighted norms, L1 distance, cell entropy inequalities for Kruzkov
// entropies, total variation along the zonal rotation field and the total
// variation of the flux divergence.

namespace spherefv {

inline constexpr double kInfinityNorm = std::numeric_limits<double>::infinity();

/// (sum_K area(K) |u_K|^q)^(1/q); max |u_K| for q = kInfinityNorm.
double lq_norm(const CellState& state, double q);

/// sum_K area(K) |a_K - b_K|. Throws MeshMismatch for different meshes.
double l1_distance(const CellState& a, const CellState& b);

using EdgeFluxFn = std::function<double(int edge, double a, double b)>;

/// R_K = area (|u1_K - k| - |u0_K - k|) / dt + sum_{(e,s)} s Q_e(u0_K, u0_{K_e})
/// with Q_e the Kruzkov flux built on q. Non-positive for monotone schemes.
Eigen::VectorXd entropy_residual(const WebMesh& mesh, const Eigen::VectorXd& u0, const Eigen::VectorXd& u1,
                                 double dt, double k, const EdgeFluxFn& q);

Eigen::VectorXd entropy_residual(const CellState& state_n, const CellState& state_np1, double dt, double k,
                                 const EdgeNumericalFlux& q);

/// count Kruzkov constants spread uniformly over [lo - 0.1 r, hi + 0.1 r], r = hi - lo.
std::vector<double> kruzkov_constants(double lo, double hi, int count = 16);

/// Largest residual over all cells and the given constants.
double max_entropy_residual(const CellState& state_n, const CellState& state_np1, double dt,
                            const EdgeNumericalFlux& q, const std::vector<double>& constants);

/// sum over meridional edges of length(e) cos(phi_mid) |u_left - u_right|.
double tv_along_zonal_field(const CellState& state);

/// sum_K |sum_{(e,s) in dK} s q_e(u_left, u_right)|.
double divergence_measure_norm(const CellState& state, const EdgeNumericalFlux& q);

struct DiagnosticsRecord {
  double time = 0;
  double mass = 0;
  double l1 = 0;
  double l2 = 0;
  double linf = 0;
  double entropy_residual_max = 0;
  double tv_zonal = 0;
  double div_measure = 0;
};

struct DiagnosticsReport {
  std::vector<DiagnosticsRecord> records;
  // l1_distance between two trajectories at each record time, when supplied.
  std::vector<double> pairwise_l1;

  void write_csv(std::ostream& out) const;
};

/// Everything but the entropy residual, which needs two time levels.
DiagnosticsRecord diagnose(const CellState& state, const TotalFluxScheme& scheme);

}  // namespace spherefv
