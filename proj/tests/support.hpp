#pragma once

// Shared fixtures for the scheme, diagnostics and acceptance tests.

#include <memory>
#include <random>

#include "spherefv/initial_data.hpp"
#include "spherefv/mesh.hpp"
#include "spherefv/scheme.hpp"

namespace spherefv::testing {

inline std::shared_ptr<const WebMesh> mesh_ptr(int n_bands, int n_lon, CoarseningRule rule = {}) {
  return std::make_shared<const WebMesh>(build_web_mesh(n_bands, n_lon, rule));
}

/// Independent uniform values in [lo, hi] per cell.
inline CellState random_state(const std::shared_ptr<const WebMesh>& mesh, std::mt19937& rng, double lo = -1,
                              double hi = 1) {
  std::uniform_real_distribution<double> d(lo, hi);
  CellState s{mesh, Eigen::VectorXd(mesh->num_cells()), 0.0};
  for (int k = 0; k < mesh->num_cells(); ++k) s.u[k] = d(rng);
  return s;
}

/// A few Gaussian bumps of random sign at random places.
inline CellState random_smooth_state(const std::shared_ptr<const WebMesh>& mesh, std::mt19937& rng) {
  std::uniform_real_distribution<double> lam(-3.14, 3.14), phi(-1.2, 1.2), amp(-1, 1), kap(2, 10);
  std::vector<InitialData> bumps;
  for (int i = 0; i < 3; ++i) bumps.push_back(gaussian_bump({lam(rng), phi(rng)}, kap(rng), amp(rng), 0));
  const InitialData sum{[bumps](const Vec3d& x) {
                          double v = 0;
                          for (const auto& b : bumps) v += b.value(x);
                          return v;
                        },
                        std::nullopt};
  return {mesh, cell_averages(*mesh, sum, 2), 0.0};
}

/// Every value lies in [lo - tol, hi + tol].
inline bool within_bounds(const Eigen::VectorXd& u, double lo, double hi, double tol) {
  return u.minCoeff() >= lo - tol && u.maxCoeff() <= hi + tol;
}

}  // namespace spherefv::testing
