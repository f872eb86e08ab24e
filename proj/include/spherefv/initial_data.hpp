#pragma once

#include <functional>
#include <optional>

#include <Eigen/Core>

#include "spherefv/geometry.hpp"
#include "spherefv/mesh.hpp"

namespace spherefv {

// Initial data as a function of the point x on the sphere.
struct InitialData {
  std::function<double(const Vec3d&)> value;
  std::optional<double> constant;  // set for constant data; averages are then exact
};

InitialData constant_data(double c);
/// background + amplitude exp(-kappa d^2), d the great-circle distance to center.
InitialData gaussian_bump(const SpherePointd& center, double kappa, double amplitude, double background);
/// inside for lat_min <= phi <= lat_max, outside elsewhere.
InitialData band_step(double lat_min, double lat_max, double inside, double outside);
InitialData two_bumps(const SpherePointd& c1, const SpherePointd& c2, double kappa, double amplitude,
                      double background);

/// Data transported by solid-body rotation about the unit axis through angle:
/// u(x) = data(R(-angle) x).
InitialData rotated(const InitialData& data, const Vec3d& axis, double angle);

/// Cell averages by tensor Gauss-Legendre quadrature in (lambda, sin phi).
Eigen::VectorXd cell_averages(const WebMesh& mesh, const InitialData& data, int order = 4);

}  // namespace spherefv
