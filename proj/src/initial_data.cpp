#include "spherefv/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spherefv/quadrature.hpp"

namespace spherefv {

InitialData constant_data(double c) {
  return {[c](const Vec3d&) { return c; }, c};
}

InitialData gaussian_bump(const SpherePointd& center, double kappa, double amplitude, double background) {
  const Vec3d c = sph_to_cart(center);
  return {[=](const Vec3d& x) {
            const double d = great_circle_distance(c, x);
            return background + amplitude * std::exp(-kappa * d * d);
          },
          std::nullopt};
}

InitialData band_step(double lat_min, double lat_max, double inside, double outside) {
  return {[=](const Vec3d& x) {
            const double phi = std::asin(std::clamp(x(2), -1.0, 1.0));
            return (phi >= lat_min && phi <= lat_max) ? inside : outside;
          },
          std::nullopt};
}

InitialData two_bumps(const SpherePointd& c1, const SpherePointd& c2, double kappa, double amplitude,
                      double background) {
  const Vec3d a = sph_to_cart(c1), b = sph_to_cart(c2);
  return {[=](const Vec3d& x) {
            const double da = great_circle_distance(a, x), db = great_circle_distance(b, x);
            return background + amplitude * (std::exp(-kappa * da * da) + std::exp(-kappa * db * db));
          },
          std::nullopt};
}

InitialData rotated(const InitialData& data, const Vec3d& axis, double angle) {
  if (data.constant) return data;
  const Vec3d unit = axis.normalized();
  return {[f = data.value, unit, angle](const Vec3d& x) { return f(rotate_about(x, unit, -angle)); },
          std::nullopt};
}

Eigen::VectorXd cell_averages(const WebMesh& mesh, const InitialData& data, int order) {
  Eigen::VectorXd u(mesh.num_cells());
  if (data.constant) {
    u.setConstant(*data.constant);
    return u;
  }
  const GaussLegendre rule(order);
  const GaussLegendre cap_rule(4 * order);
  for (const Cell& c : mesh.cells) {
    const GaussLegendre& lon_rule = c.cap ? cap_rule : rule;
    const double mu_s = std::sin(c.phi_s), mu_n = std::sin(c.phi_n);
    // Area element is dlambda dmu with mu = sin(phi).
    const double integral = lon_rule.integrate(
        [&](double lambda) {
          return rule.integrate(
              [&](double mu) {
                const double r = std::sqrt(std::max(0.0, 1 - mu * mu));
                return data.value(Vec3d(r * std::cos(lambda), r * std::sin(lambda), mu));
              },
              mu_s, mu_n);
        },
        c.lambda_w, c.lambda_e);
    u[c.id] = integral / ((c.lambda_e - c.lambda_w) * (mu_n - mu_s));
  }
  return u;
}

}  // namespace spherefv
