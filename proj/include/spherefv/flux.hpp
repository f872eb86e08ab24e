#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "spherefv/geometry.hpp"
#include "spherefv/mesh.hpp"

namespace spherefv {

// A scalar function of the unknown with its derivative. critical_points, when
// set, returns the zeros of derivative() strictly inside (lo, hi).
struct ScalarProfile {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::function<std::vector<double>(double, double)> critical_points;
};

ScalarProfile linear_profile();   // u
ScalarProfile burgers_profile();  // u^2 / 2
ScalarProfile sine_profile();     // sin u

// Flux field on the sphere. Gradient fields carry a potential h(x, u) and
// F(x, u) = n(x) ^ grad h(x, u); the total flux through an edge is then an
// endpoint difference of h. A plain tangent field has no potential and is
// integrated numerically.
class FluxField {
 public:
  using Potential = std::function<double(const Vec3d&, double)>;
  using PotentialGradient = std::function<Vec3d(const Vec3d&, double)>;
  using VectorField = std::function<Vec3d(const Vec3d&, double)>;

  // h(x, u) = profile(u) * (axis . x)
  struct AxisProfile {
    ScalarProfile profile;
    Vec3d axis;
  };

  static FluxField gradient(Potential h, Potential h_u, PotentialGradient grad_h);
  // h(x, u) = f1(u) x1 + f2(u) x2 + f3(u) x3
  static FluxField homogeneous(ScalarProfile f1, ScalarProfile f2, ScalarProfile f3);
  static FluxField along_axis(ScalarProfile profile, const Vec3d& axis);
  static FluxField tangent_field(VectorField field);

  bool has_potential() const { return static_cast<bool>(h_); }
  double potential(const Vec3d& x, double u) const { return h_(x, u); }
  double potential_du(const Vec3d& x, double u) const { return h_u_(x, u); }
  Vec3d potential_gradient(const Vec3d& x, double u) const { return grad_h_(x, u); }

  /// F(x, u), tangent to the sphere at x.
  Vec3d vector(const Vec3d& x, double u) const;

  const std::optional<AxisProfile>& axis_profile() const { return axis_; }

 private:
  Potential h_;
  Potential h_u_;
  PotentialGradient grad_h_;
  VectorField field_;
  std::optional<AxisProfile> axis_;
};

// Built-in fluxes. The axis is normalized.
FluxField linear_flux(const Vec3d& axis);
FluxField burgers_flux(const Vec3d& axis);
FluxField trig_flux(const Vec3d& axis = Vec3d::UnitZ());

struct FluxComponents {
  double f_lambda = 0;
  double f_phi = 0;
};

/// Components of F(x(p), u) in the basis (i_lambda, i_phi).
FluxComponents flux_components(const FluxField& flux, const SpherePointd& p, double u);

/// Total flux of F(., u) across e in the direction of the edge normal; exact
/// endpoint difference for gradient fields, Gauss-Legendre otherwise.
double edge_total_flux_exact(const FluxField& flux, const Edge& e, double u, int quadrature_order = 8);

/// Total flux by Gauss-Legendre quadrature of F . nu along the arc.
double edge_total_flux_quadrature(const FluxField& flux, const Edge& e, double u, int order = 8);

// Scalar total-flux function g_e(u) of one edge, for a gradient field.
// value(u) = h(start, u) - h(end, u). terms(u) returns those two summands
// separately so that sums around a closed loop cancel exactly.
class EdgeFluxFunction {
 public:
  EdgeFluxFunction(const FluxField& flux, const Vec3d& start, const Vec3d& end);

  double value(double u) const { return flux_->potential(start_, u) - flux_->potential(end_, u); }
  double derivative(double u) const {
    return flux_->potential_du(start_, u) - flux_->potential_du(end_, u);
  }
  std::array<double, 2> terms(double u) const {
    return {flux_->potential(start_, u), -flux_->potential(end_, u)};
  }

 private:
  const FluxField* flux_;
  Vec3d start_;
  Vec3d end_;
};

/// g_e for edge e. The flux must have a potential and outlive the result.
EdgeFluxFunction edge_flux_function(const FluxField& flux, const Edge& e);

enum class EdgeIntegration { automatic, quadrature };

struct CompatibilityResult {
  double max_residual = 0;
  int worst_cell = -1;
  double worst_u = 0;
};

/// max over cells K and samples u of |sum_{(e,s) in dK} s * flux_e(u)| / area(K).
CompatibilityResult check_compatibility(const FluxField& flux, const WebMesh& mesh,
                                        std::span<const double> u_samples,
                                        EdgeIntegration method = EdgeIntegration::automatic,
                                        int quadrature_order = 8);

/// 1.1 times the largest |g'(u)| over 64 samples of [u_min, u_max].
template <typename G>
double lipschitz_bound(const G& g, double u_min, double u_max) {
  if (u_min > u_max) throw InvalidRange("lipschitz_bound: u_min > u_max");
  constexpr int samples = 64;
  double m = 0;
  for (int i = 0; i < samples; ++i) {
    const double u = u_min + (u_max - u_min) * (static_cast<double>(i) / (samples - 1));
    m = std::max(m, std::abs(g.derivative(u)));
  }
  return 1.1 * m;
}

/// Crandall-Majda entropy flux for |u - k| built on a two-point flux q(a, b).
template <typename Q>
auto kruzkov_edge_flux(Q q, double k) {
  return [q = std::move(q), k](double a, double b) {
    return q(std::max(a, k), std::max(b, k)) - q(std::min(a, k), std::min(b, k));
  };
}

// Convex entropy U with flux potential H(x, u) = int_{u_ref}^{u} U'(v) dh/du(x, v) dv.
class EntropyPair {
 public:
  EntropyPair(ScalarProfile entropy, const FluxField& flux, double u_ref = 0);

  double entropy(double u) const { return entropy_.value(u); }
  double entropy_derivative(double u) const { return entropy_.derivative(u); }
  /// Adaptive Gauss-Kronrod quadrature, tolerance 1e-10.
  double flux_potential(const Vec3d& x, double u) const;
  /// Analytic derivative of flux_potential in u.
  double flux_potential_du(const Vec3d& x, double u) const;

 private:
  ScalarProfile entropy_;
  const FluxField* flux_;
  double u_ref_;
};

}  // namespace spherefv
