#include "spherefv/flux.hpp"

#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "spherefv/quadrature.hpp"

namespace spherefv {

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

ScalarProfile linear_profile() {
  return {[](double u) { return u; }, [](double) { return 1.0; },
          [](double, double) { return std::vector<double>{}; }};
}

ScalarProfile burgers_profile() {
  return {[](double u) { return 0.5 * u * u; }, [](double u) { return u; },
          [](double lo, double hi) {
            return lo < 0 && 0 < hi ? std::vector<double>{0.0} : std::vector<double>{};
          }};
}

ScalarProfile sine_profile() {
  return {[](double u) { return std::sin(u); }, [](double u) { return std::cos(u); },
          [](double lo, double hi) {
            std::vector<double> out;
            for (double k = std::ceil((lo - pi / 2) / pi); ; k += 1) {
              const double c = pi / 2 + k * pi;
              if (c >= hi) break;
              if (c > lo) out.push_back(c);
            }
            return out;
          }};
}

FluxField FluxField::gradient(Potential h, Potential h_u, PotentialGradient grad_h) {
  FluxField f;
  f.h_ = std::move(h);
  f.h_u_ = std::move(h_u);
  f.grad_h_ = std::move(grad_h);
  return f;
}

FluxField FluxField::homogeneous(ScalarProfile f1, ScalarProfile f2, ScalarProfile f3) {
  auto h = [f1, f2, f3](const Vec3d& x, double u) {
    return f1.value(u) * x(0) + f2.value(u) * x(1) + f3.value(u) * x(2);
  };
  auto h_u = [f1, f2, f3](const Vec3d& x, double u) {
    return f1.derivative(u) * x(0) + f2.derivative(u) * x(1) + f3.derivative(u) * x(2);
  };
  auto grad = [f1, f2, f3](const Vec3d&, double u) {
    return Vec3d(f1.value(u), f2.value(u), f3.value(u));
  };
  return gradient(h, h_u, grad);
}

FluxField FluxField::along_axis(ScalarProfile profile, const Vec3d& axis) {
  auto h = [p = profile.value, axis](const Vec3d& x, double u) { return p(u) * axis.dot(x); };
  auto h_u = [d = profile.derivative, axis](const Vec3d& x, double u) { return d(u) * axis.dot(x); };
  auto grad = [p = profile.value, axis](const Vec3d&, double u) -> Vec3d { return p(u) * axis; };
  FluxField f = gradient(h, h_u, grad);
  f.axis_ = AxisProfile{std::move(profile), axis};
  return f;
}

FluxField FluxField::tangent_field(VectorField field) {
  FluxField f;
  f.field_ = std::move(field);
  return f;
}

Vec3d FluxField::vector(const Vec3d& x, double u) const {
  if (field_) return field_(x, u);
  return x.cross(grad_h_(x, u));
}

namespace {

Vec3d normalized_axis(const Vec3d& axis) {
  const double n = axis.norm();
  if (!(n > 0) || !std::isfinite(n)) throw InvalidRange("flux axis must be a nonzero finite vector");
  return axis / n;
}

}  // namespace

FluxField linear_flux(const Vec3d& axis) {
  return FluxField::along_axis(linear_profile(), normalized_axis(axis));
}

FluxField burgers_flux(const Vec3d& axis) {
  return FluxField::along_axis(burgers_profile(), normalized_axis(axis));
}

FluxField trig_flux(const Vec3d& axis) {
  return FluxField::along_axis(sine_profile(), normalized_axis(axis));
}

FluxComponents flux_components(const FluxField& flux, const SpherePointd& p, double u) {
  const TangentBasis<double> basis = tangent_basis(p);
  const Vec3d F = flux.vector(sph_to_cart(p), u);
  return {F.dot(basis.i_lambda), F.dot(basis.i_phi)};
}

double edge_total_flux_quadrature(const FluxField& flux, const Edge& e, double u, int order) {
  const GaussLegendre rule(order);
  if (e.kind == EdgeKind::meridional) {
    const double lambda = e.start.lambda;
    // nu = i_lambda, ds = dphi
    return rule.integrate(
        [&](double phi) {
          const SpherePointd p{lambda, phi};
          return flux.vector(sph_to_cart(p), u).dot(tangent_basis(p).i_lambda);
        },
        e.start.phi, e.end.phi);
  }
  // Zonal edges run east to west; integrate west to east with nu = i_phi and
  // ds = cos(phi) dlambda.
  const double phi = e.start.phi;
  const double west = e.end.lambda;
  double east = e.start.lambda;
  if (east <= west) east += 2 * pi;
  return rule.integrate(
      [&](double lambda) {
        const SpherePointd p{lambda, phi};
        return flux.vector(sph_to_cart(p), u).dot(tangent_basis(p).i_phi) * std::cos(phi);
      },
      west, east);
}

double edge_total_flux_exact(const FluxField& flux, const Edge& e, double u, int quadrature_order) {
  if (!flux.has_potential()) return edge_total_flux_quadrature(flux, e, u, quadrature_order);
  return flux.potential(sph_to_cart(e.start), u) - flux.potential(sph_to_cart(e.end), u);
}

EdgeFluxFunction::EdgeFluxFunction(const FluxField& flux, const Vec3d& start, const Vec3d& end)
    : flux_(&flux), start_(start), end_(end) {
  if (!flux.has_potential()) {
    throw std::invalid_argument("edge flux functions need a flux with a potential");
  }
}

EdgeFluxFunction edge_flux_function(const FluxField& flux, const Edge& e) {
  return EdgeFluxFunction(flux, sph_to_cart(e.start), sph_to_cart(e.end));
}

CompatibilityResult check_compatibility(const FluxField& flux, const WebMesh& mesh,
                                        std::span<const double> u_samples, EdgeIntegration method,
                                        int quadrature_order) {
  const bool exact = method == EdgeIntegration::automatic && flux.has_potential();
  CompatibilityResult result;
  std::vector<double> edge_flux(mesh.edges.size());
  for (double u : u_samples) {
    for (const Edge& e : mesh.edges) {
      edge_flux[e.id] = exact ? edge_total_flux_exact(flux, e, u)
                              : edge_total_flux_quadrature(flux, e, u, quadrature_order);
    }
    for (const Cell& c : mesh.cells) {
      double sum = 0;
      for (const SignedEdge& se : mesh.boundary(c.id)) sum += se.sign * edge_flux[se.edge];
      const double residual = std::abs(sum) / c.area;
      if (result.worst_cell < 0 || residual > result.max_residual) {
        result.max_residual = residual;
        result.worst_cell = c.id;
        result.worst_u = u;
      }
    }
  }
  return result;
}

EntropyPair::EntropyPair(ScalarProfile entropy, const FluxField& flux, double u_ref)
    : entropy_(std::move(entropy)), flux_(&flux), u_ref_(u_ref) {
  if (!flux.has_potential()) {
    throw std::invalid_argument("entropy pairs need a flux with a potential");
  }
}

double EntropyPair::flux_potential(const Vec3d& x, double u) const {
  if (u == u_ref_) return 0;
  auto integrand = [&](double v) { return entropy_.derivative(v) * flux_->potential_du(x, v); };
  double error = 0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      integrand, u_ref_, u, 15, 1e-12, &error);
  return value;
}

double EntropyPair::flux_potential_du(const Vec3d& x, double u) const {
  return entropy_.derivative(u) * flux_->potential_du(x, u);
}

}  // namespace spherefv
