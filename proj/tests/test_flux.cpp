#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "spherefv/exact_sum.hpp"
#include "spherefv/flux.hpp"
#include "spherefv/numerical_flux.hpp"
#include "spherefv/quadrature.hpp"

using namespace spherefv;
constexpr double pi = std::numbers::pi;

namespace {

ScalarProfile zero_profile() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }, {}};
}

ScalarProfile quarter_square() {  // w^2 / 4
  return {[](double w) { return w * w / 4; }, [](double w) { return w / 2; }, {}};
}

// F = x ^ grad h with grad h from central differences of h in R^3.
Vec3d fd_flux_vector(const FluxField& f, const Vec3d& x, double u) {
  const double h = 1e-6;
  Vec3d g;
  for (int i = 0; i < 3; ++i) {
    Vec3d xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f.potential(xp, u) - f.potential(xm, u)) / (2 * h);
  }
  return x.cross(g);
}

Edge make_edge(EdgeKind kind, SpherePointd start, SpherePointd end) {
  Edge e;
  e.kind = kind;
  e.start = start;
  e.end = end;
  e.length = kind == EdgeKind::meridional ? end.phi - start.phi
                                          : std::abs(end.lambda - start.lambda) * std::cos(start.phi);
  return e;
}

}  // namespace

TEST(Flux, PolarAxisComponents) {
  const FluxField f = FluxField::homogeneous(zero_profile(), zero_profile(), linear_profile());
  for (double lam : {-2.0, 0.0, 1.3}) {
    for (double phi : {-1.2, 0.0, 0.7}) {
      const FluxComponents c = flux_components(f, {lam, phi}, 2.0);
      EXPECT_NEAR(c.f_lambda, -2 * std::cos(phi), 1e-15);
      EXPECT_NEAR(c.f_phi, 0.0, 1e-15);
    }
  }
}

TEST(Flux, FirstAxisComponentsOnPrimeMeridian) {
  const FluxField f = FluxField::homogeneous(linear_profile(), zero_profile(), zero_profile());
  for (double phi : {-1.2, 0.0, 0.7}) {
    const FluxComponents c = flux_components(f, {0.0, phi}, 1.0);
    EXPECT_NEAR(c.f_lambda, std::sin(phi), 1e-15);
    EXPECT_NEAR(c.f_phi, 0.0, 1e-15);
  }
}

TEST(Flux, VectorMatchesFiniteDifferenceGradient) {
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3d axis(g(rng), g(rng), g(rng));
    for (const FluxField& f : {linear_flux(axis), burgers_flux(axis), trig_flux(axis)}) {
      const Vec3d x = Vec3d(g(rng), g(rng), g(rng)).normalized();
      const double u = g(rng);
      const Vec3d F = f.vector(x, u);
      EXPECT_LT((F - fd_flux_vector(f, x, u)).norm(), 1e-8);
      EXPECT_NEAR(F.dot(x), 0.0, 1e-14);  // tangent
    }
  }
}

TEST(Flux, AxisFluxIsNormalized) {
  const FluxField a = linear_flux(Vec3d(0, 0, 3));
  const FluxField b = linear_flux(Vec3d(0, 0, 1));
  const Vec3d x = sph_to_cart(SpherePointd{0.3, 0.2});
  EXPECT_DOUBLE_EQ(a.potential(x, 1.5), b.potential(x, 1.5));
}

TEST(Flux, MeridionalEdgeTotalFlux) {
  const FluxField f = FluxField::homogeneous(zero_profile(), zero_profile(), linear_profile());
  const Edge e = make_edge(EdgeKind::meridional, {0.4, 0.1}, {0.4, 0.9});
  const double exact = edge_total_flux_exact(f, e, 1.0);
  EXPECT_NEAR(std::abs(exact), std::sin(0.9) - std::sin(0.1), 1e-15);
  EXPECT_NEAR(exact, edge_total_flux_quadrature(f, e, 1.0), 1e-12);
}

TEST(Flux, ZonalEdgeOfPolarAxisFluxIsZero) {
  const FluxField f = linear_flux(Vec3d::UnitZ());
  const Edge e = make_edge(EdgeKind::zonal, {1.0, 0.6}, {0.2, 0.6});
  EXPECT_EQ(edge_total_flux_exact(f, e, 3.0), 0.0);
  EXPECT_NEAR(edge_total_flux_quadrature(f, e, 3.0), 0.0, 1e-15);
}

TEST(Flux, ExactAndQuadratureAgreeOnMeshEdges) {
  const WebMesh m = build_web_mesh(8, 16);
  const FluxField f = burgers_flux(Vec3d(1, -2, 0.5));
  for (const Edge& e : m.edges) {
    for (double u : {-1.0, 0.3, 2.0}) {
      EXPECT_NEAR(edge_total_flux_exact(f, e, u), edge_total_flux_quadrature(f, e, u, 12), 1e-12)
          << to_string(e.kind) << " edge " << e.id;
    }
  }
}

TEST(Flux, EdgeFluxFunctionIsEndpointDifference) {
  const FluxField f = FluxField::homogeneous(zero_profile(), zero_profile(), burgers_profile());
  const Edge e = make_edge(EdgeKind::meridional, {0.0, 0.0}, {0.0, pi / 6});
  const EdgeFluxFunction g = edge_flux_function(f, e);
  for (double u : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
    EXPECT_NEAR(std::abs(g.value(u)), u * u / 4, 1e-15);
    const auto t = g.terms(u);
    EXPECT_EQ(t[0] + t[1], g.value(u));
  }
  EXPECT_NEAR(std::abs(g.derivative(1.0)), 0.5, 1e-15);
}

TEST(Flux, BuiltInFluxesAreCompatible) {
  std::vector<double> samples;
  for (int i = 0; i < 16; ++i) samples.push_back(-2 + 4.0 * i / 15);
  const Vec3d tilted(1, 1, 1);
  for (const auto& [nb, nl] : std::vector<std::pair<int, int>>{{8, 16}, {32, 64}}) {
    const WebMesh m = build_web_mesh(nb, nl);
    for (const FluxField& f : {linear_flux(Vec3d::UnitZ()), burgers_flux(tilted), trig_flux(tilted)}) {
      EXPECT_LE(check_compatibility(f, m, samples).max_residual, 1e-12);
    }
  }
}

TEST(Flux, QuadraturePathIsCompatible) {
  const FluxField f = FluxField::homogeneous(zero_profile(), zero_profile(), linear_profile());
  const std::vector<double> samples{-1.0, 0.5, 2.0};
  const WebMesh m = build_web_mesh(8, 16);
  EXPECT_LE(check_compatibility(f, m, samples, EdgeIntegration::quadrature).max_residual, 1e-10);
}

TEST(Flux, NonSolenoidalFieldIsDetected) {
  const FluxField base = linear_flux(Vec3d::UnitZ());
  const FluxField f = FluxField::tangent_field([base](const Vec3d& x, double u) -> Vec3d {
    return base.vector(x, u) + 0.01 * (Vec3d::UnitZ() - x.z() * x);
  });
  const std::vector<double> samples{0.0, 1.0};
  const CompatibilityResult r = check_compatibility(f, build_web_mesh(8, 16), samples);
  EXPECT_GT(r.max_residual, 1e-3);
  EXPECT_GE(r.worst_cell, 0);
  // The divergence of e3 - x3 x is -2 x3, largest near the poles.
  EXPECT_NEAR(r.max_residual, 0.02, 0.005);
}

TEST(Flux, LipschitzBound) {
  const ScalarFunction affine{[](double w) { return -3 * w; }, [](double) { return -3.0; }};
  EXPECT_NEAR(lipschitz_bound(affine, -5, 5), 3.3, 1e-15);
  EXPECT_NEAR(lipschitz_bound(quarter_square(), -1, 1), 0.55, 1e-15);
  EXPECT_THROW(lipschitz_bound(affine, 1, 0), InvalidRange);
}

TEST(Flux, KruzkovEdgeFlux) {
  const auto g = quarter_square();
  auto godunov = [&](double a, double b) { return godunov_numflux(g, a, b); };
  for (double k : {-0.5, 0.0, 0.5}) {
    const auto Q = kruzkov_edge_flux(godunov, k);
    EXPECT_EQ(Q(k, k), 0.0);
    for (double u : {-2.0, -0.3, 0.1, 1.7}) {
      const double sgn = u > k ? 1.0 : (u < k ? -1.0 : 0.0);
      EXPECT_NEAR(Q(u, u), sgn * (g.value(u) - g.value(k)), 1e-15);
    }
  }
  // a = 1, b = -1, k = 0: q(1, 0) - q(0, -1) with max of g on [0,1] and on [-1,0].
  const auto Q0 = kruzkov_edge_flux(godunov, 0.0);
  EXPECT_NEAR(Q0(1.0, -1.0), 0.25 - 0.25, 1e-15);
  EXPECT_NEAR(Q0(1.0, -0.5), 0.25 - 1.0 / 16, 1e-15);
}

TEST(Flux, EntropyPairPotential) {
  const FluxField f = burgers_flux(Vec3d::UnitZ());
  const ScalarProfile energy{[](double u) { return u * u / 2; }, [](double u) { return u; }, {}};
  const EntropyPair pair(energy, f);
  // H(x, u) = int_0^u v * v x3 dv = u^3 x3 / 3
  for (double u : {-1.5, 0.2, 1.0}) {
    const Vec3d x = sph_to_cart(SpherePointd{0.3, 0.8});
    EXPECT_NEAR(pair.flux_potential(x, u), u * u * u * x.z() / 3, 1e-12);
    EXPECT_NEAR(pair.flux_potential_du(x, u), pair.entropy_derivative(u) * f.potential_du(x, u), 1e-15);
    const double h = 1e-5;
    EXPECT_NEAR((pair.flux_potential(x, u + h) - pair.flux_potential(x, u - h)) / (2 * h),
                pair.flux_potential_du(x, u), 1e-8);
  }
  EXPECT_THROW(EntropyPair(energy, FluxField::tangent_field([](const Vec3d&, double) { return Vec3d::Zero().eval(); })),
               std::invalid_argument);
}

TEST(Flux, ProfilesCriticalPoints) {
  const auto s = sine_profile();
  const auto c = s.critical_points(0.0, 7.0);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_NEAR(c[0], pi / 2, 1e-15);
  EXPECT_NEAR(c[1], 3 * pi / 2, 1e-15);
  EXPECT_TRUE(burgers_profile().critical_points(0.5, 2.0).empty());
  EXPECT_EQ(burgers_profile().critical_points(-1.0, 2.0), std::vector<double>{0.0});
  EXPECT_TRUE(linear_profile().critical_points(-1.0, 1.0).empty());
}

TEST(Quadrature, GaussLegendreIsExactForPolynomials) {
  for (int n = 1; n <= 12; ++n) {
    const GaussLegendre gl(n);
    double wsum = 0;
    for (double w : gl.weights()) wsum += w;
    EXPECT_NEAR(wsum, 2.0, 1e-14);
    const int deg = 2 * n - 1;
    EXPECT_NEAR(gl.integrate([&](double x) { return std::pow(x, deg) + std::pow(x, deg - 1); }, 0.0, 1.0),
                1.0 / (deg + 1) + 1.0 / deg, 1e-14)
        << n;
  }
  EXPECT_NEAR(GaussLegendre(10).integrate([](double x) { return std::cos(x); }, 0.0, 1.0), std::sin(1.0), 1e-15);
}

TEST(ExactSum, CancelsExactly) {
  EXPECT_EQ(exact_sum(std::vector<double>{1e100, 1.0, -1e100}), 1.0);
  // The three doubles add up to exactly 2^-55.
  EXPECT_EQ(exact_sum(std::vector<double>{0.1, 0.2, -0.3}), std::ldexp(1.0, -55));
  std::mt19937 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> v;
  for (int i = 0; i < 200; ++i) {
    const double x = g(rng) * std::pow(10.0, i % 7);
    v.push_back(x);
    v.push_back(-x);
  }
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(v.begin(), v.end(), rng);
    EXPECT_EQ(exact_sum(v), 0.0);
  }
}

TEST(ExactSum, OrderIndependentOnRandomData) {
  // Integers times a power of two are summed exactly in long arithmetic.
  std::mt19937 rng(2);
  std::uniform_int_distribution<long long> d(-(1LL << 40), 1LL << 40);
  std::vector<double> v;
  long long exact = 0;
  for (int i = 0; i < 1000; ++i) {
    const long long k = d(rng);
    exact += k;
    v.push_back(std::ldexp(static_cast<double>(k), -30));
  }
  const double expected = std::ldexp(static_cast<double>(exact), -30);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(v.begin(), v.end(), rng);
    EXPECT_EQ(exact_sum(v), expected);
  }
}
