#pragma once

#include <cmath>
#include <numbers>
#include <utility>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "spherefv/errors.hpp"

// Exact geometry of the unit sphere in geographic coordinates.
//
// Longitude lambda is measured eastward from the x1 axis, latitude phi
// northward from the equator. The embedding is
//
//   x(lambda, phi) = (cos phi cos lambda, cos phi sin lambda, sin phi)
//
// and (i_lambda, i_phi, n) is a right-handed orthonormal frame away from the
// poles. All angles are radians.

namespace spherefv {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

using Vec3d = Vec3<double>;

template <typename Scalar>
struct SpherePoint {
  Scalar lambda{0};
  Scalar phi{0};
};

using SpherePointd = SpherePoint<double>;

enum class ArcKind { latitude, meridian };

/// Maps lambda into [-pi, pi).
template <typename Scalar>
Scalar normalize_longitude(Scalar lambda) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar wrapped = std::fmod(lambda + pi, 2 * pi);
  if (wrapped < 0) wrapped += 2 * pi;
  Scalar out = wrapped - pi;
  // fmod can round up to exactly +pi
  if (out >= pi) out -= 2 * pi;
  return out;
}

template <typename Scalar>
SpherePoint<Scalar> normalized(SpherePoint<Scalar> p) {
  return {normalize_longitude(p.lambda), p.phi};
}

template <typename Scalar>
Vec3<Scalar> sph_to_cart(const SpherePoint<Scalar>& p) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(p.phi);
  return {c * cos(p.lambda), c * sin(p.lambda), sin(p.phi)};
}

/// Inverse of sph_to_cart for a nonzero vector (normalized first). At the
/// poles the longitude is reported as 0.
template <typename Scalar>
SpherePoint<Scalar> cart_to_sph(const Vec3<Scalar>& x) {
  using std::atan2;
  using std::hypot;
  const Scalar rho = hypot(x(0), x(1));
  const Scalar phi = atan2(x(2), rho);
  const Scalar lambda = rho == Scalar(0) ? Scalar(0) : atan2(x(1), x(0));
  return {normalize_longitude(lambda), phi};
}

template <typename Scalar>
struct TangentBasis {
  Vec3<Scalar> i_lambda;
  Vec3<Scalar> i_phi;
};

/// Coordinate basis of the tangent plane. Undefined at the poles.
template <typename Scalar>
TangentBasis<Scalar> tangent_basis(const SpherePoint<Scalar>& p) {
  using std::abs;
  using std::cos;
  using std::sin;
  if (abs(p.phi) >= std::numbers::pi_v<Scalar> / 2) {
    throw PoleSingularity("tangent basis requested at a pole");
  }
  const Scalar sl = sin(p.lambda), cl = cos(p.lambda);
  const Scalar sp = sin(p.phi), cp = cos(p.phi);
  return {Vec3<Scalar>(-sl, cl, Scalar(0)), Vec3<Scalar>(-sp * cl, -sp * sl, cp)};
}

/// Area of {lambda1 <= lambda <= lambda2, phi1 <= phi <= phi2}.
template <typename Scalar>
Scalar zonal_patch_area(Scalar lambda1, Scalar lambda2, Scalar phi1, Scalar phi2) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  if (!(lambda1 < lambda2) || lambda2 > lambda1 + 2 * pi) {
    throw InvalidRange("zonal_patch_area: need lambda1 < lambda2 <= lambda1 + 2 pi");
  }
  if (!(phi1 < phi2) || phi1 < -pi / 2 || phi2 > pi / 2) {
    throw InvalidRange("zonal_patch_area: need -pi/2 <= phi1 < phi2 <= pi/2");
  }
  using std::sin;
  return (lambda2 - lambda1) * (sin(phi2) - sin(phi1));
}

/// Length of a latitude arc (fixed phi, lambda in [a, b]) or a meridian arc
/// (fixed lambda, phi in [a, b]).
template <typename Scalar>
Scalar arc_length(ArcKind kind, Scalar fixed_coord, Scalar a, Scalar b) {
  if (!(a < b)) throw InvalidRange("arc_length: need a < b");
  using std::cos;
  return kind == ArcKind::latitude ? (b - a) * cos(fixed_coord) : (b - a);
}

/// Great-circle distance between two unit vectors.
template <typename Scalar>
Scalar great_circle_distance(const Vec3<Scalar>& a, const Vec3<Scalar>& b) {
  using std::atan2;
  return atan2(a.cross(b).norm(), a.dot(b));
}

/// Rotates x about the unit axis by angle (right-hand rule).
template <typename Scalar>
Vec3<Scalar> rotate_about(const Vec3<Scalar>& x, const Vec3<Scalar>& axis, Scalar angle) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(angle), s = sin(angle);
  return x * c + axis.cross(x) * s + axis * (axis.dot(x) * (1 - c));
}

/// Latitude centroid of a zonal band with respect to the area element,
/// i.e. the integral of phi cos(phi) over the integral of cos(phi).
template <typename Scalar>
Scalar band_centroid_latitude(Scalar phi_s, Scalar phi_n) {
  using std::cos;
  using std::sin;
  const Scalar num = (phi_n * sin(phi_n) + cos(phi_n)) - (phi_s * sin(phi_s) + cos(phi_s));
  return num / (sin(phi_n) - sin(phi_s));
}

}  // namespace spherefv
