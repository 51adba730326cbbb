#pragma once

// Coordinate representations of a light ray and the exact transforms between
// them: two-plane (x, y, u, v), ultrahyperbolic (xi1..xi4) and the pair of
// polar coordinates (theta1, theta2, R1, R2) in the (xi1, xi4) and (xi2, xi3)
// planes.

#include <cmath>
#include <concepts>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace lfjohn {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A ray in two-plane coordinates. (x, y) is the intersection with the first
/// plane, (u, v) the displacement tracked on the second plane.
struct RayTP {
  double x = 0.0;
  double y = 0.0;
  double u = 0.0;
  double v = 0.0;

  friend constexpr bool operator==(const RayTP&, const RayTP&) = default;
};

/// The same ray in the coordinates where John's equation becomes the
/// ultrahyperbolic equation.
struct XiPoint {
  double xi1 = 0.0;
  double xi2 = 0.0;
  double xi3 = 0.0;
  double xi4 = 0.0;

  friend constexpr bool operator==(const XiPoint&, const XiPoint&) = default;
};

/// Polar coordinates in the (xi1, xi4) plane (theta1, r1) and in the
/// (xi2, xi3) plane (theta2, r2). Angles live in [0, 2pi); an angle whose
/// radius is zero is canonically zero.
struct PolarPoint {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;

  friend constexpr bool operator==(const PolarPoint&, const PolarPoint&) = default;
};

inline bool is_finite(const RayTP& p) noexcept {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.u) && std::isfinite(p.v);
}

inline bool is_finite(const XiPoint& q) noexcept {
  return std::isfinite(q.xi1) && std::isfinite(q.xi2) && std::isfinite(q.xi3) &&
         std::isfinite(q.xi4);
}

constexpr XiPoint xi_from_ray(const RayTP& p) noexcept {
  return {0.5 * (p.u + p.y), 0.5 * (p.u - p.y), 0.5 * (p.v + p.x), 0.5 * (p.v - p.x)};
}

constexpr RayTP ray_from_xi(const XiPoint& q) noexcept {
  return {q.xi3 - q.xi4, q.xi1 - q.xi2, q.xi1 + q.xi2, q.xi3 + q.xi4};
}

/// Two-argument arctangent following the piecewise definition (result in
/// (-pi, pi]) and then shifted into [0, 2pi) by adding 2pi to negative
/// values. Throws std::domain_error at the origin, where it is undefined.
inline double arctan2_normalized(double yy, double xx) {
  double angle = 0.0;
  if (xx > 0.0) {
    angle = std::atan(yy / xx);
  } else if (xx < 0.0) {
    angle = yy >= 0.0 ? std::atan(yy / xx) + kPi : std::atan(yy / xx) - kPi;
  } else if (yy > 0.0) {
    angle = 0.5 * kPi;
  } else if (yy < 0.0) {
    angle = -0.5 * kPi;
  } else {
    throw std::domain_error("arctan2 is undefined at the origin");
  }
  if (angle < 0.0) {
    angle += kTwoPi;
    // a tiny negative angle rounds up to exactly 2pi
    if (angle >= kTwoPi) angle = 0.0;
  }
  return angle;
}

/// Maps an arbitrary angle into [0, 2pi).
inline double wrap_angle(double theta) noexcept {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

namespace detail {
// (radius, angle) of the planar point (c, s) with the canonical angle at 0.
inline void planar_polar(double c, double s, double& radius, double& angle) {
  radius = std::hypot(c, s);
  angle = radius == 0.0 ? 0.0 : arctan2_normalized(s, c);
}
}  // namespace detail

inline PolarPoint polar_from_xi(const XiPoint& q) {
  PolarPoint out;
  detail::planar_polar(q.xi1, q.xi4, out.r1, out.theta1);
  detail::planar_polar(q.xi2, q.xi3, out.r2, out.theta2);
  return out;
}

inline XiPoint xi_from_polar(const PolarPoint& p) noexcept {
  return {p.r1 * std::cos(p.theta1), p.r2 * std::cos(p.theta2), p.r2 * std::sin(p.theta2),
          p.r1 * std::sin(p.theta1)};
}

/// Inverse coordinate transformation (x, y, u, v) -> (theta1, theta2, R1, R2).
inline PolarPoint polar_from_ray(const RayTP& p) {
  PolarPoint out;
  const double c1 = p.u + p.y;
  const double s1 = p.v - p.x;
  const double c2 = p.u - p.y;
  const double s2 = p.v + p.x;
  out.r1 = 0.5 * std::hypot(c1, s1);
  out.r2 = 0.5 * std::hypot(c2, s2);
  out.theta1 = out.r1 == 0.0 ? 0.0 : arctan2_normalized(s1, c1);
  out.theta2 = out.r2 == 0.0 ? 0.0 : arctan2_normalized(s2, c2);
  return out;
}

/// Coordinate transformation (theta1, theta2, R1, R2) -> (x, y, u, v).
inline RayTP ray_from_polar(const PolarPoint& p) noexcept {
  const double c1 = p.r1 * std::cos(p.theta1);
  const double s1 = p.r1 * std::sin(p.theta1);
  const double c2 = p.r2 * std::cos(p.theta2);
  const double s2 = p.r2 * std::sin(p.theta2);
  return {s2 - s1, c1 - c2, c1 + c2, s2 + s1};
}

// Radiance fields are plain callables; a field over rays and a field over
// xi-space are distinguished by their argument type.
template <class F>
concept RayField = requires(const F& f, const RayTP& p) {
  { f(p) } -> std::convertible_to<double>;
};

template <class F>
concept XiField = requires(const F& f, const XiPoint& q) {
  { f(q) } -> std::convertible_to<double>;
};

/// r~(q) := r(ray_from_xi(q)). Holds a copy of the field.
template <RayField F>
auto in_xi(F field) {
  return [field = std::move(field)](const XiPoint& q) {
    return static_cast<double>(field(ray_from_xi(q)));
  };
}

}  // namespace lfjohn
