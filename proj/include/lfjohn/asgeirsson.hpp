#pragma once

// Circle and double-circle integrals of a field over xi-space, the two
// Asgeirsson identities built on them, and the discrete pixel-sum version
// on polar lightfields.
//
// All angular integrals use the uniform periodic trapezoid rule with a node
// at theta = 0 and no duplicated endpoint.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lfjohn/core.hpp"
#include "lfjohn/lightfield.hpp"

namespace lfjohn {

inline constexpr double kRelDiffFloor = 1e-300;

struct CircleSpec {
  XiPoint center;
  double radius = 0.0;
  int n_nodes = 64;

  void validate() const {
    if (!(radius >= 0.0) || !std::isfinite(radius))
      throw std::invalid_argument("circle radius must be finite and >= 0");
    if (n_nodes < 8) throw std::invalid_argument("circle quadrature needs at least 8 nodes");
  }
};

struct TheoremReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_diff = 0.0;
  double rel_diff = 0.0;
  XiPoint center;
  double radius_a = 0.0;  // R (theorem 1) or R1
  double radius_b = 0.0;  // R (theorem 1) or R2
  int n_nodes = 0;
};

inline double relative_difference(double a, double b) noexcept {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), kRelDiffFloor});
}

namespace detail {

inline TheoremReport make_report(double lhs, double rhs, const XiPoint& c, double ra, double rb,
                                 int n) {
  return {lhs, rhs, std::abs(lhs - rhs), relative_difference(lhs, rhs), c, ra, rb, n};
}

// Trapezoid over a circle of radius `radius` in the plane spanned by the
// members `cos_axis` and `sin_axis` of XiPoint.
template <XiField F>
double circle_integral(const F& r, const CircleSpec& c, double XiPoint::*cos_axis,
                       double XiPoint::*sin_axis) {
  c.validate();
  if (c.radius == 0.0) return kTwoPi * static_cast<double>(r(c.center));
  double sum = 0.0;
  for (int k = 0; k < c.n_nodes; ++k) {
    const double theta = kTwoPi * k / c.n_nodes;
    XiPoint q = c.center;
    q.*cos_axis += c.radius * std::cos(theta);
    q.*sin_axis += c.radius * std::sin(theta);
    sum += static_cast<double>(r(q));
  }
  return kTwoPi * sum / c.n_nodes;
}

}  // namespace detail

/// Integral over theta in [0, 2pi) of r(xi1 + R cos, xi2, xi3, xi4 + R sin).
template <XiField F>
double circle_integral_14(const F& r, const CircleSpec& c) {
  return detail::circle_integral(r, c, &XiPoint::xi1, &XiPoint::xi4);
}

/// Integral over theta in [0, 2pi) of r(xi1, xi2 + R cos, xi3 + R sin, xi4).
template <XiField F>
double circle_integral_23(const F& r, const CircleSpec& c) {
  return detail::circle_integral(r, c, &XiPoint::xi2, &XiPoint::xi3);
}

template <XiField F>
TheoremReport theorem1_check(const F& r, const XiPoint& center, double radius, int n) {
  const CircleSpec c{center, radius, n};
  return detail::make_report(circle_integral_14(r, c), circle_integral_23(r, c), center, radius,
                             radius, n);
}

/// Tensor-product trapezoid over (theta1, theta2) with radius_14 in the
/// (xi1, xi4) plane and radius_23 in the (xi2, xi3) plane.
template <XiField F>
double double_circle_integral(const F& r, const XiPoint& center, double radius_14,
                              double radius_23, int n) {
  if (n < 8) throw std::invalid_argument("double circle quadrature needs at least 8 nodes");
  if (!(radius_14 >= 0.0) || !(radius_23 >= 0.0) || !std::isfinite(radius_14) ||
      !std::isfinite(radius_23))
    throw std::invalid_argument("circle radii must be finite and >= 0");
  if (radius_14 == 0.0 && radius_23 == 0.0)
    return kTwoPi * kTwoPi * static_cast<double>(r(center));
  std::vector<double> c(n), s(n);
  for (int k = 0; k < n; ++k) {
    c[k] = std::cos(kTwoPi * k / n);
    s[k] = std::sin(kTwoPi * k / n);
  }
  double sum = 0.0;
  for (int k1 = 0; k1 < n; ++k1) {
    double row = 0.0;
    for (int k2 = 0; k2 < n; ++k2) {
      const XiPoint q{center.xi1 + radius_14 * c[k1], center.xi2 + radius_23 * c[k2],
                      center.xi3 + radius_23 * s[k2], center.xi4 + radius_14 * s[k1]};
      row += static_cast<double>(r(q));
    }
    sum += row;
  }
  const double w = kTwoPi / n;
  return w * w * sum;
}

template <XiField F>
TheoremReport theorem2_check(const F& r, const XiPoint& center, double r1, double r2, int n) {
  const double lhs = double_circle_integral(r, center, r1, r2, n);
  const double rhs = r1 == r2 ? lhs : double_circle_integral(r, center, r2, r1, n);
  return detail::make_report(lhs, rhs, center, r1, r2, n);
}

struct MicroimageSum {
  double sum = 0.0;
  std::size_t valid_count = 0;
  std::size_t total_count = 0;

  bool fully_valid() const noexcept { return valid_count == total_count; }
};

/// Sum of the (luminance of the) valid bins of block (r1, r2).
inline MicroimageSum discrete_microimage_sum(const PolarLightfield& pl, int r1, int r2) {
  const PolarBlock& b = pl.block(r1, r2);
  MicroimageSum out;
  out.total_count = b.bin_count();
  for (int k1 = 0; k1 < b.rows; ++k1) {
    for (int k2 = 0; k2 < b.cols; ++k2) {
      if (!b.valid(k1, k2)) continue;
      out.sum += luminance(b.pixel(k1, k2));
      ++out.valid_count;
    }
  }
  return out;
}

struct AsgeirssonRow {
  int r1 = 0;
  int r2 = 0;
  double sum_ab = 0.0;  // block (r1, r2)
  double sum_ba = 0.0;  // block (r2, r1)
  double abs_diff = 0.0;
  double rel_diff = 0.0;
  bool fully_valid = false;
};

/// One row per pair r1 < r2 for which both (r1, r2) and (r2, r1) exist.
inline std::vector<AsgeirssonRow> discrete_asgeirsson_report(const PolarLightfield& pl) {
  const int rmax = std::min(pl.r1max(), pl.r2max());
  std::vector<AsgeirssonRow> rows;
  for (int r1 = 0; r1 <= rmax; ++r1) {
    for (int r2 = r1 + 1; r2 <= rmax; ++r2) {
      const MicroimageSum ab = discrete_microimage_sum(pl, r1, r2);
      const MicroimageSum ba = discrete_microimage_sum(pl, r2, r1);
      rows.push_back({r1, r2, ab.sum, ba.sum, std::abs(ab.sum - ba.sum),
                      relative_difference(ab.sum, ba.sum), ab.fully_valid() && ba.fully_valid()});
    }
  }
  return rows;
}

/// Largest rel_diff over the rows that take part in the check; partially
/// valid rows are skipped unless include_partial is set. Zero when no row
/// qualifies.
inline double worst_rel_diff(const std::vector<AsgeirssonRow>& rows, bool include_partial = false) {
  double worst = 0.0;
  for (const auto& row : rows)
    if (row.fully_valid || include_partial) worst = std::max(worst, row.rel_diff);
  return worst;
}

}  // namespace lfjohn
