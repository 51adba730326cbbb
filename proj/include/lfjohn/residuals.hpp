#pragma once

// Second-order central-difference residuals of John's equation
//   (d_y d_u - d_x d_v) r = 0
// and of its ultrahyperbolic form
//   (d_11 - d_22 - d_33 + d_44) r~ = 0.
// Under the xi reparametrization the second operator equals four times the
// first.

#include <cmath>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "lfjohn/core.hpp"
#include "lfjohn/parallel.hpp"

namespace lfjohn {

class StencilSpec {
 public:
  explicit StencilSpec(double h = 0.05) : h_(h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("stencil step must be > 0");
  }
  double h() const noexcept { return h_; }

 private:
  double h_;
};

enum class ResidualOperator { john, ultrahyperbolic };

inline std::string_view to_string(ResidualOperator op) noexcept {
  return op == ResidualOperator::john ? "john" : "ultrahyperbolic";
}

struct ResidualReport {
  ResidualOperator which = ResidualOperator::john;
  double h = 0.0;
  std::size_t sample_count = 0;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  double rms = 0.0;
};

/// Four-corner cross differences for d_y d_u and d_x d_v, divided by 4 h^2.
template <RayField F>
double john_residual(const F& r, const RayTP& p, StencilSpec st) {
  const double h = st.h();
  auto at = [&](double dx, double dy, double du, double dv) {
    return static_cast<double>(r(RayTP{p.x + dx, p.y + dy, p.u + du, p.v + dv}));
  };
  const double yu = at(0, h, h, 0) - at(0, h, -h, 0) - at(0, -h, h, 0) + at(0, -h, -h, 0);
  const double xv = at(h, 0, 0, h) - at(h, 0, 0, -h) - at(-h, 0, 0, h) + at(-h, 0, 0, -h);
  return (yu - xv) / (4.0 * h * h);
}

template <XiField F>
double ultrahyperbolic_residual(const F& rt, const XiPoint& q, StencilSpec st) {
  const double h = st.h();
  const double centre2 = 2.0 * static_cast<double>(rt(q));
  auto second = [&](XiPoint plus, XiPoint minus) {
    return (static_cast<double>(rt(plus)) - centre2 + static_cast<double>(rt(minus))) / (h * h);
  };
  XiPoint p1 = q, m1 = q, p2 = q, m2 = q, p3 = q, m3 = q, p4 = q, m4 = q;
  p1.xi1 += h;
  m1.xi1 -= h;
  p2.xi2 += h;
  m2.xi2 -= h;
  p3.xi3 += h;
  m3.xi3 -= h;
  p4.xi4 += h;
  m4.xi4 -= h;
  return second(p1, m1) - second(p2, m2) - second(p3, m3) + second(p4, m4);
}

/// Aggregates |residual| over the sample rays. For the ultrahyperbolic
/// operator each ray is mapped to xi-space and the field is composed with
/// ray_from_xi.
template <RayField F>
ResidualReport residual_sweep(const F& r, std::span<const RayTP> points, StencilSpec st,
                              ResidualOperator which, unsigned threads = 1) {
  if (points.empty()) throw std::invalid_argument("residual sweep needs at least one point");
  std::vector<double> abs_res(points.size());
  const auto rt = in_xi(r);
  parallel_for(points.size(), threads, [&](std::size_t i) {
    abs_res[i] = std::abs(which == ResidualOperator::john
                              ? john_residual(r, points[i], st)
                              : ultrahyperbolic_residual(rt, xi_from_ray(points[i]), st));
  });
  ResidualReport rep;
  rep.which = which;
  rep.h = st.h();
  rep.sample_count = points.size();
  double sum = 0.0;
  double sum2 = 0.0;
  for (double a : abs_res) {
    rep.max_abs = std::max(rep.max_abs, a);
    sum += a;
    sum2 += a * a;
  }
  rep.mean_abs = sum / static_cast<double>(points.size());
  rep.rms = std::sqrt(sum2 / static_cast<double>(points.size()));
  return rep;
}

}  // namespace lfjohn
