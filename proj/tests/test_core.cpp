#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "lfjohn/core.hpp"

namespace lfjohn {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void expect_ray_near(const RayTP& a, const RayTP& b, double tol) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
  EXPECT_NEAR(a.u, b.u, tol);
  EXPECT_NEAR(a.v, b.v, tol);
}

TEST(XiTransform, HandComputedExamples) {
  EXPECT_EQ(xi_from_ray({0, 0, 0, 0}), (XiPoint{0, 0, 0, 0}));
  EXPECT_EQ(xi_from_ray({0, 0, 2, 0}), (XiPoint{1, 1, 0, 0}));
  EXPECT_EQ(xi_from_ray({1, 1, 1, 1}), (XiPoint{1, 0, 1, 0}));
  EXPECT_EQ(ray_from_xi({1, 1, 0, 0}), (RayTP{0, 0, 2, 0}));
  EXPECT_EQ(ray_from_xi({0, 0, 0, 0}), (RayTP{0, 0, 0, 0}));
}

TEST(XiTransform, IsConstexpr) {
  static_assert(xi_from_ray(RayTP{0, 0, 2, 0}) == XiPoint{1, 1, 0, 0});
  static_assert(ray_from_xi(XiPoint{1, 0, 1, 0}) == RayTP{1, 1, 1, 1});
}

TEST(XiTransform, RoundTripRandom) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-100.0, 100.0);
  for (int i = 0; i < 20000; ++i) {
    const RayTP p{d(rng), d(rng), d(rng), d(rng)};
    expect_ray_near(ray_from_xi(xi_from_ray(p)), p, 4 * kEps * 100.0);
  }
}

TEST(XiTransform, ExactOnDyadicGrid) {
  for (double x : {-2.0, -0.5, 0.0, 0.25, 3.0})
    for (double y : {-1.0, 0.0, 0.75})
      for (double u : {-4.0, 0.5, 2.0})
        for (double v : {-0.125, 1.0}) {
          const RayTP p{x, y, u, v};
          EXPECT_EQ(ray_from_xi(xi_from_ray(p)), p);
        }
}

TEST(Arctan2, BranchTable) {
  // x > 0
  EXPECT_DOUBLE_EQ(arctan2_normalized(1.0, 1.0), kPi / 4);
  EXPECT_DOUBLE_EQ(arctan2_normalized(-1.0, 1.0), 2 * kPi - kPi / 4);
  // x < 0, y >= 0
  EXPECT_DOUBLE_EQ(arctan2_normalized(0.0, -1.0), kPi);
  EXPECT_DOUBLE_EQ(arctan2_normalized(1.0, -1.0), 3 * kPi / 4);
  // x < 0, y < 0: -3pi/4 -> 5pi/4
  EXPECT_DOUBLE_EQ(arctan2_normalized(-1.0, -1.0), 5 * kPi / 4);
  // x = 0
  EXPECT_DOUBLE_EQ(arctan2_normalized(1.0, 0.0), kPi / 2);
  EXPECT_DOUBLE_EQ(arctan2_normalized(-1.0, 0.0), 3 * kPi / 2);
  EXPECT_THROW(arctan2_normalized(0.0, 0.0), std::domain_error);
}

TEST(Arctan2, AgreesWithStdAtan2ModTwoPi) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  for (int i = 0; i < 10000; ++i) {
    const double y = d(rng);
    const double x = d(rng);
    const double a = arctan2_normalized(y, x);
    ASSERT_GE(a, 0.0);
    ASSERT_LT(a, kTwoPi);
    double ref = std::atan2(y, x);
    if (ref < 0) ref += kTwoPi;
    EXPECT_NEAR(a, ref, 1e-13);
  }
}

TEST(Arctan2, TinyNegativeAngleStaysBelowTwoPi) {
  const double a = arctan2_normalized(-1e-300, 1.0);
  EXPECT_GE(a, 0.0);
  EXPECT_LT(a, kTwoPi);
}

TEST(PolarTransform, HandComputedExamples) {
  const PolarPoint a = polar_from_ray({0, 0, 2, 0});
  EXPECT_DOUBLE_EQ(a.theta1, 0.0);
  EXPECT_DOUBLE_EQ(a.theta2, 0.0);
  EXPECT_DOUBLE_EQ(a.r1, 1.0);
  EXPECT_DOUBLE_EQ(a.r2, 1.0);

  const PolarPoint b = polar_from_ray({1, 1, 1, 1});
  EXPECT_DOUBLE_EQ(b.theta1, 0.0);
  EXPECT_DOUBLE_EQ(b.theta2, kPi / 2);
  EXPECT_DOUBLE_EQ(b.r1, 1.0);
  EXPECT_DOUBLE_EQ(b.r2, 1.0);

  EXPECT_EQ(polar_from_ray({0, 0, 0, 0}), (PolarPoint{0, 0, 0, 0}));
}

TEST(PolarTransform, ForwardExamples) {
  expect_ray_near(ray_from_polar({0, kPi / 2, 1, 1}), {1, 1, 1, 1}, 1e-15);
  EXPECT_EQ(ray_from_polar({0, 0, 0, 0}), (RayTP{0, 0, 0, 0}));
  for (double t : {0.0, 0.3, 1.7, 4.0, 6.0}) {
    const RayTP p = ray_from_polar({t, 1.234, 1, 0});
    expect_ray_near(p, {-std::sin(t), std::cos(t), std::cos(t), std::sin(t)}, 1e-15);
  }
}

TEST(PolarTransform, ZeroRadiusCanonicalAngle) {
  // R1 = 0 when u + y = 0 and v - x = 0
  const PolarPoint p = polar_from_ray({1.5, -2.0, 2.0, 1.5});
  EXPECT_EQ(p.r1, 0.0);
  EXPECT_EQ(p.theta1, 0.0);
  EXPECT_GT(p.r2, 0.0);
}

TEST(PolarTransform, RoundTripRandom) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-1000.0, 1000.0);
  for (int i = 0; i < 20000; ++i) {
    const RayTP p{d(rng), d(rng), d(rng), d(rng)};
    const PolarPoint q = polar_from_ray(p);
    ASSERT_GE(q.r1, 0.0);
    ASSERT_GE(q.r2, 0.0);
    ASSERT_GE(q.theta1, 0.0);
    ASSERT_LT(q.theta1, kTwoPi);
    ASSERT_GE(q.theta2, 0.0);
    ASSERT_LT(q.theta2, kTwoPi);
    expect_ray_near(ray_from_polar(q), p, 1e-9);
  }
}

TEST(PolarTransform, ConsistentWithXiPolar) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  for (int i = 0; i < 10000; ++i) {
    const RayTP p{d(rng), d(rng), d(rng), d(rng)};
    const PolarPoint a = polar_from_ray(p);
    const XiPoint q = xi_from_ray(p);
    // xi1 = R1 cos t1, xi4 = R1 sin t1, xi2 = R2 cos t2, xi3 = R2 sin t2
    EXPECT_NEAR(a.r1 * std::cos(a.theta1), q.xi1, 1e-12);
    EXPECT_NEAR(a.r1 * std::sin(a.theta1), q.xi4, 1e-12);
    EXPECT_NEAR(a.r2 * std::cos(a.theta2), q.xi2, 1e-12);
    EXPECT_NEAR(a.r2 * std::sin(a.theta2), q.xi3, 1e-12);
    const PolarPoint b = polar_from_xi(q);
    EXPECT_NEAR(a.r1, b.r1, 1e-12);
    EXPECT_NEAR(a.r2, b.r2, 1e-12);
    EXPECT_NEAR(a.theta1, b.theta1, 1e-12);
    EXPECT_NEAR(a.theta2, b.theta2, 1e-12);
  }
}

TEST(WrapAngle, MapsIntoRange) {
  EXPECT_DOUBLE_EQ(wrap_angle(-kPi / 2), 3 * kPi / 2);
  EXPECT_DOUBLE_EQ(wrap_angle(5 * kPi), kPi);
  EXPECT_EQ(wrap_angle(0.0), 0.0);
  EXPECT_LT(wrap_angle(-1e-300), kTwoPi);
}

TEST(FieldAdapters, InXiComposesWithRayFromXi) {
  auto field = [](const RayTP& p) { return p.x * 10 + p.y; };
  const auto rt = in_xi(field);
  const XiPoint q{1, 2, 3, 4};
  const RayTP p = ray_from_xi(q);
  EXPECT_EQ(rt(q), field(p));
}

}  // namespace
}  // namespace lfjohn
