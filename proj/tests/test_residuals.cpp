#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lfjohn/residuals.hpp"
#include "lfjohn/synth.hpp"

namespace lfjohn {
namespace {

std::vector<RayTP> random_points(int n, double box, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-box, box);
  std::vector<RayTP> pts(n);
  for (auto& p : pts) p = {d(rng), d(rng), d(rng), d(rng)};
  return pts;
}

TEST(StencilSpec, RejectsNonPositiveStep) {
  EXPECT_THROW(StencilSpec(0.0), std::invalid_argument);
  EXPECT_THROW(StencilSpec(-0.1), std::invalid_argument);
  EXPECT_NO_THROW(StencilSpec(0.05));
}

TEST(JohnResidual, BilinearCounterExample) {
  auto xv = [](const RayTP& p) { return p.x * p.v; };
  for (double h : {0.5, 0.25, 0.125})
    EXPECT_EQ(john_residual(xv, {1, 2, -3, 0.5}, StencilSpec(h)), -1.0);
  for (const auto& p : random_points(200, 2.0, 1))
    EXPECT_NEAR(john_residual(xv, p, StencilSpec(0.05)), -1.0, 1e-10);
}

TEST(JohnResidual, ConstantFieldIsZero) {
  auto c = [](const RayTP&) { return 3.5; };
  EXPECT_EQ(john_residual(c, {0.1, 0.2, 0.3, 0.4}, StencilSpec(0.05)), 0.0);
}

TEST(JohnResidual, ExactOnQuadratics) {
  // (dy du - dx dv)(a yu + b xv + c x^2 + d u^2 + e xy) = a - b
  auto q = [](const RayTP& p) { return 2 * p.y * p.u + 0.5 * p.x * p.v + p.x * p.x + 3 * p.u * p.u + p.x * p.y; };
  for (const auto& p : random_points(50, 2.0, 2)) EXPECT_NEAR(john_residual(q, p, StencilSpec(0.25)), 1.5, 1e-12);
}

TEST(JohnResidual, GaussianSceneSecondOrder) {
  const SceneField f{fixture_scene()};
  const RayTP p{0.3, -0.4, 0.8, 0.2};
  const double r1 = john_residual(f, p, StencilSpec(0.1));
  const double r2 = john_residual(f, p, StencilSpec(0.05));
  EXPECT_LT(std::abs(r2), std::abs(r1));
  EXPECT_NEAR(r1 / r2, 4.0, 0.5);
}

TEST(UltrahyperbolicResidual, Quadratics) {
  auto a = [](const XiPoint& q) { return q.xi1 * q.xi1 + q.xi2 * q.xi2; };
  auto b = [](const XiPoint& q) { return q.xi1 * q.xi1; };
  const XiPoint q{0.5, -0.25, 1.0, 2.0};
  EXPECT_NEAR(ultrahyperbolic_residual(a, q, StencilSpec(0.05)), 0.0, 1e-10);
  EXPECT_NEAR(ultrahyperbolic_residual(b, q, StencilSpec(0.05)), 2.0, 1e-10);
  EXPECT_EQ(ultrahyperbolic_residual(b, XiPoint{}, StencilSpec(0.5)), 2.0);
  EXPECT_EQ(ultrahyperbolic_residual(a, XiPoint{}, StencilSpec(0.5)), 0.0);
}

TEST(UltrahyperbolicResidual, GaussianSceneVanishes) {
  const auto rt = in_xi(SceneField{fixture_scene()});
  const XiPoint q{0.2, 0.1, -0.3, 0.6};
  const double r1 = ultrahyperbolic_residual(rt, q, StencilSpec(0.1));
  const double r2 = ultrahyperbolic_residual(rt, q, StencilSpec(0.05));
  EXPECT_LT(std::abs(r2), std::abs(r1));
  EXPECT_NEAR(r1 / r2, 4.0, 0.5);
}

TEST(OperatorEquivalence, RatioIsFourOnNonSolution) {
  // exp(x + v) is not a solution; the ultrahyperbolic stencil on the composed
  // field is a constant multiple of the John stencil.
  auto f = [](const RayTP& p) { return std::exp(0.3 * (p.x + p.v)) + 0.2 * p.x * p.v; };
  const auto rt = in_xi(f);
  std::vector<double> ratios;
  for (const auto& p : random_points(200, 2.0, 3)) {
    const double j = john_residual(f, p, StencilSpec(0.01));
    const double u = ultrahyperbolic_residual(rt, xi_from_ray(p), StencilSpec(0.01));
    ratios.push_back(u / j);
  }
  for (double r : ratios) EXPECT_NEAR(r, ratios.front(), 0.05 * std::abs(ratios.front()));
  EXPECT_NEAR(ratios.front(), 4.0, 0.05);
}

TEST(OperatorEquivalence, BothVanishTogetherOnSolutions) {
  const SceneField f{fixture_scene()};
  const auto pts = random_points(300, 2.0, 4);
  for (double h : {0.05, 0.025}) {
    const auto j = residual_sweep(f, pts, StencilSpec(h), ResidualOperator::john);
    const auto u = residual_sweep(f, pts, StencilSpec(h), ResidualOperator::ultrahyperbolic);
    EXPECT_LT(j.rms, 1e-3);
    EXPECT_LT(u.rms, 4e-3);
  }
}

TEST(ResidualSweep, ConstantFieldAllZeros) {
  auto c = [](const RayTP&) { return 1.0; };
  const auto pts = random_points(100, 2.0, 5);
  for (auto op : {ResidualOperator::john, ResidualOperator::ultrahyperbolic}) {
    const auto r = residual_sweep(c, pts, StencilSpec(0.1), op);
    EXPECT_EQ(r.sample_count, 100u);
    EXPECT_EQ(r.max_abs, 0.0);
    EXPECT_EQ(r.mean_abs, 0.0);
    EXPECT_EQ(r.rms, 0.0);
  }
}

TEST(ResidualSweep, BilinearFieldReportsOne) {
  auto xv = [](const RayTP& p) { return p.x * p.v; };
  std::vector<RayTP> pts;
  for (int i = -4; i <= 4; ++i) pts.push_back({i * 0.25, 0.5, -i * 0.125, i * 0.5});
  const auto r = residual_sweep(xv, pts, StencilSpec(0.25), ResidualOperator::john);
  EXPECT_EQ(r.max_abs, 1.0);
  EXPECT_EQ(r.mean_abs, 1.0);
  EXPECT_EQ(r.rms, 1.0);
}

TEST(ResidualSweep, SecondOrderConvergence) {
  const SceneField f{fixture_scene()};
  const auto pts = random_points(1000, 2.0, 6);
  for (auto op : {ResidualOperator::john, ResidualOperator::ultrahyperbolic}) {
    const auto a = residual_sweep(f, pts, StencilSpec(0.1), op, 2);
    const auto b = residual_sweep(f, pts, StencilSpec(0.05), op, 2);
    EXPECT_NEAR(a.rms / b.rms, 4.0, 1.0);
    EXPECT_GE(b.max_abs, b.mean_abs);
  }
}

TEST(ResidualSweep, ScalesLinearlyWithAmplitude) {
  std::vector<GaussianBlob> blobs = fixture_scene().blobs();
  const SceneField f{Scene(blobs)};
  for (auto& b : blobs) b.amplitude *= 2.5;
  const SceneField g{Scene(blobs)};
  const auto pts = random_points(100, 2.0, 7);
  const auto a = residual_sweep(f, pts, StencilSpec(0.05), ResidualOperator::john);
  const auto b = residual_sweep(g, pts, StencilSpec(0.05), ResidualOperator::john);
  EXPECT_NEAR(b.rms / a.rms, 2.5, 1e-6);
}

TEST(ResidualSweep, EmptyPointSetThrows) {
  auto c = [](const RayTP&) { return 1.0; };
  EXPECT_THROW(residual_sweep(c, std::vector<RayTP>{}, StencilSpec(0.1), ResidualOperator::john),
               std::invalid_argument);
}

}  // namespace
}  // namespace lfjohn
