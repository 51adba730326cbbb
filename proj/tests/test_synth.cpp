#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lfjohn/synth.hpp"
#include "oracles.hpp"

namespace lfjohn {
namespace {

const Scene kUnitBlob({{{0.0, 0.0, 0.0}, 1.0, 1.0}});

// sqrt(pi), sqrt(pi)/e, sqrt(pi/2)
constexpr double kSqrtPi = 1.7724538509055159;
constexpr double kSqrtPiOverE = 0.6520493321732922;
constexpr double kSqrtHalfPi = 1.2533141373155001;

TEST(Scene, RejectsInvalidBlobs) {
  EXPECT_THROW(Scene({}), std::invalid_argument);
  EXPECT_THROW(Scene({{{0, 0, 0}, 0.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(Scene({{{0, 0, 0}, 1.0, -1.0}}), std::invalid_argument);
  EXPECT_THROW(Scene({{{0, NAN, 0}, 1.0, 1.0}}), std::invalid_argument);
}

TEST(ClosedForm, UnitBlobValues) {
  EXPECT_NEAR(radiance_closed_form(kUnitBlob, {0, 0, 0, 0}), kSqrtPi, 1e-15);
  EXPECT_NEAR(radiance_closed_form(kUnitBlob, {1, 0, 0, 0}), kSqrtPiOverE, 1e-15);
  EXPECT_NEAR(radiance_closed_form(kUnitBlob, {0, 0, 1, 0}), kSqrtHalfPi, 1e-15);
}

TEST(ClosedForm, MatchesTextbookFormula) {
  // sigma sqrt(pi/A) exp(-(C - B^2/A)/sigma^2) written out directly
  const GaussianBlob b{{0.3, -0.7, 1.2}, 0.8, 1.3};
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const RayTP p{d(rng), d(rng), d(rng), d(rng)};
    const double a = 1 + p.u * p.u + p.v * p.v;
    const double bb = p.u * (b.center[0] - p.x) + p.v * (b.center[1] - p.y) + b.center[2];
    const double c = (p.x - b.center[0]) * (p.x - b.center[0]) + (p.y - b.center[1]) * (p.y - b.center[1]) +
                     b.center[2] * b.center[2];
    const double ref = b.amplitude * b.sigma * std::sqrt(kPi / a) * std::exp(-(c - bb * bb / a) / (b.sigma * b.sigma));
    EXPECT_NEAR(blob_radiance(b, p), ref, 1e-12 * ref + 1e-300);
  }
}

TEST(ClosedForm, MatchesAdaptiveQuadrature) {
  const Scene s = fixture_scene();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(-4.0, 4.0);
  for (int i = 0; i < 50; ++i) {
    const RayTP p{d(rng), d(rng), d(rng), d(rng)};
    const double ref = test::adaptive_simpson_pieces(
        [&](double z) { return scene_density(s, p.x + p.u * z, p.y + p.v * z, z); }, -60.0, 60.0, 64, 1e-13);
    EXPECT_NEAR(radiance_closed_form(s, p), ref, 1e-10 * ref);
  }
}

TEST(Quadrature, UnitBlobSimpson) {
  EXPECT_NEAR(radiance_quadrature(kUnitBlob, {0, 0, 0, 0}, 10.0, 2001), kSqrtPi, 1e-10);
}

TEST(Quadrature, FarFieldIsNegligible) {
  const Scene narrow({{{0, 0, 0}, 0.1, 1.0}});
  EXPECT_LT(radiance_quadrature(narrow, {5, 5, 0, 0}, 10.0, 2001), 1e-30);
}

TEST(Quadrature, RejectsBadArguments) {
  EXPECT_THROW(radiance_quadrature(kUnitBlob, {}, 0.0, 11), std::invalid_argument);
  EXPECT_THROW(radiance_quadrature(kUnitBlob, {}, 1.0, 10), std::invalid_argument);
  EXPECT_THROW(radiance_quadrature(kUnitBlob, {}, 1.0, 1), std::invalid_argument);
}

TEST(Quadrature, ConvergesToClosedForm) {
  const Scene s = fixture_scene();
  const RayTP p{0.7, -1.1, 1.5, -0.4};
  const double exact = radiance_closed_form(s, p);
  const double hw = default_half_width(s);
  double prev = INFINITY;
  for (int n : {41, 81, 161, 321}) {
    const double err = std::abs(radiance_quadrature(s, p, hw, n) - exact);
    EXPECT_LT(err, prev) << "n=" << n;
    prev = err;
  }
  EXPECT_LT(std::abs(radiance_quadrature(s, p, hw, 641) - exact), 1e-10 * exact);
}

TEST(Quadrature, OracleAgreementOnFixture) {
  const Scene s = fixture_scene();
  const double hw = default_half_width(s);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  for (int i = 0; i < 500; ++i) {
    const RayTP p{d(rng), d(rng), d(rng), d(rng)};
    const double c = radiance_closed_form(s, p);
    EXPECT_NEAR(radiance_quadrature(s, p, hw, 4001), c, 1e-8 * c + 1e-12);
  }
}

TEST(ClosedForm, LinearInBlobs) {
  const GaussianBlob a{{0.2, 0.1, 0.5}, 1.0, 1.0};
  const GaussianBlob b{{-1.0, 0.4, -2.0}, 1.5, 0.3};
  const Scene ab({a, b});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const RayTP p{d(rng), d(rng), d(rng), d(rng)};
    EXPECT_DOUBLE_EQ(radiance_closed_form(ab, p), blob_radiance(a, p) + blob_radiance(b, p));
  }
}

TEST(ClosedForm, TranslationCovariance) {
  const Scene s = fixture_scene();
  const double da = 0.75, db = -1.25;
  std::vector<GaussianBlob> moved = s.blobs();
  for (auto& b : moved) {
    b.center[0] += da;
    b.center[1] += db;
  }
  const Scene t(moved);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const RayTP p{d(rng), d(rng), d(rng), d(rng)};
    const RayTP q{p.x - da, p.y - db, p.u, p.v};
    EXPECT_NEAR(radiance_closed_form(t, p), radiance_closed_form(s, q), 1e-14);
  }
}

TEST(ClosedForm, PositiveEverywhere) {
  const Scene s = fixture_scene();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> d(-20.0, 20.0);
  for (int i = 0; i < 1000; ++i) EXPECT_GT(radiance_closed_form(s, {d(rng), d(rng), d(rng), d(rng)}), 0.0);
}

LightfieldGeometry small_geometry() {
  LightfieldGeometry g;
  g.microimage_cols = 5;
  g.microimage_rows = 5;
  g.pitch_x = 9;
  g.pitch_y = 9;
  g.ref_micro_u = 2;
  g.ref_micro_v = 2;
  g.ref_pixel_x = 4;
  g.ref_pixel_y = 4;
  return g;
}

TEST(PlenopticRaster, CentredBlobPeaksAtReference) {
  const Scene s({{{0, 0, 0.5}, 1.0, 1.0}});
  const auto lf = sample_plenoptic_raster(s, small_geometry());
  ASSERT_EQ(lf.raster.width(), 45);
  ASSERT_EQ(lf.raster.height(), 45);
  int best_col = -1, best_row = -1;
  double best = -1;
  for (int r = 0; r < 45; ++r)
    for (int c = 0; c < 45; ++c)
      if (lf.raster.at(c, r) > best) {
        best = lf.raster.at(c, r);
        best_col = c;
        best_row = r;
      }
  EXPECT_EQ(best_col, 2 * 9 + 4);
  EXPECT_EQ(best_row, 2 * 9 + 4);
}

TEST(PlenopticRaster, ScalesAndAddsLinearly) {
  const GaussianBlob a{{0.5, 0, 0.4}, 1.0, 1.0};
  GaussianBlob a3 = a;
  a3.amplitude = 3.0;
  const GaussianBlob b{{-1, 1, -0.7}, 1.2, 0.5};
  const auto g = small_geometry();
  const auto ra = sample_plenoptic_raster(Scene({a}), g);
  const auto ra3 = sample_plenoptic_raster(Scene({a3}), g);
  const auto rb = sample_plenoptic_raster(Scene({b}), g);
  const auto rab = sample_plenoptic_raster(Scene({a, b}), g, 4);
  for (std::size_t i = 0; i < ra.raster.data().size(); ++i) {
    EXPECT_NEAR(ra3.raster.data()[i], 3.0 * ra.raster.data()[i], 1e-14);
    EXPECT_DOUBLE_EQ(rab.raster.data()[i], ra.raster.data()[i] + rb.raster.data()[i]);
  }
}

TEST(PlenopticRaster, PixelRayMapping) {
  const auto g = small_geometry();
  EXPECT_EQ(ray_at_pixel(g, 2 * 9 + 4, 2 * 9 + 4), (RayTP{0, 0, 0, 0}));
  EXPECT_EQ(ray_at_pixel(g, 0, 44), (RayTP{-4, 4, -2, 2}));
}

}  // namespace
}  // namespace lfjohn
