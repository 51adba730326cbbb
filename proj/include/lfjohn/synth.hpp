#pragma once

// Ground-truth radiance: the John transform of a mixture of isotropic
// Gaussian emitters,
//
//   r(x, y, u, v) = integral over z of f(x + u z, y + v z, z),
//   f(p) = sum_k amplitude_k exp(-|p - c_k|^2 / sigma_k^2),
//
// evaluated in closed form and, independently, by composite Simpson
// quadrature along the ray.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lfjohn/core.hpp"
#include "lfjohn/lightfield.hpp"
#include "lfjohn/parallel.hpp"

namespace lfjohn {

struct GaussianBlob {
  std::array<double, 3> center{};  // (a, b, c); c is the depth along z
  double sigma = 1.0;
  double amplitude = 1.0;

  friend bool operator==(const GaussianBlob&, const GaussianBlob&) = default;
};

/// Non-empty, immutable list of emitters.
class Scene {
 public:
  explicit Scene(std::vector<GaussianBlob> blobs) : blobs_(std::move(blobs)) {
    if (blobs_.empty()) throw std::invalid_argument("scene must contain at least one blob");
    for (const auto& b : blobs_) {
      if (!(b.sigma > 0.0) || !std::isfinite(b.sigma))
        throw std::invalid_argument("blob sigma must be finite and > 0");
      if (!(b.amplitude > 0.0) || !std::isfinite(b.amplitude))
        throw std::invalid_argument("blob amplitude must be finite and > 0");
      for (double c : b.center)
        if (!std::isfinite(c)) throw std::invalid_argument("blob center must be finite");
    }
  }

  const std::vector<GaussianBlob>& blobs() const noexcept { return blobs_; }

  double max_sigma() const noexcept {
    double s = 0.0;
    for (const auto& b : blobs_) s = std::max(s, b.sigma);
    return s;
  }

  double max_center_norm() const noexcept {
    double n = 0.0;
    for (const auto& b : blobs_)
      n = std::max(n, std::sqrt(b.center[0] * b.center[0] + b.center[1] * b.center[1] +
                                b.center[2] * b.center[2]));
    return n;
  }

  friend bool operator==(const Scene&, const Scene&) = default;

 private:
  std::vector<GaussianBlob> blobs_;
};

/// Three blobs at mixed depths, wide enough that fourth derivatives of the
/// radiance stay small on [-2, 2]^4.
inline Scene fixture_scene() {
  return Scene({
      {{0.4, -0.3, 0.6}, 2.5, 1.0},
      {{-0.7, 0.5, -1.5}, 2.75, 0.7},
      {{0.5, 0.9, 2.5}, 3.0, 0.5},
  });
}

/// Exact line integral of one blob along the ray.
///
/// With direction D = (u, v, 1), A = |D|^2 and the squared distance d^2 from
/// the blob center to the line, the integral is sigma sqrt(pi / A)
/// exp(-d^2 / sigma^2). d^2 = C - B^2 / A for B = u(a - x) + v(b - y) + c and
/// C = (x - a)^2 + (y - b)^2 + c^2; it is computed here as |(P - O) x D|^2 / A,
/// which avoids the cancellation in C - B^2 / A.
inline double blob_radiance(const GaussianBlob& blob, const RayTP& p) noexcept {
  const double dx = blob.center[0] - p.x;
  const double dy = blob.center[1] - p.y;
  const double dz = blob.center[2];
  const double a = 1.0 + p.u * p.u + p.v * p.v;
  const double cx = dy - dz * p.v;
  const double cy = dz * p.u - dx;
  const double cz = dx * p.v - dy * p.u;
  const double dist2 = (cx * cx + cy * cy + cz * cz) / a;
  return blob.amplitude * blob.sigma * std::sqrt(kPi / a) * std::exp(-dist2 / (blob.sigma * blob.sigma));
}

inline double radiance_closed_form(const Scene& scene, const RayTP& p) noexcept {
  double sum = 0.0;
  for (const auto& b : scene.blobs()) sum += blob_radiance(b, p);
  return sum;
}

/// Emitter density f at a point.
inline double scene_density(const Scene& scene, double px, double py, double pz) noexcept {
  double sum = 0.0;
  for (const auto& b : scene.blobs()) {
    const double dx = px - b.center[0];
    const double dy = py - b.center[1];
    const double dz = pz - b.center[2];
    sum += b.amplitude * std::exp(-(dx * dx + dy * dy + dz * dz) / (b.sigma * b.sigma));
  }
  return sum;
}

/// Composite Simpson rule for the line integral over z in
/// [-half_width, half_width] with n_points (odd, >= 3) nodes.
inline double radiance_quadrature(const Scene& scene, const RayTP& p, double half_width,
                                  int n_points) {
  if (!(half_width > 0.0)) throw std::invalid_argument("quadrature half width must be > 0");
  if (n_points < 3 || n_points % 2 == 0)
    throw std::invalid_argument("quadrature needs an odd number of points >= 3");
  const int intervals = n_points - 1;
  const double h = 2.0 * half_width / intervals;
  auto f = [&](int i) {
    const double z = -half_width + h * i;
    return scene_density(scene, p.x + p.u * z, p.y + p.v * z, z);
  };
  double odd = 0.0;
  double even = 0.0;
  for (int i = 1; i < intervals; ++i) (i % 2 ? odd : even) += f(i);
  return h / 3.0 * (f(0) + 4.0 * odd + 2.0 * even + f(intervals));
}

/// Truncation that leaves every blob at least twelve sigmas inside.
inline double default_half_width(const Scene& scene) noexcept {
  return 12.0 * scene.max_sigma() + scene.max_center_norm();
}

/// Closed-form radiance of a scene as a RayField.
struct SceneField {
  Scene scene;
  double operator()(const RayTP& p) const noexcept { return radiance_closed_form(scene, p); }
};

/// Ray sampled by raster pixel (col, row) with no sub-microimage offset.
inline RayTP ray_at_pixel(const LightfieldGeometry& g, int col, int row) noexcept {
  const int mu = col / g.pitch_x;
  const int mv = row / g.pitch_y;
  return {static_cast<double>(col % g.pitch_x - g.ref_pixel_x),
          static_cast<double>(row % g.pitch_y - g.ref_pixel_y),
          static_cast<double>(mu - g.ref_micro_u), static_cast<double>(mv - g.ref_micro_v)};
}

/// Fills every pixel of a single-channel raster with the closed-form
/// radiance of its ray. Raw radiance values, not normalized.
inline DiscreteLightfield sample_plenoptic_raster(const Scene& scene, const LightfieldGeometry& geom,
                                                  unsigned threads = 1) {
  geom.validate();
  Image<double> img(geom.raster_width(), geom.raster_height(), 1);
  parallel_for(static_cast<std::size_t>(img.height()), threads, [&](std::size_t row) {
    for (int col = 0; col < img.width(); ++col)
      img.at(col, static_cast<int>(row)) =
          radiance_closed_form(scene, ray_at_pixel(geom, col, static_cast<int>(row)));
  });
  return DiscreteLightfield(geom, std::move(img));
}

}  // namespace lfjohn
