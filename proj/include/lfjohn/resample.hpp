#pragma once

// Discretized polar coordinates and nearest-neighbour resampling of
// plenoptic rasters, with the inter-microimage shift correction, plus the
// renderers for the polar layout and its colour maps.
//
// Conventions:
//  - ring R has 7R + 1 angular bins; bin k sits at theta = 2 pi k / (7R + 1)
//  - polar block (R1, R2) samples the ray ray_from_polar(theta1, theta2,
//    rho R1, rho R2)
//  - a ray (x, y, u, v) is read from microimage (u0 + round(u), v0 + round(v))
//    at pixel (x0 + round(x + sign s du), y0 + round(y + sign s dv)) where
//    du = u - round(u), dv = v - round(v); rounding is half away from zero
//  - the ray is out of bounds if any of the four indices leaves its range

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lfjohn/core.hpp"
#include "lfjohn/lightfield.hpp"
#include "lfjohn/parallel.hpp"

namespace lfjohn {

enum class ShiftSign : int { positive = 1, negative = -1 };

inline double sign_value(ShiftSign s) noexcept { return static_cast<int>(s); }

struct PixelLocation {
  int col = 0;
  int row = 0;
  friend bool operator==(const PixelLocation&, const PixelLocation&) = default;
};

inline std::optional<PixelLocation> locate_ray_nn(const LightfieldGeometry& g, const RayTP& p,
                                                  ShiftSign sign = ShiftSign::positive) {
  if (!is_finite(p)) return std::nullopt;
  const double mu = std::round(p.u);
  const double mv = std::round(p.v);
  const double s = sign_value(sign) * g.shift;
  const double px = std::round(p.x + s * (p.u - mu));
  const double py = std::round(p.y + s * (p.v - mv));
  const double iu = g.ref_micro_u + mu;
  const double iv = g.ref_micro_v + mv;
  const double ix = g.ref_pixel_x + px;
  const double iy = g.ref_pixel_y + py;
  if (iu < 0 || iu >= g.microimage_cols || iv < 0 || iv >= g.microimage_rows) return std::nullopt;
  if (ix < 0 || ix >= g.pitch_x || iy < 0 || iy >= g.pitch_y) return std::nullopt;
  return PixelLocation{static_cast<int>(iu) * g.pitch_x + static_cast<int>(ix),
                       static_cast<int>(iv) * g.pitch_y + static_cast<int>(iy)};
}

/// Nearest-neighbour pixel (all channels) for the ray, or nullopt when the
/// ray leaves the captured raster.
inline std::optional<std::span<const double>> sample_pixel_nn(const DiscreteLightfield& lf,
                                                              const RayTP& p,
                                                              ShiftSign sign = ShiftSign::positive) {
  const auto loc = locate_ray_nn(lf.geometry, p, sign);
  if (!loc) return std::nullopt;
  return lf.raster.data().subspan(lf.raster.offset(loc->col, loc->row),
                                  static_cast<std::size_t>(lf.raster.channels()));
}

/// Scalar (luminance) nearest-neighbour sample.
inline std::optional<double> sample_ray_nn(const DiscreteLightfield& lf, const RayTP& p,
                                           ShiftSign sign = ShiftSign::positive) {
  const auto px = sample_pixel_nn(lf, p, sign);
  if (!px) return std::nullopt;
  return luminance(*px);
}

struct PolarSampling {
  double rho = 1.0;  // pixels per unit R
  ShiftSign sign = ShiftSign::positive;
  int oversample = 1;  // sub-samples per bin along each angle
  unsigned threads = 1;

  void validate() const {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be > 0");
    if (oversample < 1) throw std::invalid_argument("oversample must be >= 1");
  }
};

/// Calls fn(ray) for the oversample^2 sub-sample rays of bin (k1, k2) of block
/// (r1, r2), placed on a regular sub-grid starting at the bin's left edge.
template <class Fn>
void for_each_bin_ray(int r1, int r2, int k1, int k2, double rho, int oversample, Fn&& fn) {
  const int n1 = angular_bins(r1);
  const int n2 = angular_bins(r2);
  for (int j1 = 0; j1 < oversample; ++j1) {
    const double t1 = kTwoPi * (k1 * oversample + j1) / (static_cast<double>(n1) * oversample);
    for (int j2 = 0; j2 < oversample; ++j2) {
      const double t2 = kTwoPi * (k2 * oversample + j2) / (static_cast<double>(n2) * oversample);
      fn(ray_from_polar(PolarPoint{t1, t2, rho * r1, rho * r2}));
    }
  }
}

/// Resamples a raster into the polar layout. A bin is valid iff all of its
/// sub-samples land inside the raster; its value is their mean.
inline PolarLightfield to_polar_grid(const DiscreteLightfield& lf, int r1max, int r2max,
                                     const PolarSampling& opt = {}) {
  opt.validate();
  lf.geometry.validate();
  const int ch = lf.raster.channels();
  PolarLightfield pl(r1max, r2max, ch);
  auto blocks = pl.blocks();
  parallel_for(blocks.size(), opt.threads, [&](std::size_t bi) {
    PolarBlock& b = blocks[bi];
    std::vector<double> acc(static_cast<std::size_t>(ch));
    for (int k1 = 0; k1 < b.rows; ++k1) {
      for (int k2 = 0; k2 < b.cols; ++k2) {
        std::fill(acc.begin(), acc.end(), 0.0);
        bool valid = true;
        for_each_bin_ray(b.r1, b.r2, k1, k2, opt.rho, opt.oversample, [&](const RayTP& ray) {
          if (!valid) return;
          const auto px = sample_pixel_nn(lf, ray, opt.sign);
          if (!px) {
            valid = false;
            return;
          }
          for (int c = 0; c < ch; ++c) acc[c] += (*px)[c];
        });
        b.mask[b.index(k1, k2)] = valid ? 1 : 0;
        auto out = b.pixel(k1, k2);
        const double nsub = static_cast<double>(opt.oversample) * opt.oversample;
        for (int c = 0; c < ch; ++c) out[c] = valid ? acc[c] / nsub : 0.0;
      }
    }
  });
  return pl;
}

/// Polar layout from direct evaluation of a radiance field at the bin rays
/// (no raster, no rounding). Every bin is valid.
template <RayField F>
PolarLightfield to_polar_grid_analytic(const F& field, int r1max, int r2max,
                                       const PolarSampling& opt = {}) {
  opt.validate();
  PolarLightfield pl(r1max, r2max, 1);
  auto blocks = pl.blocks();
  parallel_for(blocks.size(), opt.threads, [&](std::size_t bi) {
    PolarBlock& b = blocks[bi];
    for (int k1 = 0; k1 < b.rows; ++k1) {
      for (int k2 = 0; k2 < b.cols; ++k2) {
        double acc = 0.0;
        for_each_bin_ray(b.r1, b.r2, k1, k2, opt.rho, opt.oversample,
                         [&](const RayTP& ray) { acc += static_cast<double>(field(ray)); });
        b.pixel(k1, k2)[0] = acc / (static_cast<double>(opt.oversample) * opt.oversample);
        b.mask[b.index(k1, k2)] = 1;
      }
    }
  });
  return pl;
}

/// Validity mask of the polar layout over a geometry, without pixel values.
inline PolarLightfield polar_coverage(const LightfieldGeometry& geom, int r1max, int r2max,
                                      const PolarSampling& opt = {}) {
  opt.validate();
  geom.validate();
  PolarLightfield pl(r1max, r2max, 1);
  for (PolarBlock& b : pl.blocks()) {
    for (int k1 = 0; k1 < b.rows; ++k1) {
      for (int k2 = 0; k2 < b.cols; ++k2) {
        bool valid = true;
        for_each_bin_ray(b.r1, b.r2, k1, k2, opt.rho, opt.oversample, [&](const RayTP& ray) {
          valid = valid && locate_ray_nn(geom, ray, opt.sign).has_value();
        });
        b.mask[b.index(k1, k2)] = valid ? 1 : 0;
      }
    }
  }
  return pl;
}

namespace detail {
// Offsets of the blocks along one axis of the layout.
inline std::vector<int> layout_offsets(int rmax, bool separators) {
  std::vector<int> off(static_cast<std::size_t>(rmax) + 2, 0);
  for (int r = 0; r <= rmax; ++r) off[r + 1] = off[r] + angular_bins(r) + (separators && r < rmax);
  return off;
}
}  // namespace detail

inline constexpr std::uint8_t kInvalidGray = 128;

/// Blocks arranged with R1 increasing downward (theta1 along rows) and R2
/// increasing rightward (theta2 along columns). Invalid bins are gray,
/// separators black.
inline Image<double> render_polar_layout(const PolarLightfield& pl, bool separators = false) {
  const auto rows = detail::layout_offsets(pl.r1max(), separators);
  const auto cols = detail::layout_offsets(pl.r2max(), separators);
  const int ch = pl.channels();
  Image<double> img(cols.back(), rows.back(), ch, 0.0);
  for (const PolarBlock& b : pl.blocks()) {
    for (int k1 = 0; k1 < b.rows; ++k1) {
      for (int k2 = 0; k2 < b.cols; ++k2) {
        const int x = cols[b.r2] + k2;
        const int y = rows[b.r1] + k1;
        const auto px = b.pixel(k1, k2);
        for (int c = 0; c < ch; ++c)
          img.at(x, y, c) = b.valid(k1, k2) ? px[c] : kInvalidGray / 255.0;
      }
    }
  }
  return img;
}

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Green encodes R1, red encodes R2, both from dark (R = 0) to full (Rmax).
inline Rgb block_color(int r1, int r2, int r1max, int r2max) noexcept {
  const auto level = [](int r, int rmax) {
    return static_cast<std::uint8_t>(std::lround(255.0 * (r + 1) / (rmax + 1)));
  };
  return {level(r2, r2max), level(r1, r1max), 0};
}

inline Image<std::uint8_t> render_colormap(const PolarLightfield& pl, bool separators = false) {
  const auto rows = detail::layout_offsets(pl.r1max(), separators);
  const auto cols = detail::layout_offsets(pl.r2max(), separators);
  Image<std::uint8_t> img(cols.back(), rows.back(), 3, 0);
  for (const PolarBlock& b : pl.blocks()) {
    const Rgb color = block_color(b.r1, b.r2, pl.r1max(), pl.r2max());
    const Rgb gray{kInvalidGray, kInvalidGray, kInvalidGray};
    for (int k1 = 0; k1 < b.rows; ++k1) {
      for (int k2 = 0; k2 < b.cols; ++k2) {
        const Rgb c = b.valid(k1, k2) ? color : gray;
        const int x = cols[b.r2] + k2;
        const int y = rows[b.r1] + k1;
        img.at(x, y, 0) = c.r;
        img.at(x, y, 1) = c.g;
        img.at(x, y, 2) = c.b;
      }
    }
  }
  return img;
}

struct CoordinateMap {
  Image<std::uint8_t> image;
  std::size_t colored_pixels = 0;
  std::size_t collisions = 0;  // writes over a pixel owned by a different bin
};

/// Colours each raster pixel by the (R1, R2) colour of the polar bin that
/// samples it. Bins are visited in (R1, R2, k1, k2) order and the last
/// writer wins; unsampled pixels stay black.
inline CoordinateMap render_coordinate_map_original(const LightfieldGeometry& geom, int r1max,
                                                    int r2max, const PolarSampling& opt = {}) {
  opt.validate();
  geom.validate();
  if (r1max < 0 || r2max < 0) throw std::invalid_argument("Rmax must be >= 0");
  CoordinateMap out;
  out.image = Image<std::uint8_t>(geom.raster_width(), geom.raster_height(), 3, 0);
  std::vector<long long> owner(static_cast<std::size_t>(geom.raster_width()) * geom.raster_height(),
                               -1);
  long long bin_id = 0;
  for (int r1 = 0; r1 <= r1max; ++r1) {
    for (int r2 = 0; r2 <= r2max; ++r2) {
      const Rgb color = block_color(r1, r2, r1max, r2max);
      for (int k1 = 0; k1 < angular_bins(r1); ++k1) {
        for (int k2 = 0; k2 < angular_bins(r2); ++k2, ++bin_id) {
          for_each_bin_ray(r1, r2, k1, k2, opt.rho, opt.oversample, [&](const RayTP& ray) {
            const auto loc = locate_ray_nn(geom, ray, opt.sign);
            if (!loc) return;
            auto& o = owner[static_cast<std::size_t>(loc->row) * geom.raster_width() + loc->col];
            if (o < 0) ++out.colored_pixels;
            else if (o != bin_id) ++out.collisions;
            o = bin_id;
            out.image.at(loc->col, loc->row, 0) = color.r;
            out.image.at(loc->col, loc->row, 1) = color.g;
            out.image.at(loc->col, loc->row, 2) = color.b;
          });
        }
      }
    }
  }
  return out;
}

// Epipolar walks. For a scene at the depth matching the configured shift s,
// radiance is constant along (x - sign s t, y, u + t, v).

inline std::vector<RayTP> epipolar_walk(const RayTP& start, double shift, ShiftSign sign,
                                        int steps = 5, double step = 0.4) {
  std::vector<RayTP> out;
  const double s = sign_value(sign) * shift;
  for (int i = 0; i < steps; ++i) {
    const double t = (i - (steps - 1) / 2.0) * step;
    out.push_back({start.x - s * t, start.y, start.u + t, start.v});
  }
  return out;
}

/// Same length walk along u alone, which crosses the epipolar lines.
inline std::vector<RayTP> angular_walk(const RayTP& start, int steps = 5, double step = 0.4) {
  std::vector<RayTP> out;
  for (int i = 0; i < steps; ++i) {
    const double t = (i - (steps - 1) / 2.0) * step;
    out.push_back({start.x, start.y, start.u + t, start.v});
  }
  return out;
}

/// Population variance of the samples along a walk; nullopt if any sample
/// is out of bounds.
inline std::optional<double> walk_variance(const DiscreteLightfield& lf, std::span<const RayTP> walk,
                                           ShiftSign sign) {
  std::vector<double> vals;
  vals.reserve(walk.size());
  for (const RayTP& p : walk) {
    const auto v = sample_ray_nn(lf, p, sign);
    if (!v) return std::nullopt;
    vals.push_back(*v);
  }
  if (vals.empty()) return std::nullopt;
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= static_cast<double>(vals.size());
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  return var / static_cast<double>(vals.size());
}

/// Total epipolar-walk variance over the start rays when the raster is read
/// with the given sign (walks with any out-of-bounds sample are skipped).
inline double epipolar_variance(const DiscreteLightfield& lf, std::span<const RayTP> starts,
                                ShiftSign sign) {
  double total = 0.0;
  for (const RayTP& s : starts) {
    const auto walk = epipolar_walk(s, lf.geometry.shift, sign);
    if (const auto v = walk_variance(lf, walk, sign)) total += *v;
  }
  return total;
}

/// Picks the shift sign under which the raster is most nearly constant along
/// epipolar walks. Ties resolve to positive.
inline ShiftSign select_shift_sign(const DiscreteLightfield& lf, std::span<const RayTP> starts) {
  const double pos = epipolar_variance(lf, starts, ShiftSign::positive);
  const double neg = epipolar_variance(lf, starts, ShiftSign::negative);
  return neg < pos ? ShiftSign::negative : ShiftSign::positive;
}

}  // namespace lfjohn
