#pragma once

// Pixel containers: generic images, the captured plenoptic raster with its
// geometry, and the polar lightfield whose (R1, R2) blocks hold
// (7 R1 + 1) x (7 R2 + 1) angular bins.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lfjohn/core.hpp"

namespace lfjohn {

/// Interleaved row-major image with 1 or 3 channels.
template <class T>
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, T fill = T{})
      : width_(width), height_(height), channels_(channels) {
    if (width < 0 || height < 0) throw std::invalid_argument("image dimensions must be >= 0");
    if (channels != 1 && channels != 3) throw std::invalid_argument("image must have 1 or 3 channels");
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }

  std::size_t offset(int col, int row) const noexcept {
    return (static_cast<std::size_t>(row) * width_ + col) * channels_;
  }
  T& at(int col, int row, int ch = 0) noexcept { return data_[offset(col, row) + ch]; }
  const T& at(int col, int row, int ch = 0) const noexcept { return data_[offset(col, row) + ch]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 1;
  std::vector<T> data_;
};

/// Rec. 709 luminance; single-channel pixels are returned as is.
inline double luminance(std::span<const double> px) noexcept {
  if (px.size() < 3) return px.empty() ? 0.0 : px[0];
  return 0.2126 * px[0] + 0.7152 * px[1] + 0.0722 * px[2];
}

/// Layout of a plenoptic raster: a grid of microimages indexed (u, v), each
/// pitch_x x pitch_y pixels indexed (x, y). The reference microimage and
/// pixel define the origin of ray coordinates; shift is the per-microimage
/// pixel disparity used when interpolating between microimages.
struct LightfieldGeometry {
  int microimage_cols = 1;
  int microimage_rows = 1;
  int pitch_x = 1;
  int pitch_y = 1;
  int ref_micro_u = 0;
  int ref_micro_v = 0;
  int ref_pixel_x = 0;
  int ref_pixel_y = 0;
  double shift = 0.0;

  int raster_width() const noexcept { return microimage_cols * pitch_x; }
  int raster_height() const noexcept { return microimage_rows * pitch_y; }

  void validate() const {
    if (microimage_cols < 1 || microimage_rows < 1)
      throw std::invalid_argument("geometry: microimage grid must be at least 1x1");
    if (pitch_x < 1 || pitch_y < 1) throw std::invalid_argument("geometry: pitch must be >= 1");
    if (ref_micro_u < 0 || ref_micro_u >= microimage_cols || ref_micro_v < 0 ||
        ref_micro_v >= microimage_rows)
      throw std::invalid_argument("geometry: reference microimage outside the grid");
    if (ref_pixel_x < 0 || ref_pixel_x >= pitch_x || ref_pixel_y < 0 || ref_pixel_y >= pitch_y)
      throw std::invalid_argument("geometry: reference pixel outside the microimage");
    if (!std::isfinite(shift) || shift < 0.0)
      throw std::invalid_argument("geometry: shift must be finite and >= 0");
  }

  friend bool operator==(const LightfieldGeometry&, const LightfieldGeometry&) = default;
};

/// A captured or synthesized raster together with its geometry.
struct DiscreteLightfield {
  LightfieldGeometry geometry;
  Image<double> raster;

  DiscreteLightfield() = default;
  DiscreteLightfield(LightfieldGeometry geom, Image<double> img)
      : geometry(geom), raster(std::move(img)) {
    geometry.validate();
    if (raster.width() != geometry.raster_width() || raster.height() != geometry.raster_height())
      throw std::invalid_argument("raster dimensions do not match the lightfield geometry");
  }
};

/// Number of angular bins on the ring of integer radius r.
constexpr int angular_bins(int radius) {
  if (radius < 0) throw std::invalid_argument("angular_bins: radius must be >= 0");
  return 7 * radius + 1;
}

/// Bin k on ring r, angle at the bin's left edge.
inline double bin_center_angle(int radius, int k) {
  const int n = angular_bins(radius);
  if (k < 0 || k >= n) throw std::out_of_range("bin_center_angle: bin index out of range");
  return kTwoPi * k / n;
}

/// Block (r1, r2) of a polar lightfield: theta1 bins along rows, theta2 bins
/// along columns.
struct PolarBlock {
  int r1 = 0;
  int r2 = 0;
  int rows = 1;
  int cols = 1;
  int channels = 1;
  std::vector<double> values;      // rows * cols * channels, interleaved
  std::vector<std::uint8_t> mask;  // rows * cols, 1 = valid

  std::size_t bin_count() const noexcept { return static_cast<std::size_t>(rows) * cols; }
  std::size_t index(int k1, int k2) const noexcept { return static_cast<std::size_t>(k1) * cols + k2; }
  bool valid(int k1, int k2) const noexcept { return mask[index(k1, k2)] != 0; }
  std::span<const double> pixel(int k1, int k2) const noexcept {
    return std::span<const double>(values).subspan(index(k1, k2) * channels, channels);
  }
  std::span<double> pixel(int k1, int k2) noexcept {
    return std::span<double>(values).subspan(index(k1, k2) * channels, channels);
  }

  friend bool operator==(const PolarBlock&, const PolarBlock&) = default;
};

class PolarLightfield {
 public:
  PolarLightfield() : PolarLightfield(0, 0, 1) {}
  PolarLightfield(int r1max, int r2max, int channels)
      : r1max_(r1max), r2max_(r2max), channels_(channels) {
    if (r1max < 0 || r2max < 0) throw std::invalid_argument("polar lightfield: Rmax must be >= 0");
    if (channels != 1 && channels != 3)
      throw std::invalid_argument("polar lightfield: channels must be 1 or 3");
    blocks_.reserve(static_cast<std::size_t>(r1max + 1) * (r2max + 1));
    for (int r1 = 0; r1 <= r1max; ++r1) {
      for (int r2 = 0; r2 <= r2max; ++r2) {
        PolarBlock b;
        b.r1 = r1;
        b.r2 = r2;
        b.rows = angular_bins(r1);
        b.cols = angular_bins(r2);
        b.channels = channels;
        b.values.assign(b.bin_count() * channels, 0.0);
        b.mask.assign(b.bin_count(), 0);
        blocks_.push_back(std::move(b));
      }
    }
  }

  int r1max() const noexcept { return r1max_; }
  int r2max() const noexcept { return r2max_; }
  int channels() const noexcept { return channels_; }

  PolarBlock& block(int r1, int r2) { return blocks_.at(block_index(r1, r2)); }
  const PolarBlock& block(int r1, int r2) const { return blocks_.at(block_index(r1, r2)); }

  std::span<PolarBlock> blocks() noexcept { return blocks_; }
  std::span<const PolarBlock> blocks() const noexcept { return blocks_; }

  friend bool operator==(const PolarLightfield&, const PolarLightfield&) = default;

 private:
  std::size_t block_index(int r1, int r2) const {
    if (r1 < 0 || r1 > r1max_ || r2 < 0 || r2 > r2max_)
      throw std::out_of_range("polar lightfield: block (" + std::to_string(r1) + ", " +
                              std::to_string(r2) + ") out of range");
    return static_cast<std::size_t>(r1) * (r2max_ + 1) + r2;
  }

  int r1max_;
  int r2max_;
  int channels_;
  std::vector<PolarBlock> blocks_;  // (r1, r2) lexicographic
};

}  // namespace lfjohn
