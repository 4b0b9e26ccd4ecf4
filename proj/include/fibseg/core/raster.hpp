// Copyright 2026 The fibseg authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FIBSEG_CORE_RASTER_HPP
#define FIBSEG_CORE_RASTER_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fibseg::core {

/// Row-major single-channel raster.
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(int rows, int cols, T fill = T{}) : rows_(rows), cols_(cols) {
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("raster dims must be positive");
    data_.assign(static_cast<size_t>(rows) * cols, fill);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }
  size_t size() const { return data_.size(); }

  T& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const T& at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }
  T& operator[](size_t i) { return data_[i]; }
  const T& operator[](size_t i) const { return data_[i]; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  bool in_bounds(int r, int c) const { return r >= 0 && r < rows_ && c >= 0 && c < cols_; }
  bool same_shape(int rows, int cols) const { return rows_ == rows && cols_ == cols; }
  template <typename U>
  bool same_shape(const Raster<U>& other) const {
    return rows_ == other.rows() && cols_ == other.cols();
  }

  bool operator==(const Raster& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using ByteRaster = Raster<std::uint8_t>;
using FloatRaster = Raster<float>;

/// Interleaved 8-bit RGB image, row-major.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int rows, int cols, std::uint8_t fill = 0) : rows_(rows), cols_(cols) {
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("image dims must be positive");
    data_.assign(static_cast<size_t>(rows) * cols * 3, fill);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  std::uint8_t& at(int r, int c, int ch) {
    return data_[(static_cast<size_t>(r) * cols_ + c) * 3 + ch];
  }
  const std::uint8_t& at(int r, int c, int ch) const {
    return data_[(static_cast<size_t>(r) * cols_ + c) * 3 + ch];
  }

  std::uint8_t* data() { return data_.data(); }
  const std::uint8_t* data() const { return data_.data(); }
  std::vector<std::uint8_t>& storage() { return data_; }
  const std::vector<std::uint8_t>& storage() const { return data_; }

  bool same_shape(int rows, int cols) const { return rows_ == rows && cols_ == cols; }
  bool operator==(const RgbImage& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }

  /// Rec.601 luminance, rounded to nearest.
  std::uint8_t gray(int r, int c) const {
    const std::uint8_t* p = &data_[(static_cast<size_t>(r) * cols_ + c) * 3];
    return static_cast<std::uint8_t>(0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2] + 0.5);
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Physical pixel geometry of a section.
struct Resolution {
  double microns_per_pixel = 1.6;  // 0.4 um native, downsampled in-plane by 4
  double section_gap_um = 400.0;   // every 8th section at 50 um thickness

  void validate() const {
    if (!(microns_per_pixel > 0.0)) throw std::invalid_argument("microns_per_pixel must be > 0");
    if (!(section_gap_um > 0.0)) throw std::invalid_argument("section_gap_um must be > 0");
  }

  double mm2_per_pixel() const { return microns_per_pixel * microns_per_pixel * 1e-6; }
  double um_to_px(double um) const { return um / microns_per_pixel; }
  double px_to_um(double px) const { return px * microns_per_pixel; }
};

}  // namespace fibseg::core

#endif  // FIBSEG_CORE_RASTER_HPP
