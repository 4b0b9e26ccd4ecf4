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

#ifndef FIBSEG_CORE_TYPES_HPP
#define FIBSEG_CORE_TYPES_HPP

#include <optional>
#include <string>
#include <vector>

#include "fibseg/core/error.hpp"
#include "fibseg/core/raster.hpp"

namespace fibseg::core {

/// Charting label values inside a SectionRecord::charting raster.
inline constexpr std::uint8_t kLabelBackground = 0;
inline constexpr std::uint8_t kLabelModerate = 1;
inline constexpr std::uint8_t kLabelDense = 2;

enum class Severity {
  kDense,
  kModerate,
  kPredictedUnclassified,
};

std::string to_string(Severity s);
Severity severity_from_string(const std::string& s);

struct PixelCoord {
  int row = 0;
  int col = 0;

  bool operator==(const PixelCoord&) const = default;
  auto operator<=>(const PixelCoord&) const = default;
};

/// One coronal tracer section plus whatever annotation rasters exist for it.
/// All optional rasters, when present, share the image's H×W.
struct SectionRecord {
  std::string id;
  std::string macaque_id;
  int rostrocaudal_index = 0;
  RgbImage image;
  Resolution resolution;
  std::optional<ByteRaster> charting;  // values in {0=bg, 1=moderate, 2=dense}
  std::optional<ByteRaster> tissue_mask;
  std::optional<ByteRaster> wm_mask;
  std::optional<ByteRaster> ventricle_mask;
  bool charted = false;

  void validate() const;
};

/// A connected charted or detected region.
struct BundleRegion {
  std::vector<PixelCoord> pixels;  // row-major sorted, nonempty, 8-connected
  double area_mm2 = 0.0;
  double centroid_row = 0.0;
  double centroid_col = 0.0;
  Severity severity = Severity::kPredictedUnclassified;
  double mean_probability = 0.0;

  int min_row() const;
  int min_col() const;
  int max_row() const;
  int max_col() const;
};

/// Per-pixel fiber probability aligned to one section.
struct ProbabilityMap {
  FloatRaster values;  // every value in [0,1]
  std::string section_id;

  void validate() const;
};

}  // namespace fibseg::core

#endif  // FIBSEG_CORE_TYPES_HPP
