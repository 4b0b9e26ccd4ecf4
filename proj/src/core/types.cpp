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

#include "fibseg/core/types.hpp"

#include <algorithm>
#include <limits>

namespace fibseg::core {

std::string to_string(Severity s) {
  switch (s) {
    case Severity::kDense:
      return "dense";
    case Severity::kModerate:
      return "moderate";
    case Severity::kPredictedUnclassified:
      return "predicted-unclassified";
  }
  throw RuntimeFailure("unknown severity value");
}

Severity severity_from_string(const std::string& s) {
  if (s == "dense") return Severity::kDense;
  if (s == "moderate") return Severity::kModerate;
  if (s == "predicted-unclassified") return Severity::kPredictedUnclassified;
  throw UsageError("unknown severity string: '" + s + "'");
}

namespace {

void require_same_shape(const char* name, const ByteRaster& r, int rows, int cols,
                        const std::string& id) {
  if (!r.same_shape(rows, cols)) {
    throw RuntimeFailure("section '" + id + "': " + name + " raster does not match image shape");
  }
}

}  // namespace

void SectionRecord::validate() const {
  if (image.empty()) throw RuntimeFailure("section '" + id + "': empty image");
  resolution.validate();
  const int rows = image.rows();
  const int cols = image.cols();
  if (charting.has_value() != charted) {
    throw RuntimeFailure("section '" + id + "': charting raster present iff charted flag set");
  }
  if (charting) {
    require_same_shape("charting", *charting, rows, cols, id);
    for (std::uint8_t v : charting->storage()) {
      if (v > kLabelDense) {
        throw RuntimeFailure("section '" + id + "': charting label values must be in {0,1,2}");
      }
    }
  }
  if (tissue_mask) require_same_shape("tissue_mask", *tissue_mask, rows, cols, id);
  if (wm_mask) require_same_shape("wm_mask", *wm_mask, rows, cols, id);
  if (ventricle_mask) require_same_shape("ventricle_mask", *ventricle_mask, rows, cols, id);
}

int BundleRegion::min_row() const {
  int v = std::numeric_limits<int>::max();
  for (const auto& p : pixels) v = std::min(v, p.row);
  return v;
}

int BundleRegion::min_col() const {
  int v = std::numeric_limits<int>::max();
  for (const auto& p : pixels) v = std::min(v, p.col);
  return v;
}

int BundleRegion::max_row() const {
  int v = std::numeric_limits<int>::min();
  for (const auto& p : pixels) v = std::max(v, p.row);
  return v;
}

int BundleRegion::max_col() const {
  int v = std::numeric_limits<int>::min();
  for (const auto& p : pixels) v = std::max(v, p.col);
  return v;
}

void ProbabilityMap::validate() const {
  for (float v : values.storage()) {
    if (!(v >= 0.0f && v <= 1.0f)) {
      throw RuntimeFailure("probability map '" + section_id + "': value outside [0,1]");
    }
  }
}

}  // namespace fibseg::core
