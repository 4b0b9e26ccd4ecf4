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

#ifndef FIBSEG_CORE_REGIONS_HPP
#define FIBSEG_CORE_REGIONS_HPP

#include <vector>

#include "fibseg/core/raster.hpp"
#include "fibseg/core/types.hpp"

namespace fibseg::core {

/// 8-connected components of a binary mask (any nonzero pixel is foreground).
///
/// Deterministic: regions are ordered by their first pixel in row-major scan
/// order, and each region's pixel list is row-major sorted.  Area and
/// centroid fields are filled in; severity is left kPredictedUnclassified and
/// mean_probability 0 (callers overlay those when they have the data).
std::vector<BundleRegion> connected_components(const ByteRaster& mask, const Resolution& res);

/// |pixels| × (μm/px)² × 1e-6.
double area_mm2(const BundleRegion& region, const Resolution& res);

/// Paints the region's pixels into a mask raster with the given value.
void paint_region(const BundleRegion& region, ByteRaster& mask, std::uint8_t value = 1);

}  // namespace fibseg::core

#endif  // FIBSEG_CORE_REGIONS_HPP
