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

#ifndef FIBSEG_CORE_DISTANCE_HPP
#define FIBSEG_CORE_DISTANCE_HPP

#include "fibseg/core/raster.hpp"

namespace fibseg::core {

/// Exact Euclidean distance transform: each output pixel holds the distance
/// in microns to the nearest nonzero pixel of `mask` (0 on foreground).
///
/// Uses the two-pass lower-envelope algorithm on squared distances, so the
/// result matches a brute-force nearest-foreground search exactly (up to
/// float rounding of the final sqrt).  An all-zero mask yields a raster
/// filled with +infinity.
FloatRaster distance_transform(const ByteRaster& mask, const Resolution& res);

}  // namespace fibseg::core

#endif  // FIBSEG_CORE_DISTANCE_HPP
