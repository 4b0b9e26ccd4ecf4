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

#ifndef FIBSEG_CORE_IMAGE_IO_HPP
#define FIBSEG_CORE_IMAGE_IO_HPP

#include <filesystem>

#include "fibseg/core/raster.hpp"

namespace fibseg::core {

// All readers/writers throw RuntimeFailure with the offending path on I/O
// errors and UsageError when the file is missing.

/// 8-bit RGB PNG.
RgbImage read_rgb_png(const std::filesystem::path& path);
void write_rgb_png(const RgbImage& image, const std::filesystem::path& path);

/// 8-bit single-channel PNG, raw values preserved.
ByteRaster read_gray_png(const std::filesystem::path& path);
void write_gray_png(const ByteRaster& raster, const std::filesystem::path& path);

/// Binary masks are stored as 0/255 gray PNG on disk and {0,1} in memory.
ByteRaster read_mask_png(const std::filesystem::path& path);
void write_mask_png(const ByteRaster& mask, const std::filesystem::path& path);

/// Single-channel 32-bit float TIFF (probability maps); lossless round-trip.
FloatRaster read_float_tiff(const std::filesystem::path& path);
void write_float_tiff(const FloatRaster& raster, const std::filesystem::path& path);

}  // namespace fibseg::core

#endif  // FIBSEG_CORE_IMAGE_IO_HPP
