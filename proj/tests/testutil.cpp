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

#include "testutil.hpp"

#include <opencv2/imgproc.hpp>

namespace fibseg::testutil {

double oracle_fib_dens(const core::SectionRecord& section, const core::BundleRegion& region) {
  int r0 = region.pixels.front().row, r1 = r0, c0 = region.pixels.front().col, c1 = c0;
  for (const auto& p : region.pixels) {
    r0 = std::min(r0, p.row);
    r1 = std::max(r1, p.row);
    c0 = std::min(c0, p.col);
    c1 = std::max(c1, p.col);
  }
  const int rows = r1 - r0 + 1;
  const int cols = c1 - c0 + 1;

  // Own inverted-luminance crop (Rec.601, rounded), not RgbImage::gray.
  cv::Mat crop(rows, cols, CV_8UC1);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double red = section.image.at(r0 + r, c0 + c, 0);
      const double green = section.image.at(r0 + r, c0 + c, 1);
      const double blue = section.image.at(r0 + r, c0 + c, 2);
      const int gray = static_cast<int>(0.299 * red + 0.587 * green + 0.114 * blue + 0.5);
      crop.at<std::uint8_t>(r, c) = static_cast<std::uint8_t>(255 - gray);
    }
  }

  auto clahe = cv::createCLAHE(2.0, cv::Size(std::min(8, cols), std::min(8, rows)));
  cv::Mat eq;
  clahe->apply(crop, eq);

  std::vector<std::uint8_t> values;
  values.reserve(static_cast<size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) values.push_back(eq.at<std::uint8_t>(r, c));
  }
  std::sort(values.begin(), values.end());
  const size_t rank = static_cast<size_t>(std::ceil(0.95 * static_cast<double>(values.size())));
  const std::uint8_t threshold = values[rank - 1];

  std::set<core::PixelCoord> member(region.pixels.begin(), region.pixels.end());
  size_t fiber = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (eq.at<std::uint8_t>(r, c) > threshold && member.count({r0 + r, c0 + c})) ++fiber;
    }
  }
  return static_cast<double>(fiber) / static_cast<double>(region.pixels.size());
}

}  // namespace fibseg::testutil
