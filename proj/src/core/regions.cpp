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

#include "fibseg/core/regions.hpp"

#include <algorithm>
#include <vector>

namespace fibseg::core {

std::vector<BundleRegion> connected_components(const ByteRaster& mask, const Resolution& res) {
  res.validate();
  std::vector<BundleRegion> regions;
  if (mask.empty()) return regions;

  const int rows = mask.rows();
  const int cols = mask.cols();
  std::vector<char> visited(mask.size(), 0);
  std::vector<PixelCoord> stack;

  // Scanning row-major and flooding from each unvisited foreground pixel makes
  // the region order itself row-major by first pixel, with no post-sort needed.
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const size_t idx = static_cast<size_t>(r) * cols + c;
      if (visited[idx] || mask[idx] == 0) continue;

      BundleRegion region;
      stack.clear();
      stack.push_back({r, c});
      visited[idx] = 1;
      while (!stack.empty()) {
        const PixelCoord p = stack.back();
        stack.pop_back();
        region.pixels.push_back(p);
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            const int nr = p.row + dr;
            const int nc = p.col + dc;
            if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
            const size_t nidx = static_cast<size_t>(nr) * cols + nc;
            if (visited[nidx] || mask[nidx] == 0) continue;
            visited[nidx] = 1;
            stack.push_back({nr, nc});
          }
        }
      }
      std::sort(region.pixels.begin(), region.pixels.end());

      double sum_r = 0.0;
      double sum_c = 0.0;
      for (const auto& p : region.pixels) {
        sum_r += p.row;
        sum_c += p.col;
      }
      const double n = static_cast<double>(region.pixels.size());
      region.centroid_row = sum_r / n;
      region.centroid_col = sum_c / n;
      region.area_mm2 = area_mm2(region, res);
      regions.push_back(std::move(region));
    }
  }
  return regions;
}

double area_mm2(const BundleRegion& region, const Resolution& res) {
  res.validate();
  if (region.pixels.empty()) throw RuntimeFailure("region has no pixels");
  return static_cast<double>(region.pixels.size()) * res.mm2_per_pixel();
}

void paint_region(const BundleRegion& region, ByteRaster& mask, std::uint8_t value) {
  for (const auto& p : region.pixels) {
    if (!mask.in_bounds(p.row, p.col)) {
      throw RuntimeFailure("region pixel outside mask bounds while painting");
    }
    mask.at(p.row, p.col) = value;
  }
}

}  // namespace fibseg::core
