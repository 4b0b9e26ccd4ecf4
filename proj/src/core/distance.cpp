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

#include "fibseg/core/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace fibseg::core {

namespace {

constexpr double kBig = 1e20;

// 1-D squared-distance transform via the lower envelope of parabolas
// rooted at (q, f[q]).  Exact for integer grid offsets.
void dt1d(const std::vector<double>& f, std::vector<double>& d, int n) {
  static thread_local std::vector<int> v;
  static thread_local std::vector<double> z;
  v.assign(n, 0);
  z.assign(n + 1, 0.0);

  int k = 0;
  v[0] = 0;
  z[0] = -kBig;
  z[1] = kBig;
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kBig;
  }

  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

FloatRaster distance_transform(const ByteRaster& mask, const Resolution& res) {
  res.validate();
  const int rows = mask.rows();
  const int cols = mask.cols();
  FloatRaster out(rows, cols, 0.0f);

  bool any_foreground = false;
  for (std::uint8_t v : mask.storage()) {
    if (v != 0) {
      any_foreground = true;
      break;
    }
  }
  if (!any_foreground) {
    std::fill(out.storage().begin(), out.storage().end(), std::numeric_limits<float>::infinity());
    return out;
  }

  std::vector<double> grid(mask.size());
  for (size_t i = 0; i < mask.size(); ++i) grid[i] = mask[i] != 0 ? 0.0 : kBig;

  // Columns first, then rows; the two 1-D passes compose into the exact 2-D
  // squared Euclidean distance.
  std::vector<double> f(std::max(rows, cols));
  std::vector<double> d(std::max(rows, cols));
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) f[r] = grid[static_cast<size_t>(r) * cols + c];
    dt1d(f, d, rows);
    for (int r = 0; r < rows; ++r) grid[static_cast<size_t>(r) * cols + c] = d[r];
  }
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) f[c] = grid[static_cast<size_t>(r) * cols + c];
    dt1d(f, d, cols);
    for (int c = 0; c < cols; ++c) grid[static_cast<size_t>(r) * cols + c] = d[c];
  }

  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<float>(std::sqrt(grid[i]) * res.microns_per_pixel);
  }
  return out;
}

}  // namespace fibseg::core
