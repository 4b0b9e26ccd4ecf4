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

#include "fibseg/core/image_io.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "fibseg/core/error.hpp"

namespace fibseg::core {

namespace {

cv::Mat read_checked(const std::filesystem::path& path, int imread_flag, int expected_type,
                     const char* what) {
  if (!std::filesystem::exists(path)) {
    throw UsageError(std::string(what) + " not found: " + path.string());
  }
  cv::Mat m = cv::imread(path.string(), imread_flag);
  if (m.empty()) throw RuntimeFailure(std::string("failed to decode ") + what + ": " + path.string());
  if (m.type() != expected_type) {
    throw RuntimeFailure(std::string("unexpected pixel format in ") + what + ": " + path.string());
  }
  return m;
}

void write_checked(const cv::Mat& m, const std::filesystem::path& path, const char* what) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), m)) {
    throw RuntimeFailure(std::string("failed to write ") + what + ": " + path.string());
  }
}

}  // namespace

RgbImage read_rgb_png(const std::filesystem::path& path) {
  cv::Mat bgr = read_checked(path, cv::IMREAD_COLOR, CV_8UC3, "RGB image");
  RgbImage out(bgr.rows, bgr.cols);
  for (int r = 0; r < bgr.rows; ++r) {
    const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(r);
    for (int c = 0; c < bgr.cols; ++c) {
      out.at(r, c, 0) = row[c][2];
      out.at(r, c, 1) = row[c][1];
      out.at(r, c, 2) = row[c][0];
    }
  }
  return out;
}

void write_rgb_png(const RgbImage& image, const std::filesystem::path& path) {
  if (image.empty()) throw RuntimeFailure("refusing to write empty image: " + path.string());
  cv::Mat bgr(image.rows(), image.cols(), CV_8UC3);
  for (int r = 0; r < image.rows(); ++r) {
    cv::Vec3b* row = bgr.ptr<cv::Vec3b>(r);
    for (int c = 0; c < image.cols(); ++c) {
      row[c] = cv::Vec3b(image.at(r, c, 2), image.at(r, c, 1), image.at(r, c, 0));
    }
  }
  write_checked(bgr, path, "RGB image");
}

ByteRaster read_gray_png(const std::filesystem::path& path) {
  cv::Mat gray = read_checked(path, cv::IMREAD_GRAYSCALE, CV_8UC1, "gray image");
  ByteRaster out(gray.rows, gray.cols);
  for (int r = 0; r < gray.rows; ++r) {
    const std::uint8_t* row = gray.ptr<std::uint8_t>(r);
    std::copy(row, row + gray.cols, &out.at(r, 0));
  }
  return out;
}

void write_gray_png(const ByteRaster& raster, const std::filesystem::path& path) {
  if (raster.empty()) throw RuntimeFailure("refusing to write empty raster: " + path.string());
  cv::Mat gray(raster.rows(), raster.cols(), CV_8UC1);
  for (int r = 0; r < raster.rows(); ++r) {
    std::copy(&raster.at(r, 0), &raster.at(r, 0) + raster.cols(), gray.ptr<std::uint8_t>(r));
  }
  write_checked(gray, path, "gray image");
}

ByteRaster read_mask_png(const std::filesystem::path& path) {
  ByteRaster raw = read_gray_png(path);
  for (auto& v : raw.storage()) v = v != 0 ? 1 : 0;
  return raw;
}

void write_mask_png(const ByteRaster& mask, const std::filesystem::path& path) {
  ByteRaster scaled(mask.rows(), mask.cols());
  for (size_t i = 0; i < mask.size(); ++i) scaled[i] = mask[i] != 0 ? 255 : 0;
  write_gray_png(scaled, path);
}

FloatRaster read_float_tiff(const std::filesystem::path& path) {
  cv::Mat m = read_checked(path, cv::IMREAD_UNCHANGED, CV_32FC1, "float TIFF");
  FloatRaster out(m.rows, m.cols);
  for (int r = 0; r < m.rows; ++r) {
    const float* row = m.ptr<float>(r);
    std::copy(row, row + m.cols, &out.at(r, 0));
  }
  return out;
}

void write_float_tiff(const FloatRaster& raster, const std::filesystem::path& path) {
  if (raster.empty()) throw RuntimeFailure("refusing to write empty raster: " + path.string());
  cv::Mat m(raster.rows(), raster.cols(), CV_32FC1);
  for (int r = 0; r < raster.rows(); ++r) {
    std::copy(&raster.at(r, 0), &raster.at(r, 0) + raster.cols(), m.ptr<float>(r));
  }
  write_checked(m, path, "float TIFF");
}

}  // namespace fibseg::core
