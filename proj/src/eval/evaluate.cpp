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

#include "fibseg/eval/evaluate.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <opencv2/imgproc.hpp>

#include "fibseg/core/regions.hpp"

namespace fibseg::eval {

namespace {

constexpr double kClaheClipLimit = 2.0;
constexpr int kClaheTileGrid = 8;
constexpr double kFibDensPercentile = 0.95;

size_t intersection_size(const std::vector<core::PixelCoord>& a,
                         const std::vector<core::PixelCoord>& b) {
  size_t n = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

bool regions_match(const core::BundleRegion& pred, const core::BundleRegion& gt,
                   const MatchConfig& mc) {
  switch (mc.match_rule) {
    case MatchConfig::Rule::kAnyOverlap:
      return intersection_size(pred.pixels, gt.pixels) > 0;
    case MatchConfig::Rule::kIouThreshold:
      return region_iou(pred, gt) >= mc.iou_min;
  }
  throw core::RuntimeFailure("unknown match rule");
}

}  // namespace

void MatchConfig::validate() const {
  if (!(iou_min > 0.0 && iou_min <= 1.0)) {
    throw core::UsageError("match config: iou_min must be in (0, 1]");
  }
}

void DetectionCounts::absorb(const MatchResult& m) {
  dense_total += m.dense_total;
  dense_hit += m.dense_hit;
  moderate_total += m.moderate_total;
  moderate_hit += m.moderate_hit;
  false_positives += static_cast<int>(m.fp_pred_indices.size());
  n_sections += 1;
}

double region_iou(const core::BundleRegion& a, const core::BundleRegion& b) {
  const size_t inter = intersection_size(a.pixels, b.pixels);
  const size_t uni = a.pixels.size() + b.pixels.size() - inter;
  if (uni == 0) throw core::RuntimeFailure("IoU of two empty regions");
  return static_cast<double>(inter) / static_cast<double>(uni);
}

MatchResult match_regions(const std::vector<core::BundleRegion>& predicted,
                          const std::vector<core::BundleRegion>& gt_dense,
                          const std::vector<core::BundleRegion>& gt_moderate,
                          const MatchConfig& mc) {
  mc.validate();
  MatchResult result;
  result.dense_total = static_cast<int>(gt_dense.size());
  result.moderate_total = static_cast<int>(gt_moderate.size());

  std::vector<char> pred_used(predicted.size(), 0);

  auto score_class = [&](const std::vector<core::BundleRegion>& gts, core::Severity severity,
                         int& hit_counter) {
    for (size_t g = 0; g < gts.size(); ++g) {
      bool counted = false;
      for (size_t p = 0; p < predicted.size(); ++p) {
        if (!regions_match(predicted[p], gts[g], mc)) continue;
        pred_used[p] = 1;  // matching any GT bundle absolves the prediction
        if (!counted) {
          counted = true;  // each GT bundle counts at most once
          ++hit_counter;
          result.matches.push_back({severity, static_cast<int>(g), static_cast<int>(p)});
        }
        // Keep scanning the remaining predictions so every overlapping
        // prediction is absolved rather than flagged as a false positive.
      }
    }
  };
  score_class(gt_dense, core::Severity::kDense, result.dense_hit);
  score_class(gt_moderate, core::Severity::kModerate, result.moderate_hit);

  for (size_t p = 0; p < predicted.size(); ++p) {
    if (!pred_used[p]) result.fp_pred_indices.push_back(static_cast<int>(p));
  }
  return result;
}

std::optional<double> tpr(int hit, int total) {
  if (total < 0 || hit < 0 || hit > total) throw core::RuntimeFailure("inconsistent TPR counts");
  if (total == 0) return std::nullopt;  // undefined, reported as absent
  return static_cast<double>(hit) / static_cast<double>(total);
}

double fp_avg(const DetectionCounts& counts) {
  if (counts.n_sections < 1) throw core::UsageError("fp_avg needs at least one section");
  return static_cast<double>(counts.false_positives) / static_cast<double>(counts.n_sections);
}

double fib_dens(const core::SectionRecord& section, const core::BundleRegion& region) {
  if (region.pixels.empty()) throw core::RuntimeFailure("fib_dens of empty region");
  const int r0 = region.min_row();
  const int c0 = region.min_col();
  const int r1 = region.max_row();
  const int c1 = region.max_col();
  if (r0 < 0 || c0 < 0 || r1 >= section.image.rows() || c1 >= section.image.cols()) {
    throw core::RuntimeFailure("fib_dens region leaves the section image");
  }
  const int rows = r1 - r0 + 1;
  const int cols = c1 - c0 + 1;
  if (rows <= 1 || cols <= 1) {
    throw core::RuntimeFailure("fib_dens bounding box is degenerate (1 pixel wide or tall)");
  }

  // Inverted luminance: fiber streaks are dark on a brighter matrix, and the
  // percentile rule selects the HIGH tail, so the crop is flipped to make
  // fibers score high.
  cv::Mat crop(rows, cols, CV_8UC1);
  for (int r = 0; r < rows; ++r) {
    std::uint8_t* row = crop.ptr<std::uint8_t>(r);
    for (int c = 0; c < cols; ++c) {
      row[c] = static_cast<std::uint8_t>(255 - section.image.gray(r0 + r, c0 + c));
    }
  }

  // Grid clamped so tiles never collapse below one pixel on tiny crops.
  cv::Ptr<cv::CLAHE> clahe = cv::createCLAHE(
      kClaheClipLimit, cv::Size(std::min(kClaheTileGrid, cols), std::min(kClaheTileGrid, rows)));
  cv::Mat eq;
  clahe->apply(crop, eq);

  // Nearest-rank 95th percentile over the whole bounding-box crop.
  std::array<int, 256> hist{};
  const int n = rows * cols;
  for (int r = 0; r < rows; ++r) {
    const std::uint8_t* row = eq.ptr<std::uint8_t>(r);
    for (int c = 0; c < cols; ++c) ++hist[row[c]];
  }
  const int rank = static_cast<int>(std::ceil(kFibDensPercentile * n));
  int cumulative = 0;
  int percentile_value = 255;
  for (int v = 0; v < 256; ++v) {
    cumulative += hist[v];
    if (cumulative >= rank) {
      percentile_value = v;
      break;
    }
  }

  // Strict > comparison: a constant crop yields zero fiber pixels.
  size_t fiber = 0;
  for (const auto& p : region.pixels) {
    if (eq.at<std::uint8_t>(p.row - r0, p.col - c0) > percentile_value) ++fiber;
  }
  return static_cast<double>(fiber) / static_cast<double>(region.pixels.size());
}

double delta_fib_dens(const core::SectionRecord& section, const core::BundleRegion& manual_region,
                      const core::BundleRegion& predicted_region) {
  return (fib_dens(section, manual_region) - fib_dens(section, predicted_region)) * 100.0;
}

std::vector<core::BundleRegion> threshold_regions(const core::ProbabilityMap& prob,
                                                  const core::Resolution& res, double threshold) {
  core::ByteRaster mask(prob.values.rows(), prob.values.cols(), 0);
  // Maps are float32; compare in float32 so a pixel storing exactly the
  // threshold value is excluded rather than leaking past it via promotion.
  const float t = static_cast<float>(threshold);
  for (size_t i = 0; i < mask.size(); ++i) {
    mask[i] = prob.values[i] > t ? 1 : 0;
  }
  auto regions = core::connected_components(mask, res);
  for (auto& region : regions) {
    double sum = 0.0;
    for (const auto& p : region.pixels) sum += prob.values.at(p.row, p.col);
    region.mean_probability = sum / static_cast<double>(region.pixels.size());
  }
  return regions;
}

std::pair<std::vector<core::BundleRegion>, std::vector<core::BundleRegion>> charted_regions(
    const core::SectionRecord& section) {
  if (!section.charted || !section.charting) {
    throw core::UsageError("section '" + section.id + "' has no charting raster");
  }
  const auto& labels = *section.charting;
  auto split = [&](std::uint8_t wanted, core::Severity severity) {
    core::ByteRaster mask(labels.rows(), labels.cols(), 0);
    for (size_t i = 0; i < labels.size(); ++i) mask[i] = labels[i] == wanted ? 1 : 0;
    auto regions = core::connected_components(mask, section.resolution);
    for (auto& r : regions) r.severity = severity;
    return regions;
  };
  return {split(core::kLabelDense, core::Severity::kDense),
          split(core::kLabelModerate, core::Severity::kModerate)};
}

RegionPipeline default_pipeline() {
  return [](const core::ProbabilityMap& prob, const core::SectionRecord& section,
            double threshold) {
    return threshold_regions(prob, section.resolution, threshold);
  };
}

std::vector<double> froc_threshold_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 19; ++i) grid.push_back(static_cast<double>(i) / 20.0);
  // The fixed reporting threshold is part of the grid already; re-inserting
  // and deduplicating keeps that guaranteed even if the grid above changes.
  grid.push_back(0.4);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::vector<FrocPoint> froc_curve(const std::vector<core::ProbabilityMap>& prob_maps,
                                  const std::vector<core::SectionRecord>& sections,
                                  const std::vector<double>& thresholds, const MatchConfig& mc,
                                  const RegionPipeline& pipeline) {
  if (thresholds.size() < 2) throw core::UsageError("froc_curve needs at least two thresholds");
  if (prob_maps.empty()) throw core::UsageError("froc_curve needs at least one section");
  if (prob_maps.size() != sections.size()) {
    throw core::UsageError("froc_curve: probability maps and sections differ in count");
  }
  mc.validate();

  // Ground truth does not depend on the threshold; extract once.
  std::vector<std::vector<core::BundleRegion>> gt_dense(sections.size());
  std::vector<std::vector<core::BundleRegion>> gt_moderate(sections.size());
  for (size_t i = 0; i < sections.size(); ++i) {
    std::tie(gt_dense[i], gt_moderate[i]) = charted_regions(sections[i]);
  }

  std::vector<FrocPoint> points;
  points.reserve(thresholds.size());
  for (double threshold : thresholds) {
    DetectionCounts counts;
    for (size_t i = 0; i < sections.size(); ++i) {
      auto predicted = pipeline(prob_maps[i], sections[i], threshold);
      counts.absorb(match_regions(predicted, gt_dense[i], gt_moderate[i], mc));
    }
    FrocPoint point;
    point.threshold = threshold;
    point.tpr_dense = tpr(counts.dense_hit, counts.dense_total);
    point.tpr_moderate = tpr(counts.moderate_hit, counts.moderate_total);
    point.fp_per_section = fp_avg(counts);
    points.push_back(point);
  }
  return points;
}

namespace {

// Mean of whichever TPRs are defined; the y-coordinate used for the elbow.
double froc_y(const FrocPoint& p) {
  double sum = 0.0;
  int n = 0;
  if (p.tpr_dense) {
    sum += *p.tpr_dense;
    ++n;
  }
  if (p.tpr_moderate) {
    sum += *p.tpr_moderate;
    ++n;
  }
  return n > 0 ? sum / n : 0.0;
}

}  // namespace

FrocPoint elbow(const std::vector<FrocPoint>& points) {
  if (points.size() < 2) throw core::UsageError("elbow needs at least two FROC points");
  const double x0 = points.front().fp_per_section;
  const double y0 = froc_y(points.front());
  const double x1 = points.back().fp_per_section;
  const double y1 = froc_y(points.back());
  const double dx = x1 - x0;
  const double dy = y1 - y0;
  const double chord = std::hypot(dx, dy);
  if (chord == 0.0) return points.front();

  size_t best = 0;
  double best_dist = -1.0;
  for (size_t i = 0; i < points.size(); ++i) {
    const double px = points[i].fp_per_section - x0;
    const double py = froc_y(points[i]) - y0;
    const double dist = std::abs(dx * py - dy * px) / chord;
    if (dist > best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  return points[best];
}

}  // namespace fibseg::eval
