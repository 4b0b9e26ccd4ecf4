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

#ifndef FIBSEG_EVAL_EVALUATE_HPP
#define FIBSEG_EVAL_EVALUATE_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "fibseg/core/types.hpp"

namespace fibseg::eval {

/// How a predicted region is matched against a ground-truth bundle.  Default
/// is any pixel overlap; an IoU floor is selectable since charting boundaries
/// are imprecise and the bundle-level counting rule is a free parameter.
struct MatchConfig {
  enum class Rule {
    kAnyOverlap,
    kIouThreshold,
  };
  Rule match_rule = Rule::kAnyOverlap;
  double iou_min = 0.1;

  void validate() const;
};

/// One ground-truth bundle hit by one predicted region.
struct RegionMatch {
  core::Severity gt_severity = core::Severity::kDense;
  int gt_index = 0;    // into the gt list of that severity
  int pred_index = 0;  // into the predicted list
};

/// Bundle-level matching outcome for a single section.
struct MatchResult {
  int dense_total = 0;
  int dense_hit = 0;
  int moderate_total = 0;
  int moderate_hit = 0;
  std::vector<int> fp_pred_indices;  // predicted regions matching no GT bundle
  std::vector<RegionMatch> matches;  // first hit per GT bundle
};

/// Totals accumulated over an evaluation set.
struct DetectionCounts {
  int dense_total = 0;
  int dense_hit = 0;
  int moderate_total = 0;
  int moderate_hit = 0;
  int false_positives = 0;
  int n_sections = 0;

  void absorb(const MatchResult& m);
};

/// One sample of the FROC curve.  TPRs are absent when that severity has no
/// ground-truth bundles in the evaluation set (undefined, not zero).
struct FrocPoint {
  double threshold = 0.0;
  std::optional<double> tpr_dense;
  std::optional<double> tpr_moderate;
  double fp_per_section = 0.0;
};

/// Intersection-over-union of two regions' pixel sets (pixel lists must be
/// row-major sorted, as produced by connected_components).
double region_iou(const core::BundleRegion& a, const core::BundleRegion& b);

/// Matches predicted regions against per-severity GT bundles.  A GT bundle is
/// hit if any predicted region satisfies the rule; one predicted region may
/// hit several GT bundles, but each GT bundle counts at most once.  Predicted
/// regions hitting no GT bundle of either severity are false positives.
MatchResult match_regions(const std::vector<core::BundleRegion>& predicted,
                          const std::vector<core::BundleRegion>& gt_dense,
                          const std::vector<core::BundleRegion>& gt_moderate,
                          const MatchConfig& mc);

/// hits / total for one severity; absent when no GT bundles exist (undefined
/// rather than zero).
std::optional<double> tpr(int hit, int total);

/// false positives / number of test sections.  UsageError if n_sections < 1.
double fp_avg(const DetectionCounts& counts);

/// Fiber-density ratio of a region: grayscale bounding-box crop (luminance
/// inverted so the dark fiber streaks score high), CLAHE (clip 2.0, 8x8 tile
/// grid), binarized at the 95th percentile (nearest-rank) of the equalized
/// crop with strict >, counting fiber pixels inside the region over region
/// area.  RuntimeFailure on a degenerate (1-pixel-wide or -tall) bounding box
/// or a region leaving the image.
double fib_dens(const core::SectionRecord& section, const core::BundleRegion& region);

/// (fib_dens(manual) - fib_dens(predicted)) x 100; negative means the
/// predicted region captured proportionally more fibers.
double delta_fib_dens(const core::SectionRecord& section, const core::BundleRegion& manual_region,
                      const core::BundleRegion& predicted_region);

/// Binarizes a probability map with strict p > threshold and returns its
/// 8-connected regions with mean_probability filled in.
std::vector<core::BundleRegion> threshold_regions(const core::ProbabilityMap& prob,
                                                  const core::Resolution& res, double threshold);

/// Splits a charted section's label raster into (dense, moderate) bundle
/// lists with severities set.  UsageError if the section is not charted.
std::pair<std::vector<core::BundleRegion>, std::vector<core::BundleRegion>> charted_regions(
    const core::SectionRecord& section);

/// Produces detection regions for one section at one threshold; the default
/// pipeline is threshold_regions, and callers compose continuity filtering /
/// postprocessing on top.
using RegionPipeline = std::function<std::vector<core::BundleRegion>(
    const core::ProbabilityMap&, const core::SectionRecord&, double threshold)>;

RegionPipeline default_pipeline();

/// The standard threshold grid: 0.05 to 0.95 in steps of 0.05; always
/// contains 0.40 (the fixed reporting threshold).
std::vector<double> froc_threshold_grid();

/// One FrocPoint per threshold over the paired (probability map, section)
/// evaluation set.  Sections must be charted.  UsageError if fewer than two
/// thresholds, if the set is empty, or if maps and sections disagree.
std::vector<FrocPoint> froc_curve(const std::vector<core::ProbabilityMap>& prob_maps,
                                  const std::vector<core::SectionRecord>& sections,
                                  const std::vector<double>& thresholds, const MatchConfig& mc,
                                  const RegionPipeline& pipeline);

/// The curve's elbow: the point with maximum perpendicular distance to the
/// chord between the curve's endpoints, in the raw (fp_per_section, mean TPR)
/// plane.  Points must be ordered as returned by froc_curve.  UsageError on
/// fewer than two points; with a degenerate (zero-length) chord the first
/// point is returned.
FrocPoint elbow(const std::vector<FrocPoint>& points);

}  // namespace fibseg::eval

#endif  // FIBSEG_EVAL_EVALUATE_HPP
