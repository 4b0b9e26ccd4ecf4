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

#include <doctest.h>

#include <cmath>
#include <random>

#include "fibseg/core/regions.hpp"
#include "fibseg/eval/evaluate.hpp"
#include "testutil.hpp"

using namespace fibseg;
using core::BundleRegion;
using core::ByteRaster;
using core::PixelCoord;
using core::Resolution;

namespace {

const Resolution kRes{1.6, 400.0};

BundleRegion block_region(int r0, int c0, int rows, int cols) {
  BundleRegion region;
  for (int r = r0; r < r0 + rows; ++r) {
    for (int c = c0; c < c0 + cols; ++c) region.pixels.push_back({r, c});
  }
  std::sort(region.pixels.begin(), region.pixels.end());
  return region;
}

core::SectionRecord noise_section(int rows, int cols, unsigned seed, int lo = 0, int hi = 255) {
  core::SectionRecord s;
  s.id = "noise";
  s.resolution = kRes;
  s.image = core::RgbImage(rows, cols);
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> d(lo, hi);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const auto v = static_cast<std::uint8_t>(d(rng));
      s.image.at(r, c, 0) = v;
      s.image.at(r, c, 1) = v;
      s.image.at(r, c, 2) = v;
    }
  }
  return s;
}

void set_gray(core::SectionRecord& s, int r, int c, std::uint8_t v) {
  s.image.at(r, c, 0) = v;
  s.image.at(r, c, 1) = v;
  s.image.at(r, c, 2) = v;
}

}  // namespace

TEST_CASE("match_regions basic counting") {
  // Three GT bundles, predictions overlap two of them.
  auto gt1 = block_region(0, 0, 3, 3);
  auto gt2 = block_region(10, 10, 3, 3);
  auto gt3 = block_region(20, 20, 3, 3);
  auto p1 = block_region(1, 1, 3, 3);    // overlaps gt1
  auto p2 = block_region(11, 11, 2, 2);  // overlaps gt2
  auto p3 = block_region(40, 40, 2, 2);  // matches nothing

  eval::MatchConfig mc;
  auto m = eval::match_regions({p1, p2, p3}, {gt1, gt2, gt3}, {}, mc);
  CHECK(m.dense_total == 3);
  CHECK(m.dense_hit == 2);
  CHECK(m.moderate_total == 0);
  REQUIRE(m.fp_pred_indices.size() == 1);
  CHECK(m.fp_pred_indices[0] == 2);

  auto none = eval::match_regions({}, {gt1, gt2, gt3}, {}, mc);
  CHECK(none.dense_hit == 0);
  CHECK(none.fp_pred_indices.empty());
}

TEST_CASE("match_regions: one prediction may hit several GT bundles; each GT counts once") {
  auto gt1 = block_region(0, 0, 2, 2);
  auto gt2 = block_region(0, 6, 2, 2);
  auto wide = block_region(0, 0, 2, 8);  // spans both
  eval::MatchConfig mc;
  auto m = eval::match_regions({wide, wide}, {gt1, gt2}, {}, mc);
  CHECK(m.dense_hit == 2);        // both GT hit
  CHECK(m.fp_pred_indices.empty());
  CHECK(m.matches.size() == 2);   // one recorded pair per GT
}

TEST_CASE("match_regions: prediction hitting only moderate GT is not an FP") {
  auto gt_mod = block_region(5, 5, 3, 3);
  auto pred = block_region(6, 6, 2, 2);
  eval::MatchConfig mc;
  auto m = eval::match_regions({pred}, {}, {gt_mod}, mc);
  CHECK(m.moderate_hit == 1);
  CHECK(m.fp_pred_indices.empty());
}

TEST_CASE("match_regions decisions equal the brute-force IoU oracle on random instances") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    // Random small blocks with random placement → plenty of partial overlaps.
    auto random_block = [&]() {
      std::uniform_int_distribution<int> pos(0, 20);
      std::uniform_int_distribution<int> len(1, 6);
      return block_region(pos(rng), pos(rng), len(rng), len(rng));
    };
    std::vector<BundleRegion> preds, dense, moderate;
    std::uniform_int_distribution<int> n(0, 4);
    for (int i = n(rng); i > 0; --i) preds.push_back(random_block());
    for (int i = n(rng); i > 0; --i) dense.push_back(random_block());
    for (int i = n(rng); i > 0; --i) moderate.push_back(random_block());

    for (double iou_min : {0.0, 0.1, 0.3}) {
      eval::MatchConfig mc;
      if (iou_min > 0.0) {
        mc.match_rule = eval::MatchConfig::Rule::kIouThreshold;
        mc.iou_min = iou_min;
      }
      auto decide = [&](const BundleRegion& p, const BundleRegion& g) {
        const double iou = testutil::oracle_iou(p, g);
        return iou_min > 0.0 ? iou >= iou_min : iou > 0.0;
      };

      auto m = eval::match_regions(preds, dense, moderate, mc);

      int want_dense = 0;
      for (const auto& g : dense) {
        for (const auto& p : preds) {
          if (decide(p, g)) {
            ++want_dense;
            break;
          }
        }
      }
      int want_moderate = 0;
      for (const auto& g : moderate) {
        for (const auto& p : preds) {
          if (decide(p, g)) {
            ++want_moderate;
            break;
          }
        }
      }
      int want_fp = 0;
      for (const auto& p : preds) {
        bool hits = false;
        for (const auto& g : dense) hits = hits || decide(p, g);
        for (const auto& g : moderate) hits = hits || decide(p, g);
        if (!hits) ++want_fp;
      }
      CHECK(m.dense_hit == want_dense);
      CHECK(m.moderate_hit == want_moderate);
      CHECK(static_cast<int>(m.fp_pred_indices.size()) == want_fp);
    }
  }
}

TEST_CASE("tpr and fp_avg exact ratios and absent case") {
  CHECK(*eval::tpr(9, 10) == doctest::Approx(0.90));
  CHECK_FALSE(eval::tpr(0, 0).has_value());

  eval::DetectionCounts counts;
  counts.false_positives = 8;
  counts.n_sections = 4;
  CHECK(eval::fp_avg(counts) == doctest::Approx(2.0));

  counts.n_sections = 0;
  CHECK_THROWS_AS(eval::fp_avg(counts), core::UsageError);
}

TEST_CASE("fib_dens on a uniform-noise crop concentrates near 0.05") {
  auto section = noise_section(220, 220, 42);
  auto region = block_region(10, 10, 200, 200);
  const double fd = eval::fib_dens(section, region);
  CHECK(fd == doctest::Approx(0.05).epsilon(0.2));  // 0.05 +/- 0.01
  CHECK(fd >= 0.0);
  CHECK(fd <= 1.0);
}

TEST_CASE("fib_dens of a constant crop is zero (strict > tie rule)") {
  core::SectionRecord s;
  s.id = "flat";
  s.resolution = kRes;
  s.image = core::RgbImage(40, 40, 180);
  auto region = block_region(5, 5, 20, 20);
  CHECK(eval::fib_dens(s, region) == doctest::Approx(0.0));
}

TEST_CASE("fib_dens rejects degenerate bounding boxes") {
  auto section = noise_section(30, 30, 1);
  BundleRegion line;
  for (int c = 2; c < 12; ++c) line.pixels.push_back({4, c});  // 1 px tall
  CHECK_THROWS_AS(eval::fib_dens(section, line), core::RuntimeFailure);

  BundleRegion outside = block_region(25, 25, 10, 10);  // leaves the image
  CHECK_THROWS_AS(eval::fib_dens(section, outside), core::RuntimeFailure);
}

TEST_CASE("fib_dens equals the from-scratch oracle on random sections") {
  for (unsigned seed = 0; seed < 8; ++seed) {
    auto section = noise_section(64, 64, 300 + seed);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pos(0, 30);
    std::uniform_int_distribution<int> len(2, 30);
    auto region = block_region(pos(rng), pos(rng), len(rng), len(rng));
    // Punch some extreme dark pixels in so the high tail is nontrivial.
    for (int k = 0; k < 20; ++k) {
      set_gray(section, pos(rng), pos(rng), 0);
    }
    const double got = eval::fib_dens(section, region);
    const double want = testutil::oracle_fib_dens(section, region);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("fib_dens matches oracle on non-rectangular regions") {
  auto section = noise_section(50, 50, 77);
  BundleRegion blob;
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> pos(5, 40);
  std::set<PixelCoord> seen;
  for (int k = 0; k < 250; ++k) seen.insert({pos(rng), pos(rng)});
  blob.pixels.assign(seen.begin(), seen.end());
  const double got = eval::fib_dens(section, blob);
  const double want = testutil::oracle_fib_dens(section, blob);
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("delta_fib_dens sign convention and exactness") {
  // 120x120 bright-noise section; bundles are sparse dark streak pixels.
  auto section = noise_section(120, 120, 7, 180, 230);

  // Manual region: blob occupying half its bounding box, 1% dark inside.
  BundleRegion manual;
  for (int r = 10; r < 60; ++r) {
    for (int c = 10; c < 60; ++c) {
      if ((r + c) % 2 == 0) manual.pixels.push_back({r, c});
    }
  }
  std::sort(manual.pixels.begin(), manual.pixels.end());
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> idx(0, static_cast<int>(manual.pixels.size()) - 1);
  for (int k = 0; k < 12; ++k) {
    const auto& p = manual.pixels[idx(rng)];
    set_gray(section, p.row, p.col, 5);
  }

  // Predicted superset: adds a strip whose pixels are much darker on average.
  BundleRegion predicted = manual;
  for (int r = 10; r < 60; ++r) {
    for (int c = 60; c < 70; ++c) {
      if ((r + c) % 2 == 0) {
        predicted.pixels.push_back({r, c});
        if (r % 3 == 0) set_gray(section, r, c, 5);
      }
    }
  }
  std::sort(predicted.pixels.begin(), predicted.pixels.end());

  CHECK(eval::delta_fib_dens(section, manual, manual) == doctest::Approx(0.0));

  const double delta = eval::delta_fib_dens(section, manual, predicted);
  CHECK(delta < -1.0);  // predicted captured proportionally more fibers

  // Pixel-count oracle route.
  const double want =
      (testutil::oracle_fib_dens(section, manual) - testutil::oracle_fib_dens(section, predicted)) *
      100.0;
  CHECK(delta == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("threshold_regions uses strict > and fills mean probability") {
  core::ProbabilityMap pm;
  pm.section_id = "s";
  pm.values = core::FloatRaster(5, 5, 0.0f);
  pm.values.at(1, 1) = 0.4f;  // exactly at threshold: excluded
  pm.values.at(3, 3) = 0.8f;
  pm.values.at(3, 4) = 0.6f;

  auto regions = eval::threshold_regions(pm, kRes, 0.4);
  REQUIRE(regions.size() == 1);
  CHECK(regions[0].pixels.size() == 2);
  CHECK(regions[0].mean_probability == doctest::Approx(0.7));
}

TEST_CASE("charted_regions splits severities") {
  core::SectionRecord s;
  s.id = "sec";
  s.resolution = kRes;
  s.image = core::RgbImage(10, 10, 128);
  ByteRaster charting(10, 10, 0);
  charting.at(1, 1) = core::kLabelDense;
  charting.at(1, 2) = core::kLabelDense;
  charting.at(7, 7) = core::kLabelModerate;
  s.charting = charting;
  s.charted = true;

  auto [dense, moderate] = eval::charted_regions(s);
  REQUIRE(dense.size() == 1);
  CHECK(dense[0].pixels.size() == 2);
  CHECK(dense[0].severity == core::Severity::kDense);
  REQUIRE(moderate.size() == 1);
  CHECK(moderate[0].severity == core::Severity::kModerate);

  s.charted = false;
  s.charting.reset();
  CHECK_THROWS_AS(eval::charted_regions(s), core::UsageError);
}

namespace {

/// A compact unimodal probability bump: value decays with Chebyshev distance
/// from the peak, so raising the threshold always shrinks (never splits) the
/// detected region.
void paint_bump(core::FloatRaster& values, int pr, int pc, double peak, int radius) {
  for (int r = std::max(0, pr - radius); r <= std::min(values.rows() - 1, pr + radius); ++r) {
    for (int c = std::max(0, pc - radius); c <= std::min(values.cols() - 1, pc + radius); ++c) {
      const int d = std::max(std::abs(r - pr), std::abs(c - pc));
      const float v = static_cast<float>(peak * (1.0 - static_cast<double>(d) / (radius + 1)));
      values.at(r, c) = std::max(values.at(r, c), v);
    }
  }
}

}  // namespace

TEST_CASE("froc_curve endpoints and monotonicity on bump fixtures") {
  // Two sections, each one dense GT bundle; probability maps have a strong
  // bump on the bundle and weaker spurious bumps elsewhere.
  std::vector<core::SectionRecord> sections;
  std::vector<core::ProbabilityMap> maps;
  for (int i = 0; i < 2; ++i) {
    core::SectionRecord s;
    s.id = "s" + std::to_string(i);
    s.resolution = kRes;
    s.image = core::RgbImage(40, 40, 128);
    ByteRaster charting(40, 40, 0);
    for (int r = 8; r < 14; ++r) {
      for (int c = 8; c < 14; ++c) charting.at(r, c) = core::kLabelDense;
    }
    s.charting = charting;
    s.charted = true;
    sections.push_back(std::move(s));

    core::ProbabilityMap pm;
    pm.section_id = "s" + std::to_string(i);
    pm.values = core::FloatRaster(40, 40, 0.0f);
    paint_bump(pm.values, 10, 10, 0.95, 5);   // true bundle
    paint_bump(pm.values, 30, 30, 0.55, 3);   // spurious
    paint_bump(pm.values, 30, 10, 0.30 + 0.1 * i, 2);  // weaker spurious
    maps.push_back(std::move(pm));
  }

  auto grid = eval::froc_threshold_grid();
  REQUIRE(grid.size() == 19);
  CHECK(grid.front() == doctest::Approx(0.05));
  CHECK(grid.back() == doctest::Approx(0.95));
  CHECK(std::count_if(grid.begin(), grid.end(),
                      [](double t) { return t == 0.4; }) == 1);

  eval::MatchConfig mc;
  auto points = eval::froc_curve(maps, sections, grid, mc, eval::default_pipeline());
  REQUIRE(points.size() == grid.size());

  // Endpoints: lowest threshold catches everything (max TPR, max FP);
  // highest threshold is above every bump → nothing detected.
  CHECK(*points.front().tpr_dense == doctest::Approx(1.0));
  CHECK(points.front().fp_per_section > 0.0);
  CHECK(*points.back().tpr_dense == doctest::Approx(0.0));
  CHECK(points.back().fp_per_section == doctest::Approx(0.0));

  for (size_t i = 1; i < points.size(); ++i) {
    CHECK(points[i].fp_per_section <= points[i - 1].fp_per_section);
    CHECK(*points[i].tpr_dense <= *points[i - 1].tpr_dense);
    CHECK_FALSE(points[i].tpr_moderate.has_value());  // no moderate GT anywhere
  }
}

TEST_CASE("froc_curve input validation") {
  eval::MatchConfig mc;
  CHECK_THROWS_AS(eval::froc_curve({}, {}, {0.1, 0.2}, mc, eval::default_pipeline()),
                  core::UsageError);
  core::ProbabilityMap pm;
  pm.values = core::FloatRaster(4, 4, 0.0f);
  core::SectionRecord s;
  s.id = "x";
  s.image = core::RgbImage(4, 4, 0);
  s.resolution = kRes;
  s.charting = ByteRaster(4, 4, 0);
  s.charted = true;
  CHECK_THROWS_AS(eval::froc_curve({pm}, {s}, {0.5}, mc, eval::default_pipeline()),
                  core::UsageError);  // single threshold
}

TEST_CASE("elbow picks the corner of a right-angle curve") {
  // Curve (fp, tpr): (0,1) → (0.1,1) → (0.1,0); chord from (0,1) to (0.1,0).
  auto mk = [](double fp, double t, double thr) {
    eval::FrocPoint p;
    p.threshold = thr;
    p.tpr_dense = t;
    p.tpr_moderate = t;
    p.fp_per_section = fp;
    return p;
  };
  std::vector<eval::FrocPoint> pts{mk(0.0, 1.0, 0.9), mk(0.1, 1.0, 0.5), mk(0.1, 0.0, 0.1)};
  auto e = eval::elbow(pts);
  CHECK(e.fp_per_section == doctest::Approx(0.1));
  CHECK(*e.tpr_dense == doctest::Approx(1.0));
  CHECK(e.threshold == doctest::Approx(0.5));

  CHECK_THROWS_AS(eval::elbow({mk(0, 1, 0.5)}), core::UsageError);
}
