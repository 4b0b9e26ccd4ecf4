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

#include "fibseg/synth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fibseg/core/image_io.hpp"
#include "fibseg/core/manifest.hpp"

namespace fibseg::synth {

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Deterministic hashing / RNG streams
// ---------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
  return std::mt19937_64(hash_key(seed, stream, index));
}

// Stream tags (arbitrary distinct constants).
constexpr std::uint64_t kStreamLayout = 0x01;
constexpr std::uint64_t kStreamTexture = 0x02;
constexpr std::uint64_t kStreamStreaks = 0x03;
constexpr std::uint64_t kStreamConfound = 0x04;

// Lattice value in [0,1) for integer lattice coordinates.
double lattice_value(std::uint64_t seed, std::int64_t iy, std::int64_t ix) {
  const std::uint64_t h = splitmix64(splitmix64(seed ^ static_cast<std::uint64_t>(iy) * 0x9e3779b1ULL) ^
                                     static_cast<std::uint64_t>(ix) * 0x85ebca6bULL);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double smooth01(double t) { return t * t * (3.0 - 2.0 * t); }

// Smooth value noise in [0,1]: bilinear interpolation of hashed lattice
// values with two octaves.
double value_noise(std::uint64_t seed, double y, double x, double cell) {
  double total = 0.0;
  double weight_sum = 0.0;
  double w = 0.7;
  double c = cell;
  for (int octave = 0; octave < 2; ++octave) {
    const double fy = y / c;
    const double fx = x / c;
    const auto iy = static_cast<std::int64_t>(std::floor(fy));
    const auto ix = static_cast<std::int64_t>(std::floor(fx));
    const double ty = smooth01(fy - static_cast<double>(iy));
    const double tx = smooth01(fx - static_cast<double>(ix));
    const std::uint64_t s = seed + 0x100 * static_cast<std::uint64_t>(octave);
    const double v00 = lattice_value(s, iy, ix);
    const double v01 = lattice_value(s, iy, ix + 1);
    const double v10 = lattice_value(s, iy + 1, ix);
    const double v11 = lattice_value(s, iy + 1, ix + 1);
    const double v = (v00 * (1 - tx) + v01 * tx) * (1 - ty) + (v10 * (1 - tx) + v11 * tx) * ty;
    total += w * v;
    weight_sum += w;
    w *= 0.45;
    c *= 0.37;
  }
  return total / weight_sum;
}

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

struct Vec2 {
  double y = 0.0;
  double x = 0.0;
};

struct Ellipse {
  double cy = 0.0, cx = 0.0;  // center
  double ry = 1.0, rx = 1.0;  // semi-axes (rx along local x before rotation)
  double rot = 0.0;           // radians

  bool contains(double y, double x) const {
    const double dy = y - cy;
    const double dx = x - cx;
    const double cs = std::cos(rot);
    const double sn = std::sin(rot);
    const double u = cs * dx + sn * dy;   // local x
    const double v = -sn * dx + cs * dy;  // local y
    return (u * u) / (rx * rx) + (v * v) / (ry * ry) <= 1.0;
  }

  // Support extent along unit direction w (how far the ellipse reaches from
  // its center in that direction).
  double support(double wy, double wx) const {
    const double cs = std::cos(rot);
    const double sn = std::sin(rot);
    const double ax = wx * cs + wy * sn;   // projection on local x axis
    const double ay = -wx * sn + wy * cs;  // projection on local y axis
    return std::sqrt(rx * rx * ax * ax + ry * ry * ay * ay);
  }

  Vec2 boundary_point(double angle) const {
    const double lu = rx * std::cos(angle);
    const double lv = ry * std::sin(angle);
    const double cs = std::cos(rot);
    const double sn = std::sin(rot);
    return {cy + sn * lu + cs * lv, cx + cs * lu - sn * lv};
  }

  double area_px() const { return kPi * rx * ry; }

  Ellipse shifted(double dy, double dx) const { return {cy + dy, cx + dx, ry, rx, rot}; }
  Ellipse grown(double d) const { return {cy, cx, ry + d, rx + d, rot}; }
};

// Smooth bounded drift: per-axis sinusoids whose adjacent-section step stays
// safely under the configured bound, leaving headroom for rasterization
// wobble of the region centroids.  Below half a pixel the drift is zeroed —
// sub-pixel motion cannot be guaranteed through rasterization.
struct DriftPath {
  double amp_y = 0.0, amp_x = 0.0;
  double omega = 0.35;
  double phase_y = 0.0, phase_x = 0.0;

  static DriftPath make(double drift_px, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    DriftPath p;
    p.phase_y = phase(rng);
    p.phase_x = phase(rng);
    const double step_target = drift_px < 0.5 ? 0.0 : 0.8 * drift_px - 0.1;
    const double per_axis_step = step_target / std::sqrt(2.0);
    p.amp_y = per_axis_step / p.omega;
    p.amp_x = per_axis_step / p.omega;
    return p;
  }

  Vec2 offset(int k) const {
    return {amp_y * std::sin(omega * k + phase_y), amp_x * std::sin(omega * k + phase_x)};
  }

  double max_abs() const { return std::hypot(amp_y, amp_x); }
};

struct BundleSpec {
  Ellipse shape;  // at drift offset zero
  double streak_density = 0.1;
  core::Severity severity = core::Severity::kDense;
};

struct CorridorSpec {
  DriftPath drift;
  std::vector<BundleSpec> bundles;  // bundles[0] is the dense one
};

struct StackLayout {
  Ellipse tissue;
  Ellipse wm;
  Ellipse ventricle;
  DriftPath ventricle_drift;
  std::vector<CorridorSpec> corridors;
};

double uniform_in(std::mt19937_64& rng, const std::array<double, 2>& range) {
  std::uniform_real_distribution<double> d(range[0], range[1]);
  return d(rng);
}

int uniform_int_in(std::mt19937_64& rng, const std::array<int, 2>& range) {
  std::uniform_int_distribution<int> d(range[0], range[1]);
  return d(rng);
}

// Diagonal-ish orientations keep the ellipse's bounding-box fill factor near
// 0.5, which the fiber-density metric's percentile mechanics rely on.
double draw_bundle_orientation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> band(kPi / 6.0, kPi / 3.0);  // 30..60 deg
  std::bernoulli_distribution flip(0.5);
  const double a = band(rng);
  return flip(rng) ? a : kPi - a;
}

Ellipse draw_bundle_ellipse(std::mt19937_64& rng, double area_mm2, double mm2_per_px) {
  const double area_px = area_mm2 / mm2_per_px;
  std::uniform_real_distribution<double> aspect_d(2.0, 2.6);
  const double aspect = aspect_d(rng);
  Ellipse e;
  e.rx = std::sqrt(area_px * aspect / kPi);
  e.ry = e.rx / aspect;
  e.rot = draw_bundle_orientation(rng);
  return e;
}

// Every boundary sample of `shape` (grown by `margin`) must stay inside `wm`
// and outside `avoid` (the ventricle).
bool placement_ok(const Ellipse& shape, double margin, const Ellipse& wm, const Ellipse& avoid,
                  double avoid_margin) {
  const Ellipse probe = shape.grown(margin);
  const Ellipse keep_out = avoid.grown(avoid_margin);
  for (int i = 0; i < 48; ++i) {
    const Vec2 p = probe.boundary_point(2.0 * kPi * i / 48.0);
    if (!wm.contains(p.y, p.x)) return false;
    if (keep_out.contains(p.y, p.x)) return false;
  }
  if (keep_out.contains(probe.cy, probe.cx)) return false;
  return true;
}

bool corridors_overlap(const CorridorSpec& a, const CorridorSpec& b, double margin) {
  for (const auto& ba : a.bundles) {
    for (const auto& bb : b.bundles) {
      const double dy = bb.shape.cy - ba.shape.cy;
      const double dx = bb.shape.cx - ba.shape.cx;
      const double dist = std::hypot(dy, dx);
      if (dist < 1e-9) return true;
      const double sa = ba.shape.support(dy / dist, dx / dist);
      const double sb = bb.shape.support(-dy / dist, -dx / dist);
      if (dist < sa + sb + margin) return true;
    }
  }
  return false;
}

StackLayout build_layout(const SynthConfig& cfg) {
  auto rng = make_rng(cfg.seed, kStreamLayout);
  const double H = cfg.image_rows;
  const double W = cfg.image_cols;
  const double mm2_per_px = cfg.resolution().mm2_per_pixel();

  StackLayout layout;
  std::uniform_real_distribution<double> small_rot(-0.25, 0.25);
  std::uniform_real_distribution<double> jitter(0.95, 1.05);

  layout.tissue = {H / 2.0, W / 2.0, 0.40 * H * jitter(rng), 0.44 * W * jitter(rng),
                   small_rot(rng)};
  // White matter fills most of the tissue interior; the rim is gray matter.
  layout.wm = {layout.tissue.cy, layout.tissue.cx, layout.tissue.ry * 0.74,
               layout.tissue.rx * 0.76, layout.tissue.rot};

  std::uniform_real_distribution<double> vent_off_y(-0.22, -0.08);
  std::uniform_real_distribution<double> vent_off_x(-0.18, -0.02);
  layout.ventricle = {layout.tissue.cy + vent_off_y(rng) * layout.tissue.ry,
                      layout.tissue.cx + vent_off_x(rng) * layout.tissue.rx,
                      0.075 * layout.tissue.ry * jitter(rng), 0.05 * layout.tissue.rx * jitter(rng),
                      small_rot(rng)};
  layout.ventricle_drift = DriftPath::make(cfg.drift_px_per_section, rng);

  const int n_dense = uniform_int_in(rng, cfg.n_dense_bundles);
  const int n_moderate_total = uniform_int_in(rng, cfg.n_moderate_bundles);

  // Round-robin the moderate bundles over the dense corridors so every
  // moderate sits at a dense bundle's edge (its continuity anchor).
  std::vector<int> moderates_per_corridor(std::max(1, n_dense), 0);
  for (int m = 0; m < n_moderate_total; ++m) moderates_per_corridor[m % std::max(1, n_dense)]++;
  if (n_dense == 0 && n_moderate_total > 0) {
    throw core::RuntimeFailure(
        "synth layout: moderate bundles require at least one dense corridor to anchor to");
  }

  std::uniform_real_distribution<double> center_u(-1.0, 1.0);
  std::uniform_real_distribution<double> gap_d(3.0, 8.0);
  std::uniform_real_distribution<double> dir_d(0.0, 2.0 * kPi);

  for (int d = 0; d < n_dense; ++d) {
    bool placed = false;
    for (int attempt = 0; attempt < 300 && !placed; ++attempt) {
      CorridorSpec corridor;
      corridor.drift = DriftPath::make(cfg.drift_px_per_section, rng);
      const double margin = corridor.drift.max_abs() + 4.0;

      BundleSpec dense;
      dense.shape = draw_bundle_ellipse(rng, uniform_in(rng, cfg.bundle_area_mm2_dense), mm2_per_px);
      dense.shape.cy = layout.wm.cy + center_u(rng) * layout.wm.ry * 0.55;
      dense.shape.cx = layout.wm.cx + center_u(rng) * layout.wm.rx * 0.55;
      dense.streak_density = uniform_in(rng, cfg.fiber_density_dense);
      dense.severity = core::Severity::kDense;
      if (!placement_ok(dense.shape, margin, layout.wm, layout.ventricle,
                        layout.ventricle_drift.max_abs() + 4.0)) {
        continue;
      }
      corridor.bundles.push_back(dense);

      // Moderate satellites on alternating sides of the dense bundle, edge to
      // edge with a small gap — inside the 0.2 mm continuity tolerance.
      bool satellites_ok = true;
      double first_dir = dir_d(rng);
      for (int m = 0; m < moderates_per_corridor[d]; ++m) {
        BundleSpec mod;
        mod.shape =
            draw_bundle_ellipse(rng, uniform_in(rng, cfg.bundle_area_mm2_moderate), mm2_per_px);
        mod.streak_density = uniform_in(rng, cfg.fiber_density_moderate);
        mod.severity = core::Severity::kModerate;

        bool mod_placed = false;
        for (int mt = 0; mt < 40 && !mod_placed; ++mt) {
          const double dir = m == 0 ? first_dir + 0.25 * center_u(rng)
                                    : first_dir + kPi + 0.25 * center_u(rng);
          const double uy = std::sin(dir);
          const double ux = std::cos(dir);
          const double gap = gap_d(rng);
          const double dist =
              dense.shape.support(uy, ux) + mod.shape.support(-uy, -ux) + gap;
          mod.shape.cy = dense.shape.cy + uy * dist;
          mod.shape.cx = dense.shape.cx + ux * dist;
          if (!placement_ok(mod.shape, margin, layout.wm, layout.ventricle,
                            layout.ventricle_drift.max_abs() + 4.0)) {
            first_dir = dir_d(rng);
            continue;
          }
          // Must not collide with earlier satellites.
          bool clash = false;
          for (size_t prev = 1; prev < corridor.bundles.size(); ++prev) {
            const auto& other = corridor.bundles[prev].shape;
            const double dy = other.cy - mod.shape.cy;
            const double dx = other.cx - mod.shape.cx;
            const double dd = std::hypot(dy, dx);
            if (dd < 1e-9 ||
                dd < mod.shape.support(dy / dd, dx / dd) + other.support(-dy / dd, -dx / dd) + 3.0) {
              clash = true;
              break;
            }
          }
          if (clash) {
            first_dir = dir_d(rng);
            continue;
          }
          mod_placed = true;
        }
        if (!mod_placed) {
          satellites_ok = false;
          break;
        }
        corridor.bundles.push_back(mod);
      }
      if (!satellites_ok) continue;

      bool clash = false;
      for (const auto& existing : layout.corridors) {
        if (corridors_overlap(existing, corridor, 24.0)) {
          clash = true;
          break;
        }
      }
      if (clash) continue;

      layout.corridors.push_back(std::move(corridor));
      placed = true;
    }
    if (!placed) {
      throw core::RuntimeFailure(
          "synth layout: image too small to place the requested bundles (corridor " +
          std::to_string(d) + ")");
    }
  }
  return layout;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

struct GrayCanvas {
  core::FloatRaster gray;

  explicit GrayCanvas(int rows, int cols) : gray(rows, cols, 0.0f) {}
  int rows() const { return gray.rows(); }
  int cols() const { return gray.cols(); }
};

void fill_ellipse(const Ellipse& e, int rows, int cols,
                  const std::function<void(int, int)>& paint) {
  const double extent = std::max(e.rx, e.ry);
  const int r0 = std::max(0, static_cast<int>(std::floor(e.cy - extent - 1)));
  const int r1 = std::min(rows - 1, static_cast<int>(std::ceil(e.cy + extent + 1)));
  const int c0 = std::max(0, static_cast<int>(std::floor(e.cx - extent - 1)));
  const int c1 = std::min(cols - 1, static_cast<int>(std::ceil(e.cx + extent + 1)));
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      if (e.contains(r, c)) paint(r, c);
    }
  }
}

// Coverage stamp of an anti-aliased thick segment into a local raster.
void stamp_segment(core::FloatRaster& coverage, int origin_r, int origin_c, Vec2 p0, Vec2 p1,
                   double width) {
  const double half = width / 2.0;
  const int r0 = std::max(0, static_cast<int>(std::floor(std::min(p0.y, p1.y) - half - 1)) - origin_r);
  const int r1 =
      std::min(coverage.rows() - 1,
               static_cast<int>(std::ceil(std::max(p0.y, p1.y) + half + 1)) - origin_r);
  const int c0 = std::max(0, static_cast<int>(std::floor(std::min(p0.x, p1.x) - half - 1)) - origin_c);
  const int c1 =
      std::min(coverage.cols() - 1,
               static_cast<int>(std::ceil(std::max(p0.x, p1.x) + half + 1)) - origin_c);
  const double vy = p1.y - p0.y;
  const double vx = p1.x - p0.x;
  const double len2 = vy * vy + vx * vx;
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      const double py = r + origin_r - p0.y;
      const double px = c + origin_c - p0.x;
      double t = len2 > 0.0 ? (py * vy + px * vx) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const double dy = py - t * vy;
      const double dx = px - t * vx;
      const double dist = std::hypot(dy, dx);
      const double cov = std::clamp(half + 0.5 - dist, 0.0, 1.0);
      if (cov > coverage.at(r, c)) coverage.at(r, c) = static_cast<float>(cov);
    }
  }
}

// Renders curvilinear dark streaks inside a bundle ellipse until the covered
// fraction of the region reaches the target density.
void render_streaks(GrayCanvas& canvas, const Ellipse& bundle, double target_density,
                    std::mt19937_64& rng) {
  const double extent = std::max(bundle.rx, bundle.ry) + 3.0;
  const int origin_r = static_cast<int>(std::floor(bundle.cy - extent));
  const int origin_c = static_cast<int>(std::floor(bundle.cx - extent));
  const int local = static_cast<int>(std::ceil(2 * extent)) + 2;
  core::FloatRaster coverage(local, local, 0.0f);

  // Region pixel count for the density denominator.
  size_t region_px = 0;
  fill_ellipse(bundle, canvas.rows(), canvas.cols(), [&](int, int) { ++region_px; });
  if (region_px == 0) return;
  const auto target_covered = static_cast<size_t>(target_density * static_cast<double>(region_px));

  std::uniform_real_distribution<double> udist(0.0, 1.0);
  std::normal_distribution<double> turn(0.0, 0.12);
  std::uniform_real_distribution<double> width_d(1.4, 2.0);

  auto covered_count = [&]() {
    size_t n = 0;
    fill_ellipse(bundle, canvas.rows(), canvas.cols(), [&](int r, int c) {
      const int lr = r - origin_r;
      const int lc = c - origin_c;
      if (lr >= 0 && lr < local && lc >= 0 && lc < local && coverage.at(lr, lc) >= 0.5f) ++n;
    });
    return n;
  };

  // The fiber direction roughly follows the bundle's major axis.
  const double major_dir = -bundle.rot;  // local x axis direction in (y,x) space

  for (int streak = 0; streak < 600; ++streak) {
    if (streak % 4 == 0 && covered_count() >= target_covered) break;
    // Random interior start point.
    Vec2 start;
    for (int tries = 0; tries < 60; ++tries) {
      const double ang = udist(rng) * 2.0 * kPi;
      const double rad = std::sqrt(udist(rng));
      const Vec2 bp = bundle.boundary_point(ang);
      start = {bundle.cy + (bp.y - bundle.cy) * rad, bundle.cx + (bp.x - bundle.cx) * rad};
      if (bundle.contains(start.y, start.x)) break;
    }
    const double width = width_d(rng);
    double base_heading = major_dir + (udist(rng) - 0.5) * 0.9;
    for (int side = 0; side < 2; ++side) {
      double heading = side == 0 ? base_heading : base_heading + kPi;
      Vec2 p = start;
      for (int step = 0; step < 400; ++step) {
        heading += turn(rng);
        const Vec2 q{p.y + 2.2 * std::sin(heading), p.x + 2.2 * std::cos(heading)};
        stamp_segment(coverage, origin_r, origin_c, p, q, width);
        p = q;
        if (!bundle.grown(1.5).contains(p.y, p.x)) break;
      }
    }
  }

  // Darken the canvas where covered: fibers are near-black on the WM matrix.
  std::uniform_real_distribution<double> fiber_gray(18.0, 42.0);
  const double fg = fiber_gray(rng);
  for (int lr = 0; lr < local; ++lr) {
    for (int lc = 0; lc < local; ++lc) {
      const float cov = coverage.at(lr, lc);
      if (cov <= 0.0f) continue;
      const int r = lr + origin_r;
      const int c = lc + origin_c;
      if (r < 0 || r >= canvas.rows() || c < 0 || c >= canvas.cols()) continue;
      const double g = canvas.gray.at(r, c);
      canvas.gray.at(r, c) = static_cast<float>(g * (1.0 - cov) + fg * cov);
    }
  }
}

void render_terminal_field(GrayCanvas& canvas, Vec2 center, double radius, double dot_coverage,
                           std::mt19937_64& rng) {
  // Faint diffuse shade so the blob reads as a structure, not loose dots.
  const Ellipse disk{center.y, center.x, radius, radius, 0.0};
  fill_ellipse(disk, canvas.rows(), canvas.cols(), [&](int r, int c) {
    const double d = std::hypot(r - center.y, c - center.x) / radius;
    const double alpha = 0.06 * smooth01(std::clamp(1.2 - d, 0.0, 1.0));
    canvas.gray.at(r, c) = static_cast<float>(canvas.gray.at(r, c) * (1.0 - alpha));
  });

  const double area = kPi * radius * radius;
  const int dots = static_cast<int>(dot_coverage * area / 2.0);
  std::uniform_real_distribution<double> udist(0.0, 1.0);
  std::uniform_real_distribution<double> dot_gray(22.0, 60.0);
  for (int i = 0; i < dots; ++i) {
    const double ang = udist(rng) * 2.0 * kPi;
    const double rad = radius * std::sqrt(udist(rng));
    const int r = static_cast<int>(std::lround(center.y + rad * std::sin(ang)));
    const int c = static_cast<int>(std::lround(center.x + rad * std::cos(ang)));
    const double g = dot_gray(rng);
    for (int dr = 0; dr < 2; ++dr) {
      for (int dc = 0; dc < 2; ++dc) {
        const int rr = r + dr;
        const int cc = c + dc;
        if (rr < 0 || rr >= canvas.rows() || cc < 0 || cc >= canvas.cols()) continue;
        const double w = (dr == 0 && dc == 0) ? 1.0 : 0.45;
        canvas.gray.at(rr, cc) =
            static_cast<float>(canvas.gray.at(rr, cc) * (1.0 - w) + g * w);
      }
    }
  }
}

std::uint8_t clamp_u8(double v) {
  return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0) + 0.5);
}

}  // namespace

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

void SynthConfig::validate() const {
  auto check_range01 = [](const std::array<double, 2>& r, const char* name) {
    if (!(r[0] <= r[1]) || r[0] < 0.0 || r[1] > 1.0) {
      throw core::UsageError(std::string("synth config: ") + name + " must be a range within [0,1]");
    }
  };
  check_range01(fiber_density_dense, "fiber_density_dense");
  check_range01(fiber_density_moderate, "fiber_density_moderate");
  if (!(fiber_density_dense[1] > fiber_density_moderate[1])) {
    throw core::UsageError("synth config: dense density upper bound must exceed moderate's");
  }
  if (n_sections < 1) throw core::UsageError("synth config: n_sections must be >= 1");
  if (image_rows < 32 || image_cols < 32) {
    throw core::UsageError("synth config: image size must be at least 32x32");
  }
  auto check_int_range = [](const std::array<int, 2>& r, const char* name) {
    if (r[0] > r[1] || r[0] < 0) {
      throw core::UsageError(std::string("synth config: bad integer range for ") + name);
    }
  };
  check_int_range(n_dense_bundles, "n_dense_bundles");
  check_int_range(n_moderate_bundles, "n_moderate_bundles");
  auto check_pos_range = [](const std::array<double, 2>& r, const char* name) {
    if (!(r[0] > 0.0) || r[0] > r[1]) {
      throw core::UsageError(std::string("synth config: bad positive range for ") + name);
    }
  };
  check_pos_range(bundle_area_mm2_dense, "bundle_area_mm2_dense");
  check_pos_range(bundle_area_mm2_moderate, "bundle_area_mm2_moderate");
  if (artifact_rate < 0.0 || artifact_rate > 1.0 || terminal_field_rate < 0.0 ||
      terminal_field_rate > 1.0) {
    throw core::UsageError("synth config: rates must lie in [0,1]");
  }
  if (drift_px_per_section < 0.0) {
    throw core::UsageError("synth config: drift_px_per_section must be >= 0");
  }
  resolution().validate();
}

SynthConfig synth_config_from_json(const nlohmann::json& j) {
  SynthConfig cfg;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("seed", cfg.seed);
  get("n_sections", cfg.n_sections);
  get("image_rows", cfg.image_rows);
  get("image_cols", cfg.image_cols);
  get("n_dense_bundles", cfg.n_dense_bundles);
  get("n_moderate_bundles", cfg.n_moderate_bundles);
  get("fiber_density_dense", cfg.fiber_density_dense);
  get("fiber_density_moderate", cfg.fiber_density_moderate);
  get("bundle_area_mm2_dense", cfg.bundle_area_mm2_dense);
  get("bundle_area_mm2_moderate", cfg.bundle_area_mm2_moderate);
  get("artifact_rate", cfg.artifact_rate);
  get("terminal_field_rate", cfg.terminal_field_rate);
  get("drift_px_per_section", cfg.drift_px_per_section);
  get("microns_per_pixel", cfg.microns_per_pixel);
  get("section_gap_um", cfg.section_gap_um);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    static const std::set<std::string> known{
        "seed",          "n_sections",           "image_rows",
        "image_cols",    "n_dense_bundles",      "n_moderate_bundles",
        "fiber_density_dense",                   "fiber_density_moderate",
        "bundle_area_mm2_dense",                 "bundle_area_mm2_moderate",
        "artifact_rate", "terminal_field_rate",  "drift_px_per_section",
        "microns_per_pixel",                     "section_gap_um"};
    if (!known.count(key)) {
      throw core::UsageError("synth config: unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

nlohmann::json to_json(const SynthConfig& cfg) {
  return nlohmann::json{{"seed", cfg.seed},
                        {"n_sections", cfg.n_sections},
                        {"image_rows", cfg.image_rows},
                        {"image_cols", cfg.image_cols},
                        {"n_dense_bundles", cfg.n_dense_bundles},
                        {"n_moderate_bundles", cfg.n_moderate_bundles},
                        {"fiber_density_dense", cfg.fiber_density_dense},
                        {"fiber_density_moderate", cfg.fiber_density_moderate},
                        {"bundle_area_mm2_dense", cfg.bundle_area_mm2_dense},
                        {"bundle_area_mm2_moderate", cfg.bundle_area_mm2_moderate},
                        {"artifact_rate", cfg.artifact_rate},
                        {"terminal_field_rate", cfg.terminal_field_rate},
                        {"drift_px_per_section", cfg.drift_px_per_section},
                        {"microns_per_pixel", cfg.microns_per_pixel},
                        {"section_gap_um", cfg.section_gap_um}};
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

core::SectionRecord generate_section(const SynthConfig& cfg, int index) {
  cfg.validate();
  if (index < 0 || index >= cfg.n_sections) {
    throw core::UsageError("generate_section: index " + std::to_string(index) +
                           " outside [0, " + std::to_string(cfg.n_sections) + ")");
  }
  const StackLayout layout = build_layout(cfg);
  const int rows = cfg.image_rows;
  const int cols = cfg.image_cols;

  core::SectionRecord section;
  section.macaque_id = "m" + std::to_string(cfg.seed);
  char buf[16];
  std::snprintf(buf, sizeof buf, "_s%03d", index);
  section.id = section.macaque_id + buf;
  section.rostrocaudal_index = index;
  section.resolution = cfg.resolution();

  GrayCanvas canvas(rows, cols);
  core::ByteRaster tissue_mask(rows, cols, 0);
  core::ByteRaster wm_mask(rows, cols, 0);
  core::ByteRaster ventricle_mask(rows, cols, 0);
  core::ByteRaster charting(rows, cols, core::kLabelBackground);

  const std::uint64_t tex_seed = hash_key(cfg.seed, kStreamTexture, static_cast<std::uint64_t>(index));
  auto tex_rng = make_rng(cfg.seed, kStreamTexture, static_cast<std::uint64_t>(index) + 0x8000);
  std::normal_distribution<double> fine_noise(0.0, 1.0);

  // Slide background.
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      canvas.gray.at(r, c) = static_cast<float>(238.0 + 3.0 * fine_noise(tex_rng));
    }
  }

  // Gray-matter rim (fills the whole tissue ellipse; WM painted over it).
  fill_ellipse(layout.tissue, rows, cols, [&](int r, int c) {
    tissue_mask.at(r, c) = 1;
    const double texture = value_noise(tex_seed ^ 0xA1, r, c, 42.0);
    canvas.gray.at(r, c) =
        static_cast<float>(148.0 + 30.0 * (texture - 0.5) + 5.0 * fine_noise(tex_rng));
  });

  // White matter: the brighter, smoother interior compartment.
  fill_ellipse(layout.wm, rows, cols, [&](int r, int c) {
    wm_mask.at(r, c) = 1;
    const double texture = value_noise(tex_seed ^ 0xB2, r, c, 64.0);
    canvas.gray.at(r, c) =
        static_cast<float>(204.0 + 18.0 * (texture - 0.5) + 3.5 * fine_noise(tex_rng));
  });

  // Ventricle: a bright hole with a thin darker rim.
  const Vec2 vent_off = layout.ventricle_drift.offset(index);
  const Ellipse vent = layout.ventricle.shifted(vent_off.y, vent_off.x);
  fill_ellipse(vent.grown(2.0), rows, cols, [&](int r, int c) {
    canvas.gray.at(r, c) = static_cast<float>(118.0 + 6.0 * fine_noise(tex_rng));
  });
  fill_ellipse(vent, rows, cols, [&](int r, int c) {
    ventricle_mask.at(r, c) = 1;
    wm_mask.at(r, c) = 0;
    canvas.gray.at(r, c) = static_cast<float>(240.0 + 2.0 * fine_noise(tex_rng));
  });

  // Bundles.
  int bundle_ordinal = 0;
  for (const auto& corridor : layout.corridors) {
    const Vec2 drift = corridor.drift.offset(index);
    for (const auto& bundle : corridor.bundles) {
      const Ellipse shape = bundle.shape.shifted(drift.y, drift.x);
      const std::uint8_t label = bundle.severity == core::Severity::kDense
                                     ? core::kLabelDense
                                     : core::kLabelModerate;
      fill_ellipse(shape, rows, cols, [&](int r, int c) { charting.at(r, c) = label; });
      auto streak_rng = make_rng(cfg.seed, kStreamStreaks,
                                 static_cast<std::uint64_t>(index) * 1024 + bundle_ordinal);
      render_streaks(canvas, shape, bundle.streak_density, streak_rng);
      ++bundle_ordinal;
    }
  }

  // Confounders: per-section random, so they have no rostrocaudal coherence.
  auto conf_rng = make_rng(cfg.seed, kStreamConfound, static_cast<std::uint64_t>(index));
  std::uniform_real_distribution<double> udist(0.0, 1.0);

  auto far_from_bundles = [&](double y, double x, double clearance) {
    for (const auto& corridor : layout.corridors) {
      const Vec2 drift = corridor.drift.offset(index);
      for (const auto& bundle : corridor.bundles) {
        const Ellipse shape = bundle.shape.shifted(drift.y, drift.x);
        const double dy = y - shape.cy;
        const double dx = x - shape.cx;
        const double dist = std::hypot(dy, dx);
        if (dist < 1e-9) return false;
        if (dist < shape.support(dy / dist, dx / dist) + clearance) return false;
      }
    }
    return true;
  };

  // Terminal fields: up to two stippled blobs, at least 0.3 mm clear of any
  // charted bundle so the continuity filter has an honest margin to work in.
  const double clearance_px = 300.0 / cfg.microns_per_pixel;
  for (int slot = 0; slot < 2; ++slot) {
    if (udist(conf_rng) >= cfg.terminal_field_rate) continue;
    std::uniform_real_distribution<double> radius_d(slot == 0 ? 45.0 : 16.0,
                                                    slot == 0 ? 58.0 : 26.0);
    const double radius = radius_d(conf_rng) * (cfg.image_rows / 768.0 + 0.25);
    for (int attempt = 0; attempt < 80; ++attempt) {
      const double ang = udist(conf_rng) * 2.0 * kPi;
      const double rad = std::sqrt(udist(conf_rng));
      const Vec2 bp = layout.tissue.grown(-radius - 6.0).boundary_point(ang);
      const Vec2 center{layout.tissue.cy + (bp.y - layout.tissue.cy) * rad,
                        layout.tissue.cx + (bp.x - layout.tissue.cx) * rad};
      if (!far_from_bundles(center.y, center.x, radius + clearance_px)) continue;
      const Ellipse vclear = vent.grown(radius + 4.0);
      if (vclear.contains(center.y, center.x)) continue;
      std::uniform_real_distribution<double> cov_d(0.06, 0.10);
      render_terminal_field(canvas, center, radius, cov_d(conf_rng), conf_rng);
      break;
    }
  }

  // Speckle clusters: small very dark clumps anywhere in tissue.
  for (int slot = 0; slot < 6; ++slot) {
    if (udist(conf_rng) >= cfg.artifact_rate) continue;
    std::uniform_int_distribution<int> cluster_d(3, 30);
    std::uniform_real_distribution<double> gray_d(10.0, 40.0);
    for (int attempt = 0; attempt < 40; ++attempt) {
      const int r = static_cast<int>(udist(conf_rng) * rows);
      const int c = static_cast<int>(udist(conf_rng) * cols);
      if (r >= rows || c >= cols || tissue_mask.at(r, c) == 0) continue;
      if (!far_from_bundles(r, c, clearance_px)) continue;
      const int n = cluster_d(conf_rng);
      const double g = gray_d(conf_rng);
      double py = r, px = c;
      for (int i = 0; i < n; ++i) {
        const int rr = static_cast<int>(std::lround(py));
        const int cc = static_cast<int>(std::lround(px));
        if (rr >= 0 && rr < rows && cc >= 0 && cc < cols && tissue_mask.at(rr, cc) != 0) {
          canvas.gray.at(rr, cc) = static_cast<float>(g);
        }
        py += fine_noise(conf_rng) * 1.2;
        px += fine_noise(conf_rng) * 1.2;
      }
      break;
    }
  }

  // Glare: one bright soft patch.
  if (udist(conf_rng) < cfg.artifact_rate) {
    std::uniform_real_distribution<double> radius_d(20.0, 45.0);
    const double radius = radius_d(conf_rng);
    for (int attempt = 0; attempt < 40; ++attempt) {
      const int r = static_cast<int>(udist(conf_rng) * rows);
      const int c = static_cast<int>(udist(conf_rng) * cols);
      if (r >= rows || c >= cols || tissue_mask.at(r, c) == 0) continue;
      if (!far_from_bundles(r, c, clearance_px * 0.5)) continue;
      const Ellipse disk{static_cast<double>(r), static_cast<double>(c), radius, radius, 0.0};
      fill_ellipse(disk, rows, cols, [&](int rr, int cc) {
        const double d = std::hypot(rr - disk.cy, cc - disk.cx) / radius;
        const double alpha = 0.75 * smooth01(std::clamp(1.0 - d, 0.0, 1.0));
        const double g = canvas.gray.at(rr, cc);
        canvas.gray.at(rr, cc) = static_cast<float>(g + (250.0 - g) * alpha);
      });
      break;
    }
  }

  // Convert luminance to a warm-tinted RGB image.
  section.image = core::RgbImage(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double g = canvas.gray.at(r, c);
      section.image.at(r, c, 0) = clamp_u8(g * 1.07 + 2.0);
      section.image.at(r, c, 1) = clamp_u8(g * 0.98);
      section.image.at(r, c, 2) = clamp_u8(g * 0.82);
    }
  }

  section.charting = std::move(charting);
  section.tissue_mask = std::move(tissue_mask);
  section.wm_mask = std::move(wm_mask);
  section.ventricle_mask = std::move(ventricle_mask);
  section.charted = true;
  section.validate();
  return section;
}

std::vector<core::SectionRecord> generate_stack(const SynthConfig& cfg) {
  cfg.validate();
  std::vector<core::SectionRecord> sections;
  sections.reserve(cfg.n_sections);
  for (int i = 0; i < cfg.n_sections; ++i) sections.push_back(generate_section(cfg, i));
  return sections;
}

std::filesystem::path write_dataset(const std::vector<core::SectionRecord>& sections,
                                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<core::ManifestEntry> entries;
  entries.reserve(sections.size());
  for (const auto& s : sections) {
    s.validate();
    const std::string stem = s.macaque_id + "/" + s.id;
    core::ManifestEntry e;
    e.id = s.id;
    e.macaque_id = s.macaque_id;
    e.rostrocaudal_index = s.rostrocaudal_index;
    e.microns_per_pixel = s.resolution.microns_per_pixel;
    e.section_gap_um = s.resolution.section_gap_um;
    e.image = stem + "_image.png";
    core::write_rgb_png(s.image, dir / e.image);
    if (s.charting) {
      e.charting = stem + "_charting.png";
      core::write_gray_png(*s.charting, dir / *e.charting);
    }
    if (s.tissue_mask) {
      e.tissue_mask = stem + "_tissue.png";
      core::write_mask_png(*s.tissue_mask, dir / *e.tissue_mask);
    }
    if (s.wm_mask) {
      e.wm_mask = stem + "_wm.png";
      core::write_mask_png(*s.wm_mask, dir / *e.wm_mask);
    }
    if (s.ventricle_mask) {
      e.ventricle_mask = stem + "_ventricle.png";
      core::write_mask_png(*s.ventricle_mask, dir / *e.ventricle_mask);
    }
    e.charted = s.charted;
    entries.push_back(std::move(e));
  }
  const auto manifest_path = dir / "manifest.json";
  core::save_manifest(entries, manifest_path);
  return manifest_path;
}

}  // namespace fibseg::synth
