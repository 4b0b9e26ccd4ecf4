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

#ifndef FIBSEG_SYNTH_SYNTH_HPP
#define FIBSEG_SYNTH_SYNTH_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "fibseg/core/types.hpp"

namespace fibseg::synth {

/// Configuration of the procedural section generator.  All output is a pure
/// function of (config, section index).
///
/// A stack shares one anatomy layout: a tissue ellipse with a gray-matter rim
/// and a large white-matter interior, one ventricle, and bundle "corridors".
/// Each corridor holds one dense bundle with its moderate satellites placed
/// edge-to-edge (boundary gap 3-8 px), and the whole corridor drifts smoothly
/// across sections.  Confounders (terminal fields, speckle, glare) are drawn
/// per section and are deliberately NOT rostrocaudally coherent.
struct SynthConfig {
  std::uint64_t seed = 1;
  int n_sections = 8;
  int image_rows = 768;
  int image_cols = 768;

  // Inclusive integer ranges; counts are drawn once per stack so bundles
  // persist across sections.
  std::array<int, 2> n_dense_bundles{1, 1};
  std::array<int, 2> n_moderate_bundles{1, 2};

  // Target fraction of bundle-region pixels covered by dark fiber streaks.
  std::array<double, 2> fiber_density_dense{0.08, 0.14};
  std::array<double, 2> fiber_density_moderate{0.03, 0.05};

  // Charted bundle areas; kept above the 2 mm² postprocessing floor.
  std::array<double, 2> bundle_area_mm2_dense{2.2, 2.8};
  std::array<double, 2> bundle_area_mm2_moderate{2.4, 2.8};

  double artifact_rate = 0.5;        // speckle clusters + glare patches
  double terminal_field_rate = 0.8;  // stippled unlabeled blobs (FP source)
  double drift_px_per_section = 2.5;

  double microns_per_pixel = 16.0;  // desk-scale working resolution
  double section_gap_um = 400.0;

  void validate() const;
  core::Resolution resolution() const { return {microns_per_pixel, section_gap_um}; }
};

SynthConfig synth_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SynthConfig& cfg);

/// Generates one section.  Pure function of (cfg, index); bit-identical on
/// repeated calls.  UsageError if index is out of range; RuntimeFailure if
/// the image is too small to place the requested bundles.
core::SectionRecord generate_section(const SynthConfig& cfg, int index);

/// All n_sections sections, rostrocaudally coherent: per-bundle centroid
/// displacement between adjacent sections stays within drift_px_per_section.
std::vector<core::SectionRecord> generate_stack(const SynthConfig& cfg);

/// Writes images + masks as PNG and a schema-valid manifest JSON; returns the
/// manifest path.  Rasters round-trip losslessly through the core readers.
std::filesystem::path write_dataset(const std::vector<core::SectionRecord>& sections,
                                    const std::filesystem::path& dir);

}  // namespace fibseg::synth

#endif  // FIBSEG_SYNTH_SYNTH_HPP
