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

#ifndef FIBSEG_CORE_MANIFEST_HPP
#define FIBSEG_CORE_MANIFEST_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fibseg/core/types.hpp"

namespace fibseg::core {

/// One row of a dataset manifest: section metadata plus file paths relative
/// to the manifest's directory.  Binary masks live on disk as 0/255 PNG;
/// charting rasters keep their raw {0,1,2} label values.
struct ManifestEntry {
  std::string id;
  std::string macaque_id;
  int rostrocaudal_index = 0;
  double microns_per_pixel = 1.6;
  double section_gap_um = 400.0;
  std::string image;
  std::optional<std::string> charting;
  std::optional<std::string> tissue_mask;
  std::optional<std::string> wm_mask;
  std::optional<std::string> ventricle_mask;
  bool charted = false;

  Resolution resolution() const { return Resolution{microns_per_pixel, section_gap_um}; }
};

/// The manifest JSON Schema shipped in docs/manifest.schema.json, embedded so
/// validation never depends on locating the docs tree at runtime.
const nlohmann::json& manifest_schema();

/// Validates `doc` against a subset of JSON Schema (type/union types,
/// required, properties, additionalProperties, items, enum, minimum,
/// exclusiveMinimum).  Throws UsageError naming the offending JSON pointer.
void validate_against_schema(const nlohmann::json& doc, const nlohmann::json& schema,
                             const std::string& pointer = "");

/// Reads + schema-validates a manifest.  UsageError on missing file, parse
/// failure, or schema violation.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& manifest_path);

/// Writes entries as a pretty-printed JSON array (2-space indent, keys in
/// fixed order) so repeated saves are byte-identical.
void save_manifest(const std::vector<ManifestEntry>& entries,
                   const std::filesystem::path& manifest_path);

/// Loads the full SectionRecord behind one manifest entry; `root` is the
/// directory the relative paths resolve against (usually the manifest's
/// parent directory).
SectionRecord load_section(const ManifestEntry& entry, const std::filesystem::path& root);

}  // namespace fibseg::core

#endif  // FIBSEG_CORE_MANIFEST_HPP
