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

#include "fibseg/core/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "fibseg/core/image_io.hpp"

namespace fibseg::core {

namespace {

// Kept byte-identical to docs/manifest.schema.json (a unit test enforces the
// parsed documents match).
constexpr const char* kManifestSchemaText = R"SCHEMA({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "fibseg dataset manifest",
  "description": "Top-level array of section records. File paths are relative to the manifest's directory. Binary masks are 0/255 gray PNG; charting rasters hold raw label values {0=background, 1=moderate, 2=dense}.",
  "type": "array",
  "items": {
    "type": "object",
    "required": [
      "id",
      "macaque_id",
      "rostrocaudal_index",
      "microns_per_pixel",
      "section_gap_um",
      "image",
      "charted"
    ],
    "additionalProperties": false,
    "properties": {
      "id": { "type": "string" },
      "macaque_id": { "type": "string" },
      "rostrocaudal_index": { "type": "integer", "minimum": 0 },
      "microns_per_pixel": { "type": "number", "exclusiveMinimum": 0 },
      "section_gap_um": { "type": "number", "exclusiveMinimum": 0 },
      "image": { "type": "string" },
      "charting": { "type": ["string", "null"] },
      "tissue_mask": { "type": ["string", "null"] },
      "wm_mask": { "type": ["string", "null"] },
      "ventricle_mask": { "type": ["string", "null"] },
      "charted": { "type": "boolean" }
    }
  }
})SCHEMA";

bool matches_type(const nlohmann::json& doc, const std::string& type_name) {
  if (type_name == "string") return doc.is_string();
  if (type_name == "integer") return doc.is_number_integer();
  if (type_name == "number") return doc.is_number();
  if (type_name == "boolean") return doc.is_boolean();
  if (type_name == "null") return doc.is_null();
  if (type_name == "object") return doc.is_object();
  if (type_name == "array") return doc.is_array();
  throw UsageError("manifest schema uses unsupported type name: '" + type_name + "'");
}

[[noreturn]] void fail(const std::string& pointer, const std::string& why) {
  throw UsageError("manifest schema violation at '" + (pointer.empty() ? "/" : pointer) +
                   "': " + why);
}

std::optional<std::string> read_nullable_string(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return obj.at(key).get<std::string>();
}

nlohmann::json nullable(const std::optional<std::string>& v) {
  if (!v) return nullptr;
  return *v;
}

std::optional<ByteRaster> load_optional_mask(const std::optional<std::string>& rel,
                                             const std::filesystem::path& root) {
  if (!rel) return std::nullopt;
  return read_mask_png(root / *rel);
}

}  // namespace

const nlohmann::json& manifest_schema() {
  static const nlohmann::json schema = nlohmann::json::parse(kManifestSchemaText);
  return schema;
}

void validate_against_schema(const nlohmann::json& doc, const nlohmann::json& schema,
                             const std::string& pointer) {
  if (schema.contains("type")) {
    const auto& t = schema.at("type");
    bool ok = false;
    if (t.is_string()) {
      ok = matches_type(doc, t.get<std::string>());
    } else if (t.is_array()) {
      for (const auto& name : t) ok = ok || matches_type(doc, name.get<std::string>());
    }
    if (!ok) fail(pointer, "value does not match schema type " + t.dump());
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& candidate : schema.at("enum")) ok = ok || (doc == candidate);
    if (!ok) fail(pointer, "value not in enum " + schema.at("enum").dump());
  }
  if (doc.is_number()) {
    if (schema.contains("minimum") && doc.get<double>() < schema.at("minimum").get<double>()) {
      fail(pointer, "value below minimum " + schema.at("minimum").dump());
    }
    if (schema.contains("exclusiveMinimum") &&
        doc.get<double>() <= schema.at("exclusiveMinimum").get<double>()) {
      fail(pointer, "value not above exclusiveMinimum " + schema.at("exclusiveMinimum").dump());
    }
  }
  if (doc.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema.at("required")) {
        if (!doc.contains(key.get<std::string>())) {
          fail(pointer, "missing required key '" + key.get<std::string>() + "'");
        }
      }
    }
    const bool closed =
        schema.contains("additionalProperties") && schema.at("additionalProperties") == false;
    for (const auto& [key, value] : doc.items()) {
      const bool known = schema.contains("properties") && schema.at("properties").contains(key);
      if (known) {
        validate_against_schema(value, schema.at("properties").at(key), pointer + "/" + key);
      } else if (closed) {
        fail(pointer, "unexpected key '" + key + "'");
      }
    }
  }
  if (doc.is_array() && schema.contains("items")) {
    for (size_t i = 0; i < doc.size(); ++i) {
      validate_against_schema(doc[i], schema.at("items"), pointer + "/" + std::to_string(i));
    }
  }
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& manifest_path) {
  if (!std::filesystem::exists(manifest_path)) {
    throw UsageError("manifest not found: " + manifest_path.string());
  }
  std::ifstream in(manifest_path);
  if (!in) throw RuntimeFailure("failed to open manifest: " + manifest_path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("manifest is not valid JSON (" + manifest_path.string() + "): " + e.what());
  }
  validate_against_schema(doc, manifest_schema());

  std::vector<ManifestEntry> entries;
  std::set<std::string> seen_ids;
  entries.reserve(doc.size());
  for (const auto& row : doc) {
    ManifestEntry e;
    e.id = row.at("id").get<std::string>();
    e.macaque_id = row.at("macaque_id").get<std::string>();
    e.rostrocaudal_index = row.at("rostrocaudal_index").get<int>();
    e.microns_per_pixel = row.at("microns_per_pixel").get<double>();
    e.section_gap_um = row.at("section_gap_um").get<double>();
    e.image = row.at("image").get<std::string>();
    e.charting = read_nullable_string(row, "charting");
    e.tissue_mask = read_nullable_string(row, "tissue_mask");
    e.wm_mask = read_nullable_string(row, "wm_mask");
    e.ventricle_mask = read_nullable_string(row, "ventricle_mask");
    e.charted = row.at("charted").get<bool>();
    if (e.charted != e.charting.has_value()) {
      throw UsageError("manifest entry '" + e.id + "': charted flag must match charting presence");
    }
    if (!seen_ids.insert(e.id).second) {
      throw UsageError("manifest has duplicate section id '" + e.id + "'");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void save_manifest(const std::vector<ManifestEntry>& entries,
                   const std::filesystem::path& manifest_path) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json row;
    row["id"] = e.id;
    row["macaque_id"] = e.macaque_id;
    row["rostrocaudal_index"] = e.rostrocaudal_index;
    row["microns_per_pixel"] = e.microns_per_pixel;
    row["section_gap_um"] = e.section_gap_um;
    row["image"] = e.image;
    row["charting"] = nullable(e.charting);
    row["tissue_mask"] = nullable(e.tissue_mask);
    row["wm_mask"] = nullable(e.wm_mask);
    row["ventricle_mask"] = nullable(e.ventricle_mask);
    row["charted"] = e.charted;
    doc.push_back(std::move(row));
  }
  const std::string text = doc.dump(2) + "\n";
  // Saved manifests must always load back; catch drift between writer and
  // schema at write time rather than at the next read.
  validate_against_schema(nlohmann::json::parse(text), manifest_schema());

  if (manifest_path.has_parent_path()) {
    std::filesystem::create_directories(manifest_path.parent_path());
  }
  std::ofstream out(manifest_path, std::ios::trunc);
  if (!out) throw RuntimeFailure("failed to open manifest for writing: " + manifest_path.string());
  out << text;
  if (!out) throw RuntimeFailure("failed to write manifest: " + manifest_path.string());
}

SectionRecord load_section(const ManifestEntry& entry, const std::filesystem::path& root) {
  SectionRecord s;
  s.id = entry.id;
  s.macaque_id = entry.macaque_id;
  s.rostrocaudal_index = entry.rostrocaudal_index;
  s.resolution = entry.resolution();
  s.image = read_rgb_png(root / entry.image);
  if (entry.charting) {
    ByteRaster raw = read_gray_png(root / *entry.charting);
    s.charting = std::move(raw);
  }
  s.tissue_mask = load_optional_mask(entry.tissue_mask, root);
  s.wm_mask = load_optional_mask(entry.wm_mask, root);
  s.ventricle_mask = load_optional_mask(entry.ventricle_mask, root);
  s.charted = entry.charted;
  s.validate();
  return s;
}

}  // namespace fibseg::core
