// Copyright 2026 The augimpact Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "augimpact/errors.hpp"
#include "augimpact/imageio.hpp"
#include "json.hpp"

namespace augimpact {

using nlohmann::json;

ActivationManifest parse_manifest(std::string_view json_text,
                                  const std::filesystem::path& base_dir) {
  ActivationManifest m;
  try {
    const json doc = json::parse(json_text);
    m.model_id = doc.at("model_id").get<std::string>();
    m.augmentation_id = doc.at("augmentation_id").get<std::string>();
    m.seed = doc.at("seed").get<std::int64_t>();
    m.dataset = doc.at("dataset").get<std::string>();
    if (doc.contains("accuracy") && !doc["accuracy"].is_null()) {
      m.accuracy = doc["accuracy"].get<double>();
    }
    for (const auto& layer : doc.at("layers")) {
      LayerEntry entry;
      entry.name = layer.at("name").get<std::string>();
      std::filesystem::path p = layer.at("path").get<std::string>();
      entry.path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
      entry.rows = layer.at("rows").get<std::size_t>();
      entry.cols = layer.at("cols").get<std::size_t>();
      m.layers.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw FormatError(fmt::format("manifest: {}", e.what()));
  }
  return m;
}

ActivationManifest read_manifest(const std::filesystem::path& manifest_path) {
  const auto bytes = read_file_bytes(manifest_path);
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  try {
    return parse_manifest(text, manifest_path.parent_path());
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("{}: {}", manifest_path.string(), e.what()));
  }
}

std::string format_manifest(const ActivationManifest& manifest) {
  json doc;
  doc["model_id"] = manifest.model_id;
  doc["augmentation_id"] = manifest.augmentation_id;
  doc["seed"] = manifest.seed;
  doc["dataset"] = manifest.dataset;
  if (manifest.accuracy) doc["accuracy"] = *manifest.accuracy;
  doc["layers"] = json::array();
  for (const auto& layer : manifest.layers) {
    doc["layers"].push_back({{"name", layer.name},
                             {"path", layer.path.generic_string()},
                             {"rows", layer.rows},
                             {"cols", layer.cols}});
  }
  return doc.dump(2) + "\n";
}

ActivationSet::ActivationSet(ActivationManifest manifest, std::vector<Matrix2D> matrices)
    : manifest_(std::move(manifest)), matrices_(std::move(matrices)) {
  if (manifest_.layers.empty()) {
    throw ValidationError(fmt::format("manifest '{}' lists no layers", manifest_.model_id));
  }
  if (matrices_.size() != manifest_.layers.size()) {
    throw ValidationError(fmt::format("manifest '{}' lists {} layers but {} matrices given",
                                      manifest_.model_id, manifest_.layers.size(),
                                      matrices_.size()));
  }
  for (std::size_t i = 0; i < matrices_.size(); ++i) {
    const auto& decl = manifest_.layers[i];
    const auto& m = matrices_[i];
    if (m.rows() != decl.rows || m.cols() != decl.cols) {
      throw ValidationError(fmt::format("layer '{}': declared {}x{}, file holds {}x{}", decl.name,
                                        decl.rows, decl.cols, m.rows(), m.cols()));
    }
    if (m.rows() != matrices_.front().rows()) {
      throw ValidationError(fmt::format("layer '{}' has {} examples, layer '{}' has {}",
                                        decl.name, m.rows(), manifest_.layers.front().name,
                                        matrices_.front().rows()));
    }
  }
}

ActivationSet load_activation_set(const std::filesystem::path& manifest_path) {
  ActivationManifest manifest = read_manifest(manifest_path);
  if (manifest.layers.empty()) {
    throw ValidationError(fmt::format("{}: layer list is empty", manifest_path.string()));
  }
  std::vector<Matrix2D> matrices;
  matrices.reserve(manifest.layers.size());
  for (const auto& layer : manifest.layers) {
    if (!std::filesystem::exists(layer.path)) {
      throw IoError(fmt::format("layer '{}': missing file '{}'", layer.name, layer.path.string()));
    }
    matrices.push_back(read_npy(layer.path));
  }
  return ActivationSet(std::move(manifest), std::move(matrices));
}

}  // namespace augimpact
