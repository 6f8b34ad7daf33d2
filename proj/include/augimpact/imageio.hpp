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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "augimpact/matrix.hpp"

namespace augimpact {

/// H x W x C image with 8-bit samples, row-major and channel-interleaved.
class ImageTensor {
 public:
  ImageTensor() = default;
  ImageTensor(std::size_t height, std::size_t width, std::size_t channels,
              std::uint8_t fill = 0);
  /// Throws ValidationError if the data length does not match the shape or
  /// channels is not 1 or 3.
  ImageTensor(std::size_t height, std::size_t width, std::size_t channels,
              std::vector<std::uint8_t> data);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t channels() const { return channels_; }
  std::size_t pixel_count() const { return height_ * width_; }

  std::uint8_t& at(std::size_t y, std::size_t x, std::size_t c) {
    return data_[(y * width_ + x) * channels_ + c];
  }
  std::uint8_t at(std::size_t y, std::size_t x, std::size_t c) const {
    return data_[(y * width_ + x) * channels_ + c];
  }

  std::span<std::uint8_t> data() { return data_; }
  std::span<const std::uint8_t> data() const { return data_; }

  bool same_shape(const ImageTensor& other) const {
    return height_ == other.height_ && width_ == other.width_ &&
           channels_ == other.channels_;
  }

  friend bool operator==(const ImageTensor&, const ImageTensor&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::size_t channels_ = 0;
  std::vector<std::uint8_t> data_;
};

struct Dataset {
  std::string name;
  std::size_t class_count = 0;
  std::vector<ImageTensor> images;
  std::vector<std::uint8_t> labels;
};

// CIFAR-10 binary batches: records of 1 label byte followed by 1024 R,
// 1024 G and 1024 B bytes (32x32, planar).
inline constexpr std::size_t kCifarSide = 32;
inline constexpr std::size_t kCifarImageBytes = kCifarSide * kCifarSide * 3;
inline constexpr std::size_t kCifarRecordBytes = 1 + kCifarImageBytes;
inline constexpr std::size_t kCifarClasses = 10;

/// Decodes a CIFAR-10 binary batch. Throws FormatError when the length is not
/// a multiple of 3073 or a label byte is >= 10.
Dataset parse_cifar10_bin(std::span<const std::uint8_t> bytes, std::string name = "cifar10");

/// Reads and concatenates one or more CIFAR-10 batch files.
Dataset read_cifar10_files(std::span<const std::filesystem::path> paths);

/// Encodes images back into the planar record layout. Inverse of
/// parse_cifar10_bin for 32x32x3 images.
std::vector<std::uint8_t> encode_cifar10_bin(const Dataset& dataset);

// NPY v1.0, little-endian, C order, 2-D, '<f4' or '<f8'. Nothing else is
// accepted.
Matrix2D decode_npy(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_npy(const Matrix2D& m);
Matrix2D read_npy(const std::filesystem::path& path);
void write_npy(const Matrix2D& m, const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

struct LayerEntry {
  std::string name;
  std::filesystem::path path;
  std::size_t rows = 0;
  std::size_t cols = 0;
};

/// Index of one model run's per-layer activation files. Layers are listed in
/// network depth order.
struct ActivationManifest {
  std::string model_id;
  std::string augmentation_id;
  std::int64_t seed = 0;
  std::string dataset;
  std::vector<LayerEntry> layers;
  /// Test accuracy in percent, if the producer recorded it.
  std::optional<double> accuracy;
};

/// Parses manifest JSON. Relative layer paths are resolved against
/// `base_dir`.
ActivationManifest parse_manifest(std::string_view json_text,
                                  const std::filesystem::path& base_dir = {});
ActivationManifest read_manifest(const std::filesystem::path& manifest_path);
/// Serializes with layer paths written as given (not re-relativized).
std::string format_manifest(const ActivationManifest& manifest);

class ActivationSet {
 public:
  /// Validates that matrices match the manifest's declared shapes and share
  /// one row count; throws ValidationError otherwise.
  ActivationSet(ActivationManifest manifest, std::vector<Matrix2D> matrices);

  const ActivationManifest& manifest() const { return manifest_; }
  const std::vector<Matrix2D>& matrices() const { return matrices_; }
  std::size_t layer_count() const { return matrices_.size(); }
  std::size_t example_count() const { return matrices_.front().rows(); }
  const Matrix2D& layer(std::size_t i) const { return matrices_.at(i); }
  const std::string& layer_name(std::size_t i) const { return manifest_.layers.at(i).name; }

 private:
  ActivationManifest manifest_;
  std::vector<Matrix2D> matrices_;
};

/// Loads every layer listed by the manifest. Errors: IoError for missing
/// files, ValidationError for shape mismatches, inconsistent example counts
/// or an empty layer list.
ActivationSet load_activation_set(const std::filesystem::path& manifest_path);

}  // namespace augimpact
