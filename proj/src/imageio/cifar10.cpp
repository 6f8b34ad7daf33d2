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

#include <fmt/format.h>

#include "augimpact/errors.hpp"
#include "augimpact/imageio.hpp"

namespace augimpact {

ImageTensor::ImageTensor(std::size_t height, std::size_t width, std::size_t channels,
                         std::uint8_t fill)
    : ImageTensor(height, width, channels,
                  std::vector<std::uint8_t>(height * width * channels, fill)) {}

ImageTensor::ImageTensor(std::size_t height, std::size_t width, std::size_t channels,
                         std::vector<std::uint8_t> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  if (channels_ != 1 && channels_ != 3) {
    throw ValidationError(fmt::format("image: channels must be 1 or 3, got {}", channels_));
  }
  if (data_.size() != height_ * width_ * channels_) {
    throw ValidationError(fmt::format("image: {} samples for shape {}x{}x{}", data_.size(),
                                      height_, width_, channels_));
  }
}

Dataset parse_cifar10_bin(std::span<const std::uint8_t> bytes, std::string name) {
  if (bytes.size() % kCifarRecordBytes != 0) {
    throw FormatError(fmt::format("cifar10: {} bytes is not a multiple of the {}-byte record",
                                  bytes.size(), kCifarRecordBytes));
  }
  const std::size_t count = bytes.size() / kCifarRecordBytes;
  constexpr std::size_t plane = kCifarSide * kCifarSide;

  Dataset out;
  out.name = std::move(name);
  out.class_count = kCifarClasses;
  out.images.reserve(count);
  out.labels.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    const auto record = bytes.subspan(r * kCifarRecordBytes, kCifarRecordBytes);
    if (record[0] >= kCifarClasses) {
      throw FormatError(fmt::format("cifar10: record {} has label {}", r, record[0]));
    }
    std::vector<std::uint8_t> pixels(kCifarImageBytes);
    for (std::size_t p = 0; p < plane; ++p) {
      for (std::size_t c = 0; c < 3; ++c) pixels[p * 3 + c] = record[1 + c * plane + p];
    }
    out.labels.push_back(record[0]);
    out.images.emplace_back(kCifarSide, kCifarSide, 3, std::move(pixels));
  }
  return out;
}

Dataset read_cifar10_files(std::span<const std::filesystem::path> paths) {
  Dataset all;
  all.name = "cifar10";
  all.class_count = kCifarClasses;
  for (const auto& path : paths) {
    const auto bytes = read_file_bytes(path);
    Dataset part;
    try {
      part = parse_cifar10_bin(bytes, path.filename().string());
    } catch (const FormatError& e) {
      throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
    }
    for (auto& img : part.images) all.images.push_back(std::move(img));
    all.labels.insert(all.labels.end(), part.labels.begin(), part.labels.end());
  }
  return all;
}

std::vector<std::uint8_t> encode_cifar10_bin(const Dataset& dataset) {
  constexpr std::size_t plane = kCifarSide * kCifarSide;
  std::vector<std::uint8_t> out;
  out.reserve(dataset.images.size() * kCifarRecordBytes);
  for (std::size_t i = 0; i < dataset.images.size(); ++i) {
    const auto& img = dataset.images[i];
    if (img.height() != kCifarSide || img.width() != kCifarSide || img.channels() != 3) {
      throw ValidationError("cifar10: only 32x32x3 images can be encoded");
    }
    out.push_back(dataset.labels.at(i));
    const auto data = img.data();
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t p = 0; p < plane; ++p) out.push_back(data[p * 3 + c]);
    }
  }
  return out;
}

}  // namespace augimpact
