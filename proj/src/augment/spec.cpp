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

#include <array>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "augimpact/augment.hpp"
#include "augimpact/errors.hpp"
#include "json.hpp"

namespace augimpact {
namespace {

constexpr std::array<std::pair<AugmentKind, std::string_view>, 12> kKindNames{{
    {AugmentKind::kNone, "none"},
    {AugmentKind::kHorizontalFlip, "hflip"},
    {AugmentKind::kRandomCrop, "random_crop"},
    {AugmentKind::kRandomResizedCrop, "random_resized_crop"},
    {AugmentKind::kBrightness, "brightness"},
    {AugmentKind::kHue, "hue"},
    {AugmentKind::kSolarize, "solarize"},
    {AugmentKind::kCutout, "cutout"},
    {AugmentKind::kMixup, "mixup"},
    {AugmentKind::kCutmix, "cutmix"},
    {AugmentKind::kAutoAugment, "autoaugment"},
    {AugmentKind::kFlipAndCrop, "hflip+random_crop"},
}};

void require(bool ok, std::string_view message) {
  if (!ok) throw ValidationError(std::string(message));
}

std::size_t as_size(double v, std::string_view what) {
  require(v >= 0.0 && v == std::floor(v), fmt::format("{} must be a non-negative integer", what));
  return static_cast<std::size_t>(v);
}

template <typename PerImage>
LabeledBatch map_images(const LabeledBatch& batch, PerImage&& fn) {
  LabeledBatch out = batch;
  for (auto& img : out.images) img = fn(img);
  return out;
}

}  // namespace

std::string_view to_string(AugmentKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

AugmentKind parse_augment_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw ValidationError(fmt::format("unknown augmentation kind '{}'", name));
}

double default_probability(AugmentKind kind) {
  switch (kind) {
    case AugmentKind::kHorizontalFlip:
    case AugmentKind::kRandomResizedCrop:
    case AugmentKind::kSolarize:
    case AugmentKind::kCutmix:
    case AugmentKind::kFlipAndCrop:
      return 0.5;
    default:
      return 1.0;
  }
}

double AugmentSpec::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void AugmentSpec::validate() const {
  require(probability >= 0.0 && probability <= 1.0, "probability must lie in [0, 1]");
  switch (kind) {
    case AugmentKind::kRandomCrop:
    case AugmentKind::kFlipAndCrop:
      require(as_size(param("size", 32), "size") > 0, "crop size must be positive");
      as_size(param("padding", 4), "padding");
      break;
    case AugmentKind::kRandomResizedCrop: {
      if (params.contains("size")) require(as_size(param("size", 0), "size") > 0, "size must be positive");
      const double s0 = param("scale_min", 0.08), s1 = param("scale_max", 1.0);
      const double r0 = param("ratio_min", 3.0 / 4.0), r1 = param("ratio_max", 4.0 / 3.0);
      require(0.0 < s0 && s0 <= s1 && s1 <= 1.0, "scale must satisfy 0 < min <= max <= 1");
      require(0.0 < r0 && r0 <= r1, "ratio must satisfy 0 < min <= max");
      break;
    }
    case AugmentKind::kBrightness:
      require(param("factor", 0.5) >= 0.0, "brightness factor must be >= 0");
      break;
    case AugmentKind::kHue: {
      const double f = param("factor", 0.15);
      require(f >= 0.0 && f <= 0.5, "hue factor must lie in [0, 0.5]");
      break;
    }
    case AugmentKind::kSolarize: {
      const double t = param("threshold", 127);
      require(t >= 0.0 && t <= 256.0, "solarize threshold must lie in [0, 256]");
      break;
    }
    case AugmentKind::kCutout:
      require(as_size(param("size", 16), "size") > 0, "cutout size must be positive");
      require(as_size(param("fill", 128), "fill") <= 255, "cutout fill must lie in [0, 255]");
      break;
    case AugmentKind::kMixup:
    case AugmentKind::kCutmix:
      require(param("alpha", 1.0) > 0.0, "alpha must be positive");
      break;
    case AugmentKind::kAutoAugment:
      require(!policy || !policy->empty(), "autoaugment policy is empty");
      break;
    case AugmentKind::kNone:
    case AugmentKind::kHorizontalFlip:
      break;
  }
}

AugmentSpec parse_augment_spec(std::string_view json_text, const std::filesystem::path& base_dir) {
  using nlohmann::json;
  AugmentSpec spec;
  try {
    const json doc = json::parse(json_text);
    for (const auto& [key, value] : doc.items()) {
      if (key != "kind" && key != "params" && key != "probability" && key != "seed") {
        throw FormatError(fmt::format("augment spec: unknown key '{}'", key));
      }
    }
    spec.kind = parse_augment_kind(doc.at("kind").get<std::string>());
    spec.probability = default_probability(spec.kind);
    if (doc.contains("params")) {
      for (const auto& [key, value] : doc["params"].items()) {
        if (key == "policy" && value.is_string()) {
          std::filesystem::path p = value.get<std::string>();
          spec.policy = read_policy(p.is_relative() && !base_dir.empty() ? base_dir / p : p);
          continue;
        }
        spec.params[key] = value.get<double>();
      }
    }
    if (doc.contains("probability")) spec.probability = doc["probability"].get<double>();
    if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw FormatError(fmt::format("augment spec: {}", e.what()));
  }
  spec.validate();
  return spec;
}

AugmentSpec read_augment_spec(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return parse_augment_spec(
      std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
      path.parent_path());
}

LabeledBatch apply_spec(const AugmentSpec& spec, const LabeledBatch& batch, Rng& rng) {
  spec.validate();
  batch.validate();
  const double p = spec.probability;
  switch (spec.kind) {
    case AugmentKind::kNone:
      return batch;
    case AugmentKind::kHorizontalFlip:
      return map_images(batch, [&](const ImageTensor& img) {
        return random_apply(img, horizontal_flip, p, rng);
      });
    case AugmentKind::kRandomCrop: {
      const std::size_t size = as_size(spec.param("size", 32), "size");
      const std::size_t padding = as_size(spec.param("padding", 4), "padding");
      return map_images(batch, [&](const ImageTensor& img) {
        return random_apply(
            img, [&](const ImageTensor& im) { return random_crop(im, size, padding, rng); }, p,
            rng);
      });
    }
    case AugmentKind::kRandomResizedCrop: {
      const std::pair scale{spec.param("scale_min", 0.08), spec.param("scale_max", 1.0)};
      const std::pair ratio{spec.param("ratio_min", 3.0 / 4.0), spec.param("ratio_max", 4.0 / 3.0)};
      return map_images(batch, [&](const ImageTensor& img) {
        const std::size_t size =
            spec.params.contains("size") ? as_size(spec.param("size", 0), "size") : img.height();
        return random_apply(
            img,
            [&](const ImageTensor& im) { return random_resized_crop(im, size, scale, ratio, rng); },
            p, rng);
      });
    }
    case AugmentKind::kBrightness: {
      const double factor = spec.param("factor", 0.5);
      return map_images(batch, [&](const ImageTensor& img) {
        return random_apply(
            img, [&](const ImageTensor& im) { return jitter_brightness(im, factor, rng); }, p, rng);
      });
    }
    case AugmentKind::kHue: {
      const double factor = spec.param("factor", 0.15);
      return map_images(batch, [&](const ImageTensor& img) {
        return random_apply(
            img, [&](const ImageTensor& im) { return jitter_hue(im, factor, rng); }, p, rng);
      });
    }
    case AugmentKind::kSolarize: {
      const double threshold = spec.param("threshold", 127);
      return map_images(batch, [&](const ImageTensor& img) {
        return random_apply(
            img, [&](const ImageTensor& im) { return solarize(im, threshold); }, p, rng);
      });
    }
    case AugmentKind::kCutout: {
      const std::size_t size = as_size(spec.param("size", 16), "size");
      const auto fill = static_cast<std::uint8_t>(as_size(spec.param("fill", 128), "fill"));
      return map_images(batch, [&](const ImageTensor& img) {
        return random_apply(
            img, [&](const ImageTensor& im) { return cutout(im, size, fill, rng); }, p, rng);
      });
    }
    case AugmentKind::kMixup: {
      if (batch.size() < 2) throw ValidationError("mixup: batch needs at least 2 images");
      const bool apply = rng.uniform() < p;
      return apply ? mixup(batch, spec.param("alpha", 1.0), rng) : batch;
    }
    case AugmentKind::kCutmix:
      return cutmix(batch, spec.param("alpha", 1.0), p, rng);
    case AugmentKind::kAutoAugment: {
      const PolicyTable policy = spec.policy ? *spec.policy : default_cifar10_policy();
      return map_images(batch, [&](const ImageTensor& img) {
        return random_apply(
            img, [&](const ImageTensor& im) { return autoaugment(im, policy, rng); }, p, rng);
      });
    }
    case AugmentKind::kFlipAndCrop: {
      const std::size_t size = as_size(spec.param("size", 32), "size");
      const std::size_t padding = as_size(spec.param("padding", 4), "padding");
      return map_images(batch, [&](const ImageTensor& img) {
        const ImageTensor flipped = random_apply(img, horizontal_flip, p, rng);
        return random_crop(flipped, size, padding, rng);
      });
    }
  }
  throw ValidationError("unhandled augmentation kind");
}

}  // namespace augimpact
