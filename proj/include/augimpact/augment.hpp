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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "augimpact/autoaugment.hpp"
#include "augimpact/imageio.hpp"
#include "augimpact/rng.hpp"

namespace augimpact {

// Every float-to-pixel conversion in this module is round-half-even followed
// by a clamp to [0, 255].
std::uint8_t to_pixel(double value);

struct SoftLabel {
  std::vector<double> probabilities;

  static SoftLabel one_hot(std::size_t cls, std::size_t class_count);
  /// Throws ValidationError unless entries are >= 0 and sum to 1 within
  /// `tolerance`.
  void validate(double tolerance = 1e-12) const;
  friend bool operator==(const SoftLabel&, const SoftLabel&) = default;
};

struct LabeledBatch {
  std::vector<ImageTensor> images;
  std::vector<SoftLabel> labels;

  std::size_t size() const { return images.size(); }
  /// Equal lengths, uniform image shape, simplex labels.
  void validate() const;
  friend bool operator==(const LabeledBatch&, const LabeledBatch&) = default;
};

/// One-hot batch of `count` images starting at `first`.
LabeledBatch make_batch(const Dataset& dataset, std::size_t first, std::size_t count);

/// Half-open pixel rectangle [x1, x2) x [y1, y2).
struct Box {
  std::size_t x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  std::size_t area() const { return (x2 - x1) * (y2 - y1); }
  friend bool operator==(const Box&, const Box&) = default;
};

// --- single-image ops -------------------------------------------------------

ImageTensor horizontal_flip(const ImageTensor& img);

/// Applies `op` iff rng.uniform() < p. Exactly one draw either way.
template <typename Op>
ImageTensor random_apply(const ImageTensor& img, Op&& op, double p, Rng& rng) {
  const bool apply = rng.uniform() < p;
  return apply ? op(img) : img;
}

/// Zero-pads each side by `padding`, then crops out_size x out_size. Draws:
/// top = uniform_int(0, H + 2p - out), then left = uniform_int(0, W + 2p - out).
ImageTensor random_crop(const ImageTensor& img, std::size_t out_size, std::size_t padding,
                        Rng& rng);
/// Deterministic part of random_crop for a given offset in padded coordinates.
ImageTensor padded_crop(const ImageTensor& img, std::size_t out_size, std::size_t padding,
                        std::size_t top, std::size_t left);

struct CropRect {
  std::size_t top = 0, left = 0, height = 0, width = 0;
  friend bool operator==(const CropRect&, const CropRect&) = default;
};

/// Up to 10 attempts, each drawing area = H*W*uniform(scale) then
/// log_ratio = uniform(log ratio_lo, log ratio_hi), width/height rounded
/// half-even; an attempt that fits draws top then left with uniform_int.
/// After 10 misses, a centered crop with the aspect clamped to `ratio`.
CropRect sample_resized_crop(std::size_t height, std::size_t width,
                             std::pair<double, double> scale, std::pair<double, double> ratio,
                             Rng& rng);
ImageTensor random_resized_crop(const ImageTensor& img, std::size_t out_size,
                                std::pair<double, double> scale,
                                std::pair<double, double> ratio, Rng& rng);
/// Bilinear resize of a sub-rectangle with half-pixel centers and edge
/// clamping. Identity when the rectangle is the whole image and sizes match.
ImageTensor resize_bilinear(const ImageTensor& img, const CropRect& rect, std::size_t out_h,
                            std::size_t out_w);

/// Multiplies every sample by `factor`.
ImageTensor adjust_brightness(const ImageTensor& img, double factor);
/// One draw: b = uniform(max(0, 1 - factor), 1 + factor).
ImageTensor jitter_brightness(const ImageTensor& img, double factor, Rng& rng);

/// Rotates hue by `shift` turns (HSV hue in [0, 1), wraps modulo 1).
/// Requires 3 channels.
ImageTensor adjust_hue(const ImageTensor& img, double shift);
/// One draw: h = uniform(-factor, factor). factor must lie in [0, 0.5].
ImageTensor jitter_hue(const ImageTensor& img, double factor, Rng& rng);

/// sample -> 255 - sample wherever sample >= threshold.
ImageTensor solarize(const ImageTensor& img, double threshold);

/// Square of side `size` whose center (cy, cx) is drawn as cy = uniform_int(0, H-1)
/// then cx = uniform_int(0, W-1); y1 = cy - size/2, y2 = y1 + size, clipped.
Box sample_cutout_box(std::size_t height, std::size_t width, std::size_t size, Rng& rng);
ImageTensor fill_box(const ImageTensor& img, const Box& box, std::uint8_t fill);
ImageTensor cutout(const ImageTensor& img, std::size_t size, std::uint8_t fill, Rng& rng);

// --- batch ops ----------------------------------------------------------------

/// Beta(alpha, alpha); exactly one uniform draw when alpha == 1.
double sample_beta(double alpha, Rng& rng);

/// Fisher-Yates: for i = n-1 down to 1, swap(i, uniform_int(0, i)).
std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng);

/// image_i <- round(lambda * image_i + (1 - lambda) * image_perm(i)), same
/// for labels.
LabeledBatch mixup_with(const LabeledBatch& batch, double lambda,
                        std::span<const std::size_t> perm);
/// Draws lambda = sample_beta(alpha), then one permutation.
LabeledBatch mixup(const LabeledBatch& batch, double alpha, Rng& rng);

/// Side fractions sqrt(1 - lambda): cut_w = floor(W * r), cut_h = floor(H * r);
/// center cx = uniform_int(0, W-1) then cy = uniform_int(0, H-1);
/// x1 = cx - cut_w/2, x2 = x1 + cut_w, clipped to the image (same for y).
Box sample_cutmix_box(std::size_t height, std::size_t width, double lambda, Rng& rng);
/// Label weight for a pasted box: 1 - area / (H * W).
double cutmix_label_weight(const Box& box, std::size_t height, std::size_t width);
/// Pastes partner pixels inside `box` and mixes labels with the adjusted
/// weight.
LabeledBatch cutmix_with(const LabeledBatch& batch, std::span<const std::size_t> perm,
                         const Box& box);
/// Draws: gate uniform(); when it is < apply_probability, lambda, permutation
/// and box in that order.
LabeledBatch cutmix(const LabeledBatch& batch, double alpha, double apply_probability,
                    Rng& rng);

// --- spec-driven dispatch -----------------------------------------------------

enum class AugmentKind {
  kNone,
  kHorizontalFlip,
  kRandomCrop,
  kRandomResizedCrop,
  kBrightness,
  kHue,
  kSolarize,
  kCutout,
  kMixup,
  kCutmix,
  kAutoAugment,
  kFlipAndCrop,
};

std::string_view to_string(AugmentKind kind);
/// Accepts the names used in spec files, e.g. "hflip+random_crop".
AugmentKind parse_augment_kind(std::string_view name);

/// One augmentation configuration. `params` holds kind-specific numbers;
/// absent keys take the documented defaults:
///
///   hflip              (none)                     probability 0.5
///   random_crop        size 32, padding 4         probability 1
///   random_resized_crop size (input side), scale_min 0.08, scale_max 1,
///                      ratio_min 3/4, ratio_max 4/3 probability 0.5
///   brightness         factor 0.5                 probability 1
///   hue                factor 0.15                probability 1
///   solarize           threshold 127              probability 0.5
///   cutout             size 16, fill 128          probability 1
///   mixup              alpha 1                    probability 1
///   cutmix             alpha 1                    probability 0.5
///   autoaugment        policy table (CIFAR-10 by default) probability 1
///   hflip+random_crop  size 32, padding 4; probability gates the flip only
struct AugmentSpec {
  AugmentKind kind = AugmentKind::kNone;
  std::map<std::string, double> params;
  double probability = 1.0;
  std::uint64_t seed = 0;
  std::optional<PolicyTable> policy;

  double param(const std::string& key, double fallback) const;
  /// Throws ValidationError when a parameter is outside its range.
  void validate() const;
};

double default_probability(AugmentKind kind);

/// Parses {"kind", "params", "probability", "seed"}; other keys are a
/// FormatError. For autoaugment an optional params.policy string names a
/// policy file relative to `base_dir`.
AugmentSpec parse_augment_spec(std::string_view json_text,
                               const std::filesystem::path& base_dir = {});
AugmentSpec read_augment_spec(const std::filesystem::path& path);

/// Applies `spec` to the batch. Per-image ops walk the batch in order, each
/// image consuming its draws before the next one starts; batch ops (mixup,
/// cutmix) draw once per batch, mixup behind a one-draw probability gate.
LabeledBatch apply_spec(const AugmentSpec& spec, const LabeledBatch& batch, Rng& rng);

/// FNV-1a 64 over every image's samples followed by every label's
/// little-endian doubles. Used to pin golden outputs.
std::uint64_t batch_digest(const LabeledBatch& batch);

}  // namespace augimpact
