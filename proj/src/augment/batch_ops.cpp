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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>

#include <fmt/format.h>

#include "augimpact/augment.hpp"
#include "augimpact/errors.hpp"

namespace augimpact {
namespace {

void require_pairable(const LabeledBatch& batch, const char* op) {
  if (batch.size() < 2) {
    throw ValidationError(fmt::format("{}: batch needs at least 2 images, got {}", op,
                                      batch.size()));
  }
  batch.validate();
}

void require_permutation(std::span<const std::size_t> perm, std::size_t n) {
  if (perm.size() != n) throw ValidationError("permutation length does not match batch");
  std::vector<bool> seen(n, false);
  for (const std::size_t p : perm) {
    if (p >= n || seen[p]) throw ValidationError("not a permutation");
    seen[p] = true;
  }
}

SoftLabel mix_labels(const SoftLabel& a, const SoftLabel& b, double weight) {
  SoftLabel out{std::vector<double>(a.probabilities.size())};
  for (std::size_t k = 0; k < out.probabilities.size(); ++k) {
    out.probabilities[k] = weight * a.probabilities[k] + (1.0 - weight) * b.probabilities[k];
  }
  return out;
}

}  // namespace

double sample_beta(double alpha, Rng& rng) { return rng.beta(alpha); }

std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i-- > 1;) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

LabeledBatch mixup_with(const LabeledBatch& batch, double lambda,
                        std::span<const std::size_t> perm) {
  require_pairable(batch, "mixup");
  require_permutation(perm, batch.size());
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("mixup: lambda outside [0, 1]");
  LabeledBatch out;
  out.images.reserve(batch.size());
  out.labels.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& a = batch.images[i];
    const auto& b = batch.images[perm[i]];
    ImageTensor mixed = a;
    auto dst = mixed.data();
    const auto src_b = b.data();
    for (std::size_t k = 0; k < dst.size(); ++k) {
      dst[k] = to_pixel(lambda * dst[k] + (1.0 - lambda) * src_b[k]);
    }
    out.images.push_back(std::move(mixed));
    out.labels.push_back(mix_labels(batch.labels[i], batch.labels[perm[i]], lambda));
  }
  return out;
}

LabeledBatch mixup(const LabeledBatch& batch, double alpha, Rng& rng) {
  require_pairable(batch, "mixup");
  const double lambda = sample_beta(alpha, rng);
  const auto perm = random_permutation(batch.size(), rng);
  return mixup_with(batch, lambda, perm);
}

Box sample_cutmix_box(std::size_t height, std::size_t width, double lambda, Rng& rng) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("cutmix: lambda outside [0, 1]");
  const double cut_ratio = std::sqrt(1.0 - lambda);
  const auto h = static_cast<std::int64_t>(height);
  const auto w = static_cast<std::int64_t>(width);
  const auto cut_w = static_cast<std::int64_t>(std::floor(static_cast<double>(w) * cut_ratio));
  const auto cut_h = static_cast<std::int64_t>(std::floor(static_cast<double>(h) * cut_ratio));
  const std::int64_t cx = rng.uniform_int(0, w - 1);
  const std::int64_t cy = rng.uniform_int(0, h - 1);
  auto clip = [](std::int64_t v, std::int64_t hi) {
    return static_cast<std::size_t>(std::clamp<std::int64_t>(v, 0, hi));
  };
  const std::int64_t x1 = cx - cut_w / 2;
  const std::int64_t y1 = cy - cut_h / 2;
  return {clip(x1, w), clip(y1, h), clip(x1 + cut_w, w), clip(y1 + cut_h, h)};
}

double cutmix_label_weight(const Box& box, std::size_t height, std::size_t width) {
  return 1.0 - static_cast<double>(box.area()) / static_cast<double>(height * width);
}

LabeledBatch cutmix_with(const LabeledBatch& batch, std::span<const std::size_t> perm,
                         const Box& box) {
  require_pairable(batch, "cutmix");
  require_permutation(perm, batch.size());
  const std::size_t h = batch.images.front().height();
  const std::size_t w = batch.images.front().width();
  if (box.x1 > box.x2 || box.y1 > box.y2 || box.x2 > w || box.y2 > h) {
    throw ValidationError("cutmix: box outside the image");
  }
  const double weight = cutmix_label_weight(box, h, w);
  LabeledBatch out;
  out.images.reserve(batch.size());
  out.labels.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& partner = batch.images[perm[i]];
    ImageTensor pasted = batch.images[i];
    for (std::size_t y = box.y1; y < box.y2; ++y) {
      for (std::size_t x = box.x1; x < box.x2; ++x) {
        for (std::size_t c = 0; c < pasted.channels(); ++c) pasted.at(y, x, c) = partner.at(y, x, c);
      }
    }
    out.images.push_back(std::move(pasted));
    out.labels.push_back(mix_labels(batch.labels[i], batch.labels[perm[i]], weight));
  }
  return out;
}

LabeledBatch cutmix(const LabeledBatch& batch, double alpha, double apply_probability,
                    Rng& rng) {
  require_pairable(batch, "cutmix");
  if (!(apply_probability >= 0.0 && apply_probability <= 1.0)) {
    throw ValidationError("cutmix: probability outside [0, 1]");
  }
  if (!(rng.uniform() < apply_probability)) return batch;
  const double lambda = sample_beta(alpha, rng);
  const auto perm = random_permutation(batch.size(), rng);
  const auto& first = batch.images.front();
  const Box box = sample_cutmix_box(first.height(), first.width(), lambda, rng);
  return cutmix_with(batch, perm, box);
}

std::uint64_t batch_digest(const LabeledBatch& batch) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&hash](std::uint8_t byte) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  };
  for (const auto& img : batch.images) {
    for (const std::uint8_t s : img.data()) mix(s);
  }
  for (const auto& label : batch.labels) {
    for (const double p : label.probabilities) {
      const auto bits = std::bit_cast<std::uint64_t>(p);
      for (int b = 0; b < 8; ++b) mix(static_cast<std::uint8_t>(bits >> (8 * b)));
    }
  }
  return hash;
}

}  // namespace augimpact
