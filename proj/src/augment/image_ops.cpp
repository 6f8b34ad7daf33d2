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
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "augimpact/augment.hpp"
#include "augimpact/errors.hpp"

namespace augimpact {

std::uint8_t to_pixel(double value) {
  // nearbyint honours the default round-to-nearest-even mode.
  const double r = std::nearbyint(value);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

SoftLabel SoftLabel::one_hot(std::size_t cls, std::size_t class_count) {
  if (cls >= class_count) {
    throw ValidationError(fmt::format("label {} out of range for {} classes", cls, class_count));
  }
  SoftLabel out{std::vector<double>(class_count, 0.0)};
  out.probabilities[cls] = 1.0;
  return out;
}

void SoftLabel::validate(double tolerance) const {
  double sum = 0.0;
  for (const double p : probabilities) {
    if (!(p >= 0.0)) throw ValidationError("soft label has a negative or NaN entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tolerance) {
    throw ValidationError(fmt::format("soft label sums to {:.17g}", sum));
  }
}

void LabeledBatch::validate() const {
  if (images.size() != labels.size()) {
    throw ValidationError(
        fmt::format("batch has {} images but {} labels", images.size(), labels.size()));
  }
  for (const auto& img : images) {
    if (!img.same_shape(images.front())) throw ValidationError("batch images differ in shape");
  }
  for (const auto& label : labels) {
    label.validate();
    if (label.probabilities.size() != labels.front().probabilities.size()) {
      throw ValidationError("batch labels differ in class count");
    }
  }
}

LabeledBatch make_batch(const Dataset& dataset, std::size_t first, std::size_t count) {
  if (first + count > dataset.images.size()) {
    throw ValidationError(fmt::format("batch [{}, {}) exceeds dataset of {} images", first,
                                      first + count, dataset.images.size()));
  }
  LabeledBatch batch;
  for (std::size_t i = first; i < first + count; ++i) {
    batch.images.push_back(dataset.images[i]);
    batch.labels.push_back(SoftLabel::one_hot(dataset.labels[i], dataset.class_count));
  }
  return batch;
}

ImageTensor horizontal_flip(const ImageTensor& img) {
  ImageTensor out = img;
  const std::size_t w = img.width();
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      for (std::size_t c = 0; c < img.channels(); ++c) out.at(y, x, c) = img.at(y, w - 1 - x, c);
    }
  }
  return out;
}

ImageTensor padded_crop(const ImageTensor& img, std::size_t out_size, std::size_t padding,
                        std::size_t top, std::size_t left) {
  ImageTensor out(out_size, out_size, img.channels(), 0);
  for (std::size_t y = 0; y < out_size; ++y) {
    const std::size_t py = top + y;
    if (py < padding || py >= padding + img.height()) continue;
    for (std::size_t x = 0; x < out_size; ++x) {
      const std::size_t px = left + x;
      if (px < padding || px >= padding + img.width()) continue;
      for (std::size_t c = 0; c < img.channels(); ++c) {
        out.at(y, x, c) = img.at(py - padding, px - padding, c);
      }
    }
  }
  return out;
}

ImageTensor random_crop(const ImageTensor& img, std::size_t out_size, std::size_t padding,
                        Rng& rng) {
  const std::size_t padded_h = img.height() + 2 * padding;
  const std::size_t padded_w = img.width() + 2 * padding;
  if (out_size == 0 || out_size > padded_h || out_size > padded_w) {
    throw ValidationError(fmt::format("random_crop: size {} does not fit padded {}x{}", out_size,
                                      padded_h, padded_w));
  }
  const auto top = static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(padded_h - out_size)));
  const auto left = static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(padded_w - out_size)));
  return padded_crop(img, out_size, padding, top, left);
}

CropRect sample_resized_crop(std::size_t height, std::size_t width,
                             std::pair<double, double> scale, std::pair<double, double> ratio,
                             Rng& rng) {
  const double area = static_cast<double>(height * width);
  const double log_lo = std::log(ratio.first);
  const double log_hi = std::log(ratio.second);
  for (int attempt = 0; attempt < 10; ++attempt) {
    const double target_area = area * rng.uniform(scale.first, scale.second);
    const double aspect = std::exp(rng.uniform(log_lo, log_hi));
    const double w = std::nearbyint(std::sqrt(target_area * aspect));
    const double h = std::nearbyint(std::sqrt(target_area / aspect));
    if (w > 0 && h > 0 && w <= static_cast<double>(width) && h <= static_cast<double>(height)) {
      const auto cw = static_cast<std::size_t>(w);
      const auto ch = static_cast<std::size_t>(h);
      const auto top = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(height - ch)));
      const auto left = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(width - cw)));
      return {top, left, ch, cw};
    }
  }
  // Fallback: central crop with the aspect clamped into range.
  const double in_ratio = static_cast<double>(width) / static_cast<double>(height);
  std::size_t cw = width, ch = height;
  if (in_ratio < ratio.first) {
    ch = static_cast<std::size_t>(std::nearbyint(static_cast<double>(width) / ratio.first));
  } else if (in_ratio > ratio.second) {
    cw = static_cast<std::size_t>(std::nearbyint(static_cast<double>(height) * ratio.second));
  }
  return {(height - ch) / 2, (width - cw) / 2, ch, cw};
}

ImageTensor resize_bilinear(const ImageTensor& img, const CropRect& rect, std::size_t out_h,
                            std::size_t out_w) {
  ImageTensor out(out_h, out_w, img.channels(), 0);
  const double sy = static_cast<double>(rect.height) / static_cast<double>(out_h);
  const double sx = static_cast<double>(rect.width) / static_cast<double>(out_w);
  const double max_y = static_cast<double>(rect.height - 1);
  const double max_x = static_cast<double>(rect.width - 1);
  for (std::size_t y = 0; y < out_h; ++y) {
    const double src_y = std::clamp((static_cast<double>(y) + 0.5) * sy - 0.5, 0.0, max_y);
    const auto y0 = static_cast<std::size_t>(src_y);
    const std::size_t y1 = std::min(y0 + 1, rect.height - 1);
    const double wy = src_y - static_cast<double>(y0);
    for (std::size_t x = 0; x < out_w; ++x) {
      const double src_x = std::clamp((static_cast<double>(x) + 0.5) * sx - 0.5, 0.0, max_x);
      const auto x0 = static_cast<std::size_t>(src_x);
      const std::size_t x1 = std::min(x0 + 1, rect.width - 1);
      const double wx = src_x - static_cast<double>(x0);
      for (std::size_t c = 0; c < img.channels(); ++c) {
        auto px = [&](std::size_t yy, std::size_t xx) {
          return static_cast<double>(img.at(rect.top + yy, rect.left + xx, c));
        };
        const double top = px(y0, x0) * (1.0 - wx) + px(y0, x1) * wx;
        const double bottom = px(y1, x0) * (1.0 - wx) + px(y1, x1) * wx;
        out.at(y, x, c) = to_pixel(top * (1.0 - wy) + bottom * wy);
      }
    }
  }
  return out;
}

ImageTensor random_resized_crop(const ImageTensor& img, std::size_t out_size,
                                std::pair<double, double> scale,
                                std::pair<double, double> ratio, Rng& rng) {
  const CropRect rect = sample_resized_crop(img.height(), img.width(), scale, ratio, rng);
  return resize_bilinear(img, rect, out_size, out_size);
}

ImageTensor adjust_brightness(const ImageTensor& img, double factor) {
  ImageTensor out = img;
  for (auto& s : out.data()) s = to_pixel(static_cast<double>(s) * factor);
  return out;
}

ImageTensor jitter_brightness(const ImageTensor& img, double factor, Rng& rng) {
  if (!(factor >= 0.0)) throw ValidationError("brightness factor must be >= 0");
  const double b = rng.uniform(std::max(0.0, 1.0 - factor), 1.0 + factor);
  return adjust_brightness(img, b);
}

namespace {

struct Hsv {
  double h, s, v;
};

Hsv rgb_to_hsv(double r, double g, double b) {
  const double maxc = std::max({r, g, b});
  const double minc = std::min({r, g, b});
  if (maxc == minc) return {0.0, 0.0, maxc};
  const double delta = maxc - minc;
  const double s = delta / maxc;
  const double rc = (maxc - r) / delta;
  const double gc = (maxc - g) / delta;
  const double bc = (maxc - b) / delta;
  double h;
  if (r == maxc) {
    h = bc - gc;
  } else if (g == maxc) {
    h = 2.0 + rc - bc;
  } else {
    h = 4.0 + gc - rc;
  }
  h = std::fmod(h / 6.0, 1.0);
  if (h < 0.0) h += 1.0;
  return {h, s, maxc};
}

void hsv_to_rgb(const Hsv& hsv, double& r, double& g, double& b) {
  if (hsv.s == 0.0) {
    r = g = b = hsv.v;
    return;
  }
  const double scaled = hsv.h * 6.0;
  const double sector = std::floor(scaled);
  const double f = scaled - sector;
  const double p = hsv.v * (1.0 - hsv.s);
  const double q = hsv.v * (1.0 - hsv.s * f);
  const double t = hsv.v * (1.0 - hsv.s * (1.0 - f));
  switch (static_cast<int>(sector) % 6) {
    case 0: r = hsv.v; g = t; b = p; break;
    case 1: r = q; g = hsv.v; b = p; break;
    case 2: r = p; g = hsv.v; b = t; break;
    case 3: r = p; g = q; b = hsv.v; break;
    case 4: r = t; g = p; b = hsv.v; break;
    default: r = hsv.v; g = p; b = q; break;
  }
}

}  // namespace

ImageTensor adjust_hue(const ImageTensor& img, double shift) {
  if (img.channels() != 3) {
    throw ValidationError(fmt::format("hue: expected 3 channels, got {}", img.channels()));
  }
  ImageTensor out = img;
  auto data = out.data();
  for (std::size_t i = 0; i < data.size(); i += 3) {
    Hsv hsv = rgb_to_hsv(data[i] / 255.0, data[i + 1] / 255.0, data[i + 2] / 255.0);
    hsv.h = std::fmod(hsv.h + shift, 1.0);
    if (hsv.h < 0.0) hsv.h += 1.0;
    if (hsv.h >= 1.0) hsv.h = 0.0;
    double r, g, b;
    hsv_to_rgb(hsv, r, g, b);
    data[i] = to_pixel(r * 255.0);
    data[i + 1] = to_pixel(g * 255.0);
    data[i + 2] = to_pixel(b * 255.0);
  }
  return out;
}

ImageTensor jitter_hue(const ImageTensor& img, double factor, Rng& rng) {
  if (!(factor >= 0.0 && factor <= 0.5)) throw ValidationError("hue factor must be in [0, 0.5]");
  if (img.channels() != 3) {
    throw ValidationError(fmt::format("hue: expected 3 channels, got {}", img.channels()));
  }
  return adjust_hue(img, rng.uniform(-factor, factor));
}

ImageTensor solarize(const ImageTensor& img, double threshold) {
  ImageTensor out = img;
  for (auto& s : out.data()) {
    if (s >= threshold) s = static_cast<std::uint8_t>(255 - s);
  }
  return out;
}

Box sample_cutout_box(std::size_t height, std::size_t width, std::size_t size, Rng& rng) {
  if (size == 0) throw ValidationError("cutout size must be positive");
  const auto h = static_cast<std::int64_t>(height);
  const auto w = static_cast<std::int64_t>(width);
  const auto half = static_cast<std::int64_t>(size / 2);
  const auto side = static_cast<std::int64_t>(size);
  const std::int64_t cy = rng.uniform_int(0, h - 1);
  const std::int64_t cx = rng.uniform_int(0, w - 1);
  auto clip = [](std::int64_t v, std::int64_t hi) {
    return static_cast<std::size_t>(std::clamp<std::int64_t>(v, 0, hi));
  };
  return {clip(cx - half, w), clip(cy - half, h), clip(cx - half + side, w),
          clip(cy - half + side, h)};
}

ImageTensor fill_box(const ImageTensor& img, const Box& box, std::uint8_t fill) {
  ImageTensor out = img;
  for (std::size_t y = box.y1; y < box.y2; ++y) {
    for (std::size_t x = box.x1; x < box.x2; ++x) {
      for (std::size_t c = 0; c < img.channels(); ++c) out.at(y, x, c) = fill;
    }
  }
  return out;
}

ImageTensor cutout(const ImageTensor& img, std::size_t size, std::uint8_t fill, Rng& rng) {
  return fill_box(img, sample_cutout_box(img.height(), img.width(), size, rng), fill);
}

}  // namespace augimpact
