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
#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "augimpact/augment.hpp"
#include "augimpact/autoaugment.hpp"
#include "augimpact/errors.hpp"
#include "json.hpp"
#include "sampling.hpp"

namespace augimpact {
namespace {

struct OpInfo {
  AutoOp op;
  std::string_view name;
  double lo;
  double hi;
  bool is_signed;
};

constexpr std::array<OpInfo, 14> kOps{{
    {AutoOp::kShearX, "shear_x", 0.0, 1.0, true},
    {AutoOp::kShearY, "shear_y", 0.0, 1.0, true},
    {AutoOp::kTranslateX, "translate_x", 0.0, 1.0, true},
    {AutoOp::kTranslateY, "translate_y", 0.0, 1.0, true},
    {AutoOp::kRotate, "rotate", 0.0, 180.0, true},
    {AutoOp::kColor, "color", 0.0, 1.0, true},
    {AutoOp::kPosterize, "posterize", 1.0, 8.0, false},
    {AutoOp::kSolarize, "solarize", 0.0, 256.0, false},
    {AutoOp::kContrast, "contrast", 0.0, 1.0, true},
    {AutoOp::kSharpness, "sharpness", 0.0, 1.0, true},
    {AutoOp::kBrightness, "brightness", 0.0, 1.0, true},
    {AutoOp::kAutoContrast, "autocontrast", 0.0, 0.0, false},
    {AutoOp::kEqualize, "equalize", 0.0, 0.0, false},
    {AutoOp::kInvert, "invert", 0.0, 0.0, false},
}};

const OpInfo& info(AutoOp op) {
  return *std::find_if(kOps.begin(), kOps.end(), [op](const OpInfo& i) { return i.op == op; });
}

// Maps output pixel (x, y) to the source position (a*x + b*y + c, d*x + e*y + f).
struct InverseAffine {
  double a, b, c, d, e, f;
};

ImageTensor warp(const ImageTensor& img, const InverseAffine& m, std::uint8_t fill) {
  ImageTensor out(img.height(), img.width(), img.channels(), 0);
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) {
      const double fx = static_cast<double>(x);
      const double fy = static_cast<double>(y);
      const double sx = m.a * fx + m.b * fy + m.c;
      const double sy = m.d * fx + m.e * fy + m.f;
      for (std::size_t c = 0; c < img.channels(); ++c) {
        out.at(y, x, c) = to_pixel(detail::sample_bilinear(img, sx, sy, c, fill));
      }
    }
  }
  return out;
}

// 8-bit luma with the ITU-R 601 weights in 16.16 fixed point.
std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return static_cast<std::uint8_t>((r * 19595 + g * 38470 + b * 7471 + 0x8000) >> 16);
}

// Single-precision interpolation truncated toward zero, matching the
// reference imaging library's blend.
ImageTensor blend(const ImageTensor& degenerate, const ImageTensor& img, double factor) {
  ImageTensor out = img;
  auto dst = out.data();
  const auto deg = degenerate.data();
  const auto alpha = static_cast<float>(factor);
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const float v = static_cast<float>(deg[i]) + alpha * static_cast<float>(int{dst[i]} - int{deg[i]});
    dst[i] = v <= 0.0f ? 0 : v >= 255.0f ? 255 : static_cast<std::uint8_t>(v);
  }
  return out;
}

ImageTensor grayscale_like(const ImageTensor& img) {
  if (img.channels() == 1) return img;
  ImageTensor out = img;
  auto d = out.data();
  for (std::size_t i = 0; i < d.size(); i += 3) {
    const std::uint8_t l = luma(d[i], d[i + 1], d[i + 2]);
    d[i] = d[i + 1] = d[i + 2] = l;
  }
  return out;
}

ImageTensor contrast_degenerate(const ImageTensor& img) {
  const ImageTensor gray = grayscale_like(img);
  double sum = 0.0;
  const auto d = gray.data();
  for (std::size_t i = 0; i < d.size(); i += img.channels()) sum += d[i];
  const auto mean = static_cast<std::uint8_t>(
      std::floor(sum / static_cast<double>(img.pixel_count()) + 0.5));
  return ImageTensor(img.height(), img.width(), img.channels(), mean);
}

// 3x3 smoothing kernel [1 1 1; 1 5 1; 1 1 1] / 13 on interior pixels, border
// pixels unchanged.
ImageTensor smooth_degenerate(const ImageTensor& img) {
  ImageTensor out = img;
  if (img.height() < 3 || img.width() < 3) return out;
  for (std::size_t y = 1; y + 1 < img.height(); ++y) {
    for (std::size_t x = 1; x + 1 < img.width(); ++x) {
      for (std::size_t c = 0; c < img.channels(); ++c) {
        int acc = 4 * img.at(y, x, c);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) acc += img.at(y + dy, x + dx, c);
        }
        out.at(y, x, c) = to_pixel(acc / 13.0);
      }
    }
  }
  return out;
}

ImageTensor posterize(const ImageTensor& img, int bits) {
  const auto mask = static_cast<std::uint8_t>(~((1u << (8 - bits)) - 1u) & 0xffu);
  ImageTensor out = img;
  for (auto& s : out.data()) s &= mask;
  return out;
}

ImageTensor autocontrast(const ImageTensor& img) {
  ImageTensor out = img;
  for (std::size_t c = 0; c < img.channels(); ++c) {
    std::uint8_t lo = 255, hi = 0;
    for (std::size_t i = c; i < img.data().size(); i += img.channels()) {
      lo = std::min(lo, img.data()[i]);
      hi = std::max(hi, img.data()[i]);
    }
    if (hi <= lo) continue;
    const double scale = 255.0 / (hi - lo);
    const double offset = -lo * scale;
    for (std::size_t i = c; i < out.data().size(); i += img.channels()) {
      // Same lookup arithmetic and truncation as the reference imaging library.
      const double v = img.data()[i] * scale + offset;
      out.data()[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    }
  }
  return out;
}

// Histogram equalization per channel with the step/lut construction used by
// common imaging libraries.
ImageTensor equalize(const ImageTensor& img) {
  ImageTensor out = img;
  for (std::size_t c = 0; c < img.channels(); ++c) {
    std::array<std::size_t, 256> hist{};
    for (std::size_t i = c; i < img.data().size(); i += img.channels()) ++hist[img.data()[i]];
    std::size_t total = 0, last = 0, nonzero = 0;
    for (std::size_t v = 0; v < 256; ++v) {
      if (hist[v] == 0) continue;
      total += hist[v];
      last = hist[v];
      ++nonzero;
    }
    if (nonzero <= 1) continue;
    const std::size_t step = (total - last) / 255;
    if (step == 0) continue;
    std::array<std::uint8_t, 256> lut{};
    std::size_t n = step / 2;
    for (std::size_t v = 0; v < 256; ++v) {
      lut[v] = static_cast<std::uint8_t>(std::min<std::size_t>(n / step, 255));
      n += hist[v];
    }
    for (std::size_t i = c; i < out.data().size(); i += img.channels()) {
      out.data()[i] = lut[img.data()[i]];
    }
  }
  return out;
}

ImageTensor invert(const ImageTensor& img) {
  ImageTensor out = img;
  for (auto& s : out.data()) s = static_cast<std::uint8_t>(255 - s);
  return out;
}

}  // namespace

AutoOp parse_auto_op(std::string_view name) {
  if (name == "saturation") return AutoOp::kColor;
  for (const auto& i : kOps) {
    if (i.name == name) return i.op;
  }
  throw ValidationError(fmt::format("autoaugment: unknown op '{}'", name));
}

std::string_view to_string(AutoOp op) { return info(op).name; }

bool is_signed(AutoOp op) { return info(op).is_signed; }

void validate_magnitude(AutoOp op, double magnitude) {
  const OpInfo& i = info(op);
  if (!(magnitude >= i.lo && magnitude <= i.hi)) {
    throw ValidationError(fmt::format("autoaugment: magnitude {} outside [{}, {}] for {}",
                                      magnitude, i.lo, i.hi, i.name));
  }
  if (op == AutoOp::kPosterize && magnitude != std::floor(magnitude)) {
    throw ValidationError("autoaugment: posterize bits must be an integer");
  }
}

ImageTensor apply_auto_op(const ImageTensor& img, AutoOp op, double magnitude, bool negate,
                          std::uint8_t fill) {
  validate_magnitude(op, magnitude);
  const double m = negate && is_signed(op) ? -magnitude : magnitude;
  const double w = static_cast<double>(img.width());
  const double h = static_cast<double>(img.height());
  switch (op) {
    case AutoOp::kShearX:
      return warp(img, {1.0, m, 0.0, 0.0, 1.0, 0.0}, fill);
    case AutoOp::kShearY:
      return warp(img, {1.0, 0.0, 0.0, m, 1.0, 0.0}, fill);
    case AutoOp::kTranslateX:
      return warp(img, {1.0, 0.0, -m * w, 0.0, 1.0, 0.0}, fill);
    case AutoOp::kTranslateY:
      return warp(img, {1.0, 0.0, 0.0, 0.0, 1.0, -m * h}, fill);
    case AutoOp::kRotate: {
      // Counter-clockwise on screen (y axis points down).
      const double theta = m * std::numbers::pi / 180.0;
      const double cs = std::cos(theta);
      const double sn = std::sin(theta);
      const double cx = (w - 1.0) / 2.0;
      const double cy = (h - 1.0) / 2.0;
      return warp(img, {cs, -sn, cx - cs * cx + sn * cy, sn, cs, cy - sn * cx - cs * cy}, fill);
    }
    case AutoOp::kColor:
      return blend(grayscale_like(img), img, 1.0 + m);
    case AutoOp::kContrast:
      return blend(contrast_degenerate(img), img, 1.0 + m);
    case AutoOp::kSharpness:
      return blend(smooth_degenerate(img), img, 1.0 + m);
    case AutoOp::kBrightness:
      return blend(ImageTensor(img.height(), img.width(), img.channels(), 0), img, 1.0 + m);
    case AutoOp::kPosterize:
      return posterize(img, static_cast<int>(m));
    case AutoOp::kSolarize:
      return solarize(img, m);
    case AutoOp::kAutoContrast:
      return autocontrast(img);
    case AutoOp::kEqualize:
      return equalize(img);
    case AutoOp::kInvert:
      return invert(img);
  }
  throw ValidationError("autoaugment: unhandled op");
}

ImageTensor autoaugment(const ImageTensor& img, const PolicyTable& policy, Rng& rng) {
  if (policy.empty()) throw ValidationError("autoaugment: empty policy");
  const auto index = static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(policy.size()) - 1));
  ImageTensor out = img;
  for (const PolicyOp& step : policy[index]) {
    const double gate = rng.uniform();
    const bool negate = rng.uniform() < 0.5;
    if (gate < step.probability) out = apply_auto_op(out, step.op, step.magnitude, negate);
  }
  return out;
}

PolicyTable default_cifar10_policy() {
  // Magnitude bins 0..9 map linearly onto each op's published range.
  auto op = [](AutoOp kind, double p, int bin) {
    const double t = bin / 9.0;
    double magnitude = 0.0;
    switch (kind) {
      case AutoOp::kShearX:
      case AutoOp::kShearY: magnitude = 0.3 * t; break;
      case AutoOp::kTranslateX:
      case AutoOp::kTranslateY: magnitude = (150.0 / 331.0) * t; break;
      case AutoOp::kRotate: magnitude = 30.0 * t; break;
      case AutoOp::kColor:
      case AutoOp::kContrast:
      case AutoOp::kSharpness:
      case AutoOp::kBrightness: magnitude = 0.9 * t; break;
      case AutoOp::kPosterize: magnitude = 8.0 - std::nearbyint(bin / 2.25); break;
      case AutoOp::kSolarize: magnitude = 255.0 - 255.0 * t; break;
      default: break;
    }
    return PolicyOp{kind, p, magnitude};
  };
  using enum AutoOp;
  return {
      {op(kInvert, 0.1, 0), op(kContrast, 0.2, 6)},
      {op(kRotate, 0.7, 2), op(kTranslateX, 0.3, 9)},
      {op(kSharpness, 0.8, 1), op(kSharpness, 0.9, 3)},
      {op(kShearY, 0.5, 8), op(kTranslateY, 0.7, 9)},
      {op(kAutoContrast, 0.5, 0), op(kEqualize, 0.9, 0)},
      {op(kShearY, 0.2, 7), op(kPosterize, 0.3, 7)},
      {op(kColor, 0.4, 3), op(kBrightness, 0.6, 7)},
      {op(kSharpness, 0.3, 9), op(kBrightness, 0.7, 9)},
      {op(kEqualize, 0.6, 0), op(kEqualize, 0.5, 0)},
      {op(kContrast, 0.6, 7), op(kSharpness, 0.6, 5)},
      {op(kColor, 0.7, 7), op(kTranslateX, 0.5, 8)},
      {op(kEqualize, 0.3, 0), op(kAutoContrast, 0.4, 0)},
      {op(kTranslateY, 0.4, 3), op(kSharpness, 0.2, 6)},
      {op(kBrightness, 0.9, 6), op(kColor, 0.2, 8)},
      {op(kSolarize, 0.5, 2), op(kInvert, 0.0, 0)},
      {op(kEqualize, 0.2, 0), op(kAutoContrast, 0.6, 0)},
      {op(kEqualize, 0.2, 0), op(kEqualize, 0.6, 0)},
      {op(kColor, 0.9, 9), op(kEqualize, 0.6, 0)},
      {op(kAutoContrast, 0.8, 0), op(kSolarize, 0.2, 8)},
      {op(kBrightness, 0.1, 3), op(kColor, 0.7, 0)},
      {op(kSolarize, 0.4, 5), op(kAutoContrast, 0.9, 0)},
      {op(kTranslateY, 0.9, 9), op(kTranslateY, 0.7, 9)},
      {op(kAutoContrast, 0.9, 0), op(kSolarize, 0.8, 3)},
      {op(kEqualize, 0.8, 0), op(kInvert, 0.1, 0)},
      {op(kTranslateY, 0.7, 9), op(kAutoContrast, 0.9, 0)},
  };
}

PolicyTable parse_policy(std::string_view json_text) {
  using nlohmann::json;
  PolicyTable table;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw FormatError(fmt::format("policy: {}", e.what()));
  }
  if (!doc.is_array() || doc.empty()) throw ValidationError("policy: expected a non-empty list");
  for (const auto& sub : doc) {
    if (!sub.is_array() || sub.size() != 2) {
      throw ValidationError("policy: each subpolicy must list exactly two ops");
    }
    Subpolicy parsed;
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& entry = sub[k];
      try {
        PolicyOp step;
        step.op = parse_auto_op(entry.at("op").get<std::string>());
        step.probability = entry.at("p").get<double>();
        const auto it = entry.find("magnitude");
        step.magnitude = (it == entry.end() || it->is_null()) ? 0.0 : it->get<double>();
        if (!(step.probability >= 0.0 && step.probability <= 1.0)) {
          throw ValidationError(fmt::format("policy: probability {} outside [0, 1]",
                                            step.probability));
        }
        validate_magnitude(step.op, step.magnitude);
        parsed[k] = step;
      } catch (const json::exception& e) {
        throw FormatError(fmt::format("policy: {}", e.what()));
      }
    }
    table.push_back(parsed);
  }
  return table;
}

PolicyTable read_policy(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return parse_policy(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::string format_policy(const PolicyTable& policy) {
  using nlohmann::json;
  json doc = json::array();
  for (const auto& sub : policy) {
    json pair = json::array();
    for (const auto& step : sub) {
      json entry{{"op", std::string(to_string(step.op))}, {"p", step.probability}};
      const OpInfo& i = info(step.op);
      entry["magnitude"] = i.hi == 0.0 ? json(nullptr) : json(step.magnitude);
      pair.push_back(entry);
    }
    doc.push_back(pair);
  }
  return doc.dump(2) + "\n";
}

}  // namespace augimpact
