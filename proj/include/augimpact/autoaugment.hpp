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

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "augimpact/imageio.hpp"
#include "augimpact/rng.hpp"

namespace augimpact {

enum class AutoOp {
  kShearX,
  kShearY,
  kTranslateX,
  kTranslateY,
  kRotate,
  kColor,
  kPosterize,
  kSolarize,
  kContrast,
  kSharpness,
  kBrightness,
  kAutoContrast,
  kEqualize,
  kInvert,
};

/// Policy-file names: shear_x, shear_y, translate_x, translate_y, rotate,
/// color (alias saturation), posterize, solarize, contrast, sharpness,
/// brightness, autocontrast, equalize, invert. Throws ValidationError for
/// anything else.
AutoOp parse_auto_op(std::string_view name);
std::string_view to_string(AutoOp op);

/// Magnitudes are in natural units:
///   shear_*       shear factor in [0, 1]
///   translate_*   fraction of the image side in [0, 1]
///   rotate        degrees in [0, 180], counter-clockwise about the center
///   color, contrast, sharpness, brightness
///                 enhancement delta in [0, 1]; factor = 1 +/- delta
///   posterize     bits kept, integer in [1, 8]
///   solarize      threshold in [0, 256]
///   autocontrast, equalize, invert
///                 no magnitude (0)
/// Shear, translate, rotate and the four enhancements are signed: the sign
/// comes from a draw at apply time.
bool is_signed(AutoOp op);
/// Throws ValidationError if `magnitude` is outside the op's range.
void validate_magnitude(AutoOp op, double magnitude);

struct PolicyOp {
  AutoOp op = AutoOp::kInvert;
  double probability = 0.0;
  double magnitude = 0.0;
  friend bool operator==(const PolicyOp&, const PolicyOp&) = default;
};

using Subpolicy = std::array<PolicyOp, 2>;
using PolicyTable = std::vector<Subpolicy>;

inline constexpr std::uint8_t kAutoAugmentFill = 128;

/// Applies one op. Geometric ops sample bilinearly with `fill` for taps
/// outside the image.
ImageTensor apply_auto_op(const ImageTensor& img, AutoOp op, double magnitude, bool negate,
                          std::uint8_t fill = kAutoAugmentFill);

/// Per image, exactly five draws: subpolicy index = uniform_int(0, S-1), then
/// for each of the two ops a gate uniform() and a sign uniform() (negative
/// when < 0.5). The op runs when its gate is < its probability.
ImageTensor autoaugment(const ImageTensor& img, const PolicyTable& policy, Rng& rng);

/// The published CIFAR-10 AutoAugment policy (25 subpolicies), magnitudes
/// taken from 10 evenly spaced bins per op.
PolicyTable default_cifar10_policy();

/// Policy JSON: list of subpolicies, each a list of exactly two
/// {"op", "p", "magnitude"} objects; magnitude may be null for ops without
/// one. Validates every entry.
PolicyTable parse_policy(std::string_view json_text);
PolicyTable read_policy(const std::filesystem::path& path);
std::string format_policy(const PolicyTable& policy);

}  // namespace augimpact
