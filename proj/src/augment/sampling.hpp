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

#include <cmath>
#include <cstdint>

#include "augimpact/imageio.hpp"

namespace augimpact::detail {

/// Bilinear sample at (x, y) in pixel-index coordinates. Taps outside the
/// image contribute `fill`; a tap with zero weight contributes nothing, so
/// integer coordinates reproduce the source pixel exactly.
inline double sample_bilinear(const ImageTensor& img, double x, double y, std::size_t c,
                              double fill) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const double wx = x - fx;
  const double wy = y - fy;
  const auto x0 = static_cast<long long>(fx);
  const auto y0 = static_cast<long long>(fy);
  const auto h = static_cast<long long>(img.height());
  const auto w = static_cast<long long>(img.width());
  auto tap = [&](long long yy, long long xx, double weight) -> double {
    if (weight == 0.0) return 0.0;
    if (yy < 0 || yy >= h || xx < 0 || xx >= w) return weight * fill;
    return weight * img.at(static_cast<std::size_t>(yy), static_cast<std::size_t>(xx), c);
  };
  return tap(y0, x0, (1.0 - wx) * (1.0 - wy)) + tap(y0, x0 + 1, wx * (1.0 - wy)) +
         tap(y0 + 1, x0, (1.0 - wx) * wy) + tap(y0 + 1, x0 + 1, wx * wy);
}

}  // namespace augimpact::detail
