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

#include <fmt/format.h>

#include "augimpact/errors.hpp"
#include "augimpact/matrix.hpp"

namespace augimpact {

Matrix2D::Matrix2D(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw ValidationError(
        fmt::format("matrix: {} values for shape {}x{}", values_.size(), rows_, cols_));
  }
  for (const double v : values_) {
    if (!std::isfinite(v)) throw ValidationError("matrix: non-finite value");
  }
}

Matrix2D select_rows(const Matrix2D& m, std::span<const std::size_t> order) {
  Matrix2D out(order.size(), m.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto src = m.row(order[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace augimpact
