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

#include "augimpact/cka.hpp"
#include "augimpact/errors.hpp"

namespace augimpact {
namespace {

// A centered Gram whose RMS entry is below 1e-10 of the raw Gram's largest
// entry carries nothing but rounding noise.
constexpr double kDegenerateRatio = 1e-10;

void require_paired(const Matrix2D& x, const Matrix2D& y, std::size_t min_n) {
  if (x.rows() != y.rows()) {
    throw ValidationError(
        fmt::format("cka: example counts differ ({} vs {})", x.rows(), y.rows()));
  }
  if (x.rows() < min_n) {
    throw ValidationError(fmt::format("cka: needs at least {} examples, got {}", min_n, x.rows()));
  }
}

}  // namespace

PreparedRepresentation prepare(const Matrix2D& x, const KernelOptions& options) {
  if (x.rows() < 2) throw ValidationError("cka: needs at least 2 examples");
  PreparedRepresentation out{gram(x, options), 0.0};
  double max_abs = 0.0;
  for (const double v : out.centered.values()) max_abs = std::max(max_abs, std::abs(v));
  center_gram(out.centered);
  out.self_hsic = hsic_centered(out.centered, out.centered);
  const double floor = kDegenerateRatio * max_abs;
  if (!(out.self_hsic > floor * floor)) {
    throw DegenerateError("cka: representation is constant (zero self-HSIC)");
  }
  return out;
}

double cka(const PreparedRepresentation& a, const PreparedRepresentation& b) {
  if (a.centered.n() != b.centered.n()) {
    throw ValidationError(fmt::format("cka: example counts differ ({} vs {})", a.centered.n(),
                                      b.centered.n()));
  }
  return hsic_centered(a.centered, b.centered) / std::sqrt(a.self_hsic * b.self_hsic);
}

double cka(const Matrix2D& x, const Matrix2D& y, const KernelOptions& options) {
  require_paired(x, y, 2);
  const PreparedRepresentation a = prepare(x, options);
  const PreparedRepresentation b = prepare(y, options);
  return cka(a, b);
}

double unbiased_cka(const Matrix2D& x, const Matrix2D& y, const KernelOptions& options) {
  require_paired(x, y, 4);
  const GramMatrix kx = gram(x, options);
  const GramMatrix ky = gram(y, options);
  const double xy = hsic_unbiased(kx, ky);
  const double xx = hsic_unbiased(kx, kx);
  const double yy = hsic_unbiased(ky, ky);
  if (!(xx > 0.0 && yy > 0.0)) {
    throw DegenerateError("unbiased cka: non-positive self-HSIC");
  }
  return xy / std::sqrt(xx * yy);
}

}  // namespace augimpact
