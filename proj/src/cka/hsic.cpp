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

#include <cmath>

#include <fmt/format.h>

#include "augimpact/cka.hpp"
#include "augimpact/errors.hpp"

namespace augimpact {
namespace {

void require_pair(const GramMatrix& k, const GramMatrix& l, std::size_t min_n, const char* who) {
  if (k.n() != l.n()) {
    throw ValidationError(fmt::format("{}: Gram sizes differ ({} vs {})", who, k.n(), l.n()));
  }
  if (k.n() < min_n) {
    throw ValidationError(fmt::format("{}: needs n >= {}, got {}", who, min_n, k.n()));
  }
}

}  // namespace

double hsic_centered(const GramMatrix& kc, const GramMatrix& lc) {
  require_pair(kc, lc, 2, "hsic");
  const std::size_t n = kc.n();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += kc(i, j) * lc(i, j);
    total += row;
  }
  const double scale = static_cast<double>(n - 1);
  return total / (scale * scale);
}

double hsic_biased(const GramMatrix& k, const GramMatrix& l) {
  require_pair(k, l, 2, "hsic_biased");
  GramMatrix kc = k;
  GramMatrix lc = l;
  center_gram(kc);
  center_gram(lc);
  const double value = hsic_centered(kc, lc);
  if (value >= 0.0) return value;
  // Cauchy-Schwarz bound on |value|; anything below 1e-12 of it is rounding.
  const double bound = std::sqrt(hsic_centered(kc, kc) * hsic_centered(lc, lc));
  return value > -1e-12 * bound ? 0.0 : value;
}

double hsic_unbiased(const GramMatrix& k, const GramMatrix& l) {
  require_pair(k, l, 4, "hsic_unbiased");
  const std::size_t n = k.n();
  double trace_kl = 0.0;
  double sum_k = 0.0;
  double sum_l = 0.0;
  double cross = 0.0;  // 1' K~ L~ 1 = sum_j (K~ 1)_j (L~ 1)_j for symmetric Grams
  for (std::size_t i = 0; i < n; ++i) {
    double row_k = 0.0, row_l = 0.0, row_kl = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      row_k += k(i, j);
      row_l += l(i, j);
      row_kl += k(i, j) * l(i, j);
    }
    trace_kl += row_kl;
    sum_k += row_k;
    sum_l += row_l;
    cross += row_k * row_l;
  }
  const double nd = static_cast<double>(n);
  const double value =
      trace_kl + sum_k * sum_l / ((nd - 1.0) * (nd - 2.0)) - 2.0 / (nd - 2.0) * cross;
  return value / (nd * (nd - 3.0));
}

}  // namespace augimpact
