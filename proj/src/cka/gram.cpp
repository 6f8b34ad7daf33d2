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

constexpr std::size_t kTile = 64;

// Four independent partial sums let the compiler keep the loop pipelined; the
// summation order is fixed, so results do not depend on the caller.
double dot(const double* a, const double* b, std::size_t d) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= d; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < d; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}

double squared_distance(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return s;
}

}  // namespace

GramMatrix::GramMatrix(std::size_t n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
  if (values_.size() != n_ * n_) {
    throw ValidationError(fmt::format("gram: {} values for n = {}", values_.size(), n_));
  }
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const double v = (*this)(i, j);
      if (!std::isfinite(v)) throw ValidationError("gram: non-finite entry");
      if (std::abs(v - (*this)(j, i)) > 1e-9) throw ValidationError("gram: not symmetric");
    }
  }
}

GramMatrix linear_gram(const Matrix2D& x) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  GramMatrix k(n);
  const double* base = x.values().data();
  for (std::size_t i0 = 0; i0 < n; i0 += kTile) {
    const std::size_t i1 = std::min(i0 + kTile, n);
    for (std::size_t j0 = 0; j0 <= i0; j0 += kTile) {
      const std::size_t j1 = std::min(j0 + kTile, n);
      for (std::size_t i = i0; i < i1; ++i) {
        const double* ri = base + i * d;
        for (std::size_t j = j0; j < std::min(j1, i + 1); ++j) {
          k(i, j) = dot(ri, base + j * d, d);
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) k(j, i) = k(i, j);
  }
  return k;
}

GramMatrix rbf_gram(const Matrix2D& x, double bandwidth_fraction) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (n < 2) throw ValidationError("rbf_gram: needs at least 2 examples");
  if (!(bandwidth_fraction > 0.0)) throw ValidationError("rbf_gram: bandwidth fraction must be > 0");
  GramMatrix k(n);
  const double* base = x.values().data();
  std::vector<double> distances;
  distances.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double sq = squared_distance(base + i * d, base + j * d, d);
      k(i, j) = sq;
      distances.push_back(std::sqrt(sq));
    }
  }
  const std::size_t mid = (distances.size() - 1) / 2;
  std::nth_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(mid),
                   distances.end());
  const double sigma = bandwidth_fraction * distances[mid];
  distances = {};
  if (!(sigma > 0.0)) {
    throw DegenerateError("rbf_gram: median pairwise distance is zero, bandwidth undefined");
  }
  const double denom = 2.0 * sigma * sigma;
  for (std::size_t i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double v = std::exp(-k(i, j) / denom);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

GramMatrix gram(const Matrix2D& x, const KernelOptions& options) {
  return options.kernel == Kernel::kLinear ? linear_gram(x) : rbf_gram(x, options.rbf_fraction);
}

void center_gram(GramMatrix& k) {
  const std::size_t n = k.n();
  if (n == 0) return;
  std::vector<double> means(n);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += k(i, j);
    means[i] = s / static_cast<double>(n);
    grand += s;
  }
  grand /= static_cast<double>(n) * static_cast<double>(n);
  // (means[i] + means[j]) is commutative, so a symmetric K stays exactly
  // symmetric.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k(i, j) = (k(i, j) - (means[i] + means[j])) + grand;
  }
}

}  // namespace augimpact
