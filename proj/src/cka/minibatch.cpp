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
#include <numeric>

#include <fmt/format.h>

#include "augimpact/cka.hpp"
#include "augimpact/errors.hpp"
#include "augimpact/rng.hpp"

namespace augimpact {

void MinibatchCkaAccumulator::accumulate(const Matrix2D& xb, const Matrix2D& yb) {
  if (xb.rows() != yb.rows()) {
    throw ValidationError(
        fmt::format("minibatch cka: paired batches differ ({} vs {} rows)", xb.rows(), yb.rows()));
  }
  if (batch_size_ && *batch_size_ != xb.rows()) {
    throw ValidationError(fmt::format("minibatch cka: batch of {} rows, accumulator expects {}",
                                      xb.rows(), *batch_size_));
  }
  if (xb.rows() < 4) throw ValidationError("minibatch cka: batch size must be >= 4");
  const GramMatrix kx = gram(xb, options_);
  const GramMatrix ky = gram(yb, options_);
  sum_xy_ += hsic_unbiased(kx, ky);
  sum_xx_ += hsic_unbiased(kx, kx);
  sum_yy_ += hsic_unbiased(ky, ky);
  batch_size_ = xb.rows();
  ++batches_seen_;
}

void MinibatchCkaAccumulator::merge(const MinibatchCkaAccumulator& other) {
  if (batch_size_ && other.batch_size_ && *batch_size_ != *other.batch_size_) {
    throw ValidationError("minibatch cka: cannot merge accumulators with different batch sizes");
  }
  sum_xy_ += other.sum_xy_;
  sum_xx_ += other.sum_xx_;
  sum_yy_ += other.sum_yy_;
  batches_seen_ += other.batches_seen_;
  if (!batch_size_) batch_size_ = other.batch_size_;
}

double MinibatchCkaAccumulator::finalize() const {
  if (batches_seen_ == 0) throw ValidationError("minibatch cka: no batches accumulated");
  if (!(sum_xx_ > 0.0 && sum_yy_ > 0.0)) {
    throw DegenerateError("minibatch cka: non-positive self-HSIC sum");
  }
  return sum_xy_ / std::sqrt(sum_xx_ * sum_yy_);
}

double minibatch_cka(const Matrix2D& x, const Matrix2D& y, const MinibatchOptions& options,
                     const KernelOptions& kernel) {
  if (x.rows() != y.rows()) {
    throw ValidationError(
        fmt::format("minibatch cka: example counts differ ({} vs {})", x.rows(), y.rows()));
  }
  const std::size_t n = x.rows();
  const std::size_t bs = options.batch_size;
  if (bs < 4) throw ValidationError("minibatch cka: batch size must be >= 4");
  if (n < bs) {
    throw ValidationError(fmt::format("minibatch cka: {} examples < batch size {}", n, bs));
  }
  if (options.passes == 0) throw ValidationError("minibatch cka: passes must be >= 1");

  Rng rng(options.seed);
  MinibatchCkaAccumulator acc(kernel);
  std::vector<std::size_t> order(n);
  for (std::size_t pass = 0; pass < options.passes; ++pass) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (options.shuffle) {
      for (std::size_t i = n; i-- > 1;) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)));
        std::swap(order[i], order[j]);
      }
    }
    for (std::size_t start = 0; start + bs <= n; start += bs) {
      const std::span<const std::size_t> rows(order.data() + start, bs);
      acc.accumulate(select_rows(x, rows), select_rows(y, rows));
    }
  }
  return acc.finalize();
}

}  // namespace augimpact
