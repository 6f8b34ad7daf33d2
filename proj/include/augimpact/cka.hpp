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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "augimpact/matrix.hpp"

namespace augimpact {

/// n x n symmetric kernel matrix, row-major.
class GramMatrix {
 public:
  GramMatrix() = default;
  explicit GramMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}
  /// Throws ValidationError unless values form a finite n x n matrix that is
  /// symmetric within 1e-9.
  GramMatrix(std::size_t n, std::vector<double> values);

  std::size_t n() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// K[i][j] = <row_i, row_j>. Only the lower triangle is computed; the upper
/// one is mirrored, so the result is exactly symmetric.
GramMatrix linear_gram(const Matrix2D& x);

/// K[i][j] = exp(-|row_i - row_j|^2 / (2 sigma^2)) with
/// sigma = bandwidth_fraction * median pairwise distance. The median is taken
/// over the n(n-1)/2 pairs i < j; for an even pair count the lower-middle
/// element is used. Throws DegenerateError when sigma is zero.
GramMatrix rbf_gram(const Matrix2D& x, double bandwidth_fraction);

/// H K H with H = I - 11^T / n, in place.
void center_gram(GramMatrix& k);

/// trace(K H L H) / (n - 1)^2. Tiny negative results from rounding are
/// clamped to zero. Requires n >= 2.
double hsic_biased(const GramMatrix& k, const GramMatrix& l);

/// Same statistic for Grams that are already centered: sum_ij Kc_ij Lc_ij /
/// (n - 1)^2. The sum runs in one fixed order, so the value is exactly
/// symmetric in its arguments.
double hsic_centered(const GramMatrix& kc, const GramMatrix& lc);

/// Unbiased HSIC estimator on diagonal-zeroed Grams K~, L~:
///   [tr(K~L~) + 1'K~1 1'L~1 / ((n-1)(n-2)) - 2/(n-2) 1'K~L~1] / (n(n-3)).
/// May be negative. Requires n >= 4.
double hsic_unbiased(const GramMatrix& k, const GramMatrix& l);

enum class Kernel { kLinear, kRbf };

struct KernelOptions {
  Kernel kernel = Kernel::kLinear;
  /// RBF bandwidth as a multiple of the median pairwise distance.
  double rbf_fraction = 1.0;
};

GramMatrix gram(const Matrix2D& x, const KernelOptions& options);

/// A representation prepared for repeated CKA evaluations: its centered Gram
/// and self-HSIC. Costs O(n^2) memory.
struct PreparedRepresentation {
  GramMatrix centered;
  double self_hsic = 0.0;
};

/// Throws DegenerateError when the self-HSIC vanishes (constant
/// representation).
PreparedRepresentation prepare(const Matrix2D& x, const KernelOptions& options = {});
double cka(const PreparedRepresentation& a, const PreparedRepresentation& b);

/// Biased (full-batch) CKA: HSIC(Kx, Ky) / sqrt(HSIC(Kx, Kx) HSIC(Ky, Ky)).
/// Holds two n x n Grams at a time and nothing else of size n^2.
double cka(const Matrix2D& x, const Matrix2D& y, const KernelOptions& options = {});

/// CKA with the unbiased HSIC estimator in numerator and denominators.
double unbiased_cka(const Matrix2D& x, const Matrix2D& y, const KernelOptions& options = {});

/// Streaming CKA over paired minibatches: sums unbiased HSIC estimates per
/// batch and normalizes once at the end, which makes the result independent
/// of the batch size in expectation.
class MinibatchCkaAccumulator {
 public:
  MinibatchCkaAccumulator() = default;
  explicit MinibatchCkaAccumulator(KernelOptions options) : options_(options) {}

  /// Adds one paired batch. The first call fixes the batch size (>= 4);
  /// later calls must match it.
  void accumulate(const Matrix2D& xb, const Matrix2D& yb);
  /// Sums the fields of another accumulator built with the same batch size.
  void merge(const MinibatchCkaAccumulator& other);
  /// sum_xy / sqrt(sum_xx * sum_yy). Throws if no batch has been seen or a
  /// self sum is not positive.
  double finalize() const;

  double sum_xy() const { return sum_xy_; }
  double sum_xx() const { return sum_xx_; }
  double sum_yy() const { return sum_yy_; }
  std::size_t batches_seen() const { return batches_seen_; }
  std::optional<std::size_t> batch_size() const { return batch_size_; }

 private:
  KernelOptions options_;
  double sum_xy_ = 0.0;
  double sum_xx_ = 0.0;
  double sum_yy_ = 0.0;
  std::size_t batches_seen_ = 0;
  std::optional<std::size_t> batch_size_;
};

struct MinibatchOptions {
  std::size_t batch_size = 64;
  /// Full passes over the data, each under a fresh row shuffle.
  std::size_t passes = 1;
  std::uint64_t seed = 0;
  /// When false every pass walks the rows in stored order.
  bool shuffle = true;
};

/// Runs `passes` epochs: each draws a Fisher-Yates permutation of the rows
/// from Rng(seed) (one generator for the whole run), cuts it into
/// consecutive batches and accumulates them. A trailing partial batch is
/// dropped. Throws ValidationError when fewer rows than one batch exist.
double minibatch_cka(const Matrix2D& x, const Matrix2D& y, const MinibatchOptions& options,
                     const KernelOptions& kernel = {});

}  // namespace augimpact
