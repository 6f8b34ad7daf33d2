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
#include <random>

#include <gtest/gtest.h>

#include "augimpact/cka.hpp"
#include "augimpact/errors.hpp"
#include "support/oracles.hpp"

namespace augimpact {
namespace {

using oracle::random_matrix;

GramMatrix from_dense(const oracle::Dense& d) {
  std::vector<double> v;
  for (const auto& row : d) v.insert(v.end(), row.begin(), row.end());
  return GramMatrix(d.size(), std::move(v));
}

TEST(Gram, RejectsAsymmetricValues) {
  EXPECT_THROW(GramMatrix(2, std::vector<double>{1, 2, 3, 4}), ValidationError);
  EXPECT_THROW(GramMatrix(2, std::vector<double>{1, 2, 2}), ValidationError);
  EXPECT_NO_THROW(GramMatrix(2, std::vector<double>{1, 2, 2, 4}));
}

TEST(LinearGram, HandComputed) {
  const Matrix2D x(3, 2, std::vector<double>{1, 2, 3, 4, 5, 6});
  const GramMatrix k = linear_gram(x);
  const double expected[3][3] = {{5, 11, 17}, {11, 25, 39}, {17, 39, 61}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_EQ(k(i, j), expected[i][j]);
  }
}

TEST(LinearGram, OrthonormalRowsGiveIdentity) {
  std::mt19937_64 gen(1);
  const Matrix2D q = oracle::random_orthogonal(6, gen);
  const GramMatrix k = linear_gram(q);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) EXPECT_NEAR(k(i, j), i == j ? 1.0 : 0.0, 1e-12);
  }
}

TEST(LinearGram, ScalesQuadratically) {
  std::mt19937_64 gen(2);
  const Matrix2D x = random_matrix(7, 5, gen);
  const GramMatrix k = linear_gram(x);
  const GramMatrix k3 = linear_gram(oracle::scale(x, 3.0));
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) EXPECT_NEAR(k3(i, j), 9.0 * k(i, j), 1e-12 * std::abs(9 * k(i, j)) + 1e-12);
  }
}

TEST(LinearGram, ExactlySymmetricAndMatchesDotProducts) {
  std::mt19937_64 gen(3);
  const Matrix2D x = random_matrix(37, 29, gen);
  const GramMatrix k = linear_gram(x);
  for (std::size_t i = 0; i < 37; ++i) {
    for (std::size_t j = 0; j < 37; ++j) {
      EXPECT_EQ(k(i, j), k(j, i));
      double dot = 0;
      for (std::size_t c = 0; c < 29; ++c) dot += x(i, c) * x(j, c);
      EXPECT_NEAR(k(i, j), dot, 1e-12);
    }
  }
}

TEST(RbfGram, DiagonalAndDuplicates) {
  std::mt19937_64 gen(4);
  Matrix2D x = random_matrix(6, 3, gen);
  for (std::size_t c = 0; c < 3; ++c) x(4, c) = x(1, c);
  const GramMatrix k = rbf_gram(x, 1.0);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(k(i, i), 1.0);
  EXPECT_EQ(k(1, 4), 1.0);
}

TEST(RbfGram, ThreePointsOnALine) {
  // Distances 1, 3, 2: median 2, so 2 sigma^2 = 8.
  const Matrix2D x(3, 1, std::vector<double>{0, 1, 3});
  const GramMatrix k = rbf_gram(x, 1.0);
  EXPECT_NEAR(k(0, 1), std::exp(-1.0 / 8.0), 1e-15);
  EXPECT_NEAR(k(0, 2), std::exp(-9.0 / 8.0), 1e-15);
  EXPECT_NEAR(k(1, 2), std::exp(-4.0 / 8.0), 1e-15);
  const GramMatrix half = rbf_gram(x, 0.5);
  EXPECT_NEAR(half(0, 1), std::exp(-1.0 / 2.0), 1e-15);
}

TEST(RbfGram, EvenPairCountUsesLowerMiddle) {
  // Points 0, 1, 3, 7: distances {1, 3, 7, 2, 6, 4}, sorted 1 2 3 4 6 7;
  // lower-middle is 3.
  const Matrix2D x(4, 1, std::vector<double>{0, 1, 3, 7});
  const GramMatrix k = rbf_gram(x, 1.0);
  EXPECT_NEAR(k(0, 1), std::exp(-1.0 / 18.0), 1e-15);
}

TEST(RbfGram, AllRowsEqualIsDegenerate) {
  EXPECT_THROW(rbf_gram(Matrix2D(5, 3, 2.0), 1.0), DegenerateError);
}

TEST(HsicBiased, MatchesMaterializedCentering) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial;
    const GramMatrix k = linear_gram(random_matrix(n, 4, gen));
    const GramMatrix l = linear_gram(random_matrix(n, 3, gen));
    const double expected = oracle::hsic_biased(oracle::to_dense(k), oracle::to_dense(l));
    EXPECT_NEAR(hsic_biased(k, l), expected, 1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST(HsicBiased, RankOneHandValue) {
  // v = (1, 2, 3): Hv = (-1, 0, 1), v'Hv = 2, trace(KHKH) = 4, / (n-1)^2 = 1.
  const GramMatrix k = linear_gram(Matrix2D(3, 1, std::vector<double>{1, 2, 3}));
  EXPECT_NEAR(hsic_biased(k, k), 1.0, 1e-14);
}

TEST(HsicBiased, ConstantKernelIsZeroAndSymmetric) {
  std::mt19937_64 gen(6);
  const GramMatrix k = linear_gram(random_matrix(9, 4, gen));
  GramMatrix c(9);
  for (auto& v : c.values()) v = 2.5;
  EXPECT_NEAR(hsic_biased(k, c), 0.0, 1e-12);
  const GramMatrix l = linear_gram(random_matrix(9, 2, gen));
  EXPECT_EQ(hsic_biased(k, l), hsic_biased(l, k));
}

TEST(HsicBiased, NeedsTwoExamples) {
  const GramMatrix k(1, std::vector<double>{1.0});
  EXPECT_THROW(hsic_biased(k, k), ValidationError);
}

TEST(HsicUnbiased, MatchesTermByTermOracles) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (std::size_t n = 4; n <= 12; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      // Arbitrary symmetric matrices, not only PSD ones.
      oracle::Dense k(n, std::vector<double>(n)), l(n, std::vector<double>(n));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          k[i][j] = k[j][i] = u(gen);
          l[i][j] = l[j][i] = u(gen);
        }
      }
      const double got = hsic_unbiased(from_dense(k), from_dense(l));
      EXPECT_NEAR(got, oracle::hsic_unbiased_direct(k, l), 1e-12) << n;
      EXPECT_NEAR(got, oracle::hsic_unbiased_quadruples(k, l), 1e-12) << n;
    }
  }
}

TEST(HsicUnbiased, HandBuiltIntegerGrams) {
  const oracle::Dense k = {{2, 1, 0, 3}, {1, 4, 2, 1}, {0, 2, 5, 1}, {3, 1, 1, 6}};
  const oracle::Dense l = {{1, 0, 2, 1}, {0, 3, 1, 2}, {2, 1, 2, 0}, {1, 2, 0, 4}};
  EXPECT_NEAR(hsic_unbiased(from_dense(k), from_dense(l)),
              oracle::hsic_unbiased_quadruples(k, l), 1e-12);
}

TEST(HsicUnbiased, ZeroMeanUnderIndependence) {
  std::mt19937_64 gen(8);
  const std::size_t n = 20;
  const GramMatrix l = linear_gram(random_matrix(n, 3, gen));
  std::vector<double> values;
  for (int r = 0; r < 1000; ++r) values.push_back(hsic_unbiased(linear_gram(random_matrix(n, 3, gen)), l));
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double var = 0;
  for (const double v : values) var += (v - mean) * (v - mean);
  const double se = std::sqrt(var / (values.size() - 1) / values.size());
  EXPECT_LT(std::abs(mean), 3 * se);
}

TEST(HsicUnbiased, SelfTermNearNonNegative) {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 50; ++trial) {
    const GramMatrix k = linear_gram(random_matrix(4 + trial % 20, 1 + trial % 5, gen));
    EXPECT_GE(hsic_unbiased(k, k), -1e-9);
  }
}

TEST(HsicUnbiased, NeedsFourExamples) {
  const GramMatrix k(3, std::vector<double>(9, 1.0));
  EXPECT_THROW(hsic_unbiased(k, k), ValidationError);
}

TEST(Cka, MatchesFeatureFormOracle) {
  std::mt19937_64 gen(10);
  const Matrix2D x = random_matrix(100, 10, gen);
  const Matrix2D y = random_matrix(100, 10, gen);
  const double got = cka(x, y);
  EXPECT_NEAR(got, oracle::feature_cka(x, y), 1e-10);
  EXPECT_LT(got, 0.3);
  const Matrix2D z = random_matrix(100, 7, gen);
  const Matrix2D mixed = oracle::multiply(x, random_matrix(10, 7, gen));
  EXPECT_NEAR(cka(mixed, z), oracle::feature_cka(mixed, z), 1e-10);
  EXPECT_NEAR(cka(x, mixed), oracle::feature_cka(x, mixed), 1e-10);
}

TEST(Cka, IdentityInvariancesAndSymmetry) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix2D x = random_matrix(30, 6, gen);
    const Matrix2D y = random_matrix(30, 4, gen);
    EXPECT_NEAR(cka(x, x), 1.0, 1e-9);
    EXPECT_NEAR(cka(x, oracle::multiply(x, oracle::random_orthogonal(6, gen))), 1.0, 1e-9);
    for (const double c : {0.1, 3.0, 100.0}) EXPECT_NEAR(cka(x, oracle::scale(x, c)), 1.0, 1e-9);
    EXPECT_EQ(cka(x, y), cka(y, x));
    const double v = cka(x, y);
    EXPECT_GE(v, -1e-9);
    EXPECT_LE(v, 1.0 + 1e-9);
  }
}

TEST(Cka, JointPermutationInvariance) {
  std::mt19937_64 gen(12);
  const Matrix2D x = random_matrix(40, 5, gen);
  const Matrix2D y = random_matrix(40, 8, gen);
  std::vector<std::size_t> order(40);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), gen);
  EXPECT_NEAR(cka(select_rows(x, order), select_rows(y, order)), cka(x, y), 1e-12);
}

TEST(Cka, ConstantRepresentationIsDegenerate) {
  std::mt19937_64 gen(13);
  EXPECT_THROW(cka(Matrix2D(10, 3, 4.0), random_matrix(10, 3, gen)), DegenerateError);
  EXPECT_THROW(cka(random_matrix(10, 3, gen), Matrix2D(10, 2, 0.0)), DegenerateError);
}

TEST(Cka, RowCountMismatch) {
  std::mt19937_64 gen(14);
  EXPECT_THROW(cka(random_matrix(10, 3, gen), random_matrix(11, 3, gen)), ValidationError);
}

TEST(Cka, RbfKernel) {
  std::mt19937_64 gen(15);
  const Matrix2D x = random_matrix(25, 4, gen);
  const KernelOptions rbf{Kernel::kRbf, 1.0};
  EXPECT_NEAR(cka(x, x, rbf), 1.0, 1e-9);
  const Matrix2D y = random_matrix(25, 4, gen);
  const double v = cka(x, y, rbf);
  EXPECT_GE(v, 0.0);
  EXPECT_LE(v, 1.0);
  const GramMatrix kx = rbf_gram(x, 1.0), ky = rbf_gram(y, 1.0);
  EXPECT_NEAR(v, hsic_biased(kx, ky) / std::sqrt(hsic_biased(kx, kx) * hsic_biased(ky, ky)), 1e-12);
}

TEST(Cka, PreparedFormAgrees) {
  std::mt19937_64 gen(16);
  const Matrix2D x = random_matrix(33, 6, gen);
  const Matrix2D y = random_matrix(33, 2, gen);
  EXPECT_NEAR(cka(prepare(x), prepare(y)), cka(x, y), 1e-14);
}

TEST(UnbiasedCka, IdentityAndOracle) {
  std::mt19937_64 gen(17);
  const Matrix2D x = random_matrix(20, 5, gen);
  const Matrix2D y = random_matrix(20, 5, gen);
  EXPECT_NEAR(unbiased_cka(x, x), 1.0, 1e-12);
  const auto kx = oracle::to_dense(linear_gram(x)), ky = oracle::to_dense(linear_gram(y));
  const double expected = oracle::hsic_unbiased_direct(kx, ky) /
                          std::sqrt(oracle::hsic_unbiased_direct(kx, kx) *
                                    oracle::hsic_unbiased_direct(ky, ky));
  EXPECT_NEAR(unbiased_cka(x, y), expected, 1e-10);
}

TEST(Minibatch, FinalizeWithoutBatchesIsError) {
  MinibatchCkaAccumulator acc;
  EXPECT_THROW(acc.finalize(), ValidationError);
}

TEST(Minibatch, SingleFullBatchEqualsUnbiasedCka) {
  std::mt19937_64 gen(18);
  const Matrix2D x = random_matrix(32, 6, gen);
  const Matrix2D y = random_matrix(32, 3, gen);
  MinibatchCkaAccumulator acc;
  acc.accumulate(x, y);
  EXPECT_EQ(acc.batches_seen(), 1u);
  EXPECT_EQ(acc.batch_size(), 32u);
  EXPECT_NEAR(acc.finalize(), unbiased_cka(x, y), 1e-12);
}

TEST(Minibatch, OrderOfBatchesDoesNotMatter) {
  std::mt19937_64 gen(19);
  std::vector<std::pair<Matrix2D, Matrix2D>> batches;
  for (int b = 0; b < 6; ++b) batches.emplace_back(random_matrix(8, 4, gen), random_matrix(8, 4, gen));
  MinibatchCkaAccumulator forward, backward;
  for (const auto& [x, y] : batches) forward.accumulate(x, y);
  for (auto it = batches.rbegin(); it != batches.rend(); ++it) backward.accumulate(it->first, it->second);
  EXPECT_NEAR(forward.finalize(), backward.finalize(), 1e-12);
}

TEST(Minibatch, MergeEqualsSequential) {
  std::mt19937_64 gen(20);
  MinibatchCkaAccumulator all, left, right;
  for (int b = 0; b < 4; ++b) {
    const Matrix2D x = random_matrix(10, 3, gen), y = random_matrix(10, 3, gen);
    all.accumulate(x, y);
    (b < 2 ? left : right).accumulate(x, y);
  }
  MinibatchCkaAccumulator merged = left;
  merged.merge(right);
  EXPECT_EQ(merged.batches_seen(), 4u);
  EXPECT_NEAR(merged.finalize(), all.finalize(), 1e-12);
  MinibatchCkaAccumulator empty;
  empty.merge(all);
  EXPECT_NEAR(empty.finalize(), all.finalize(), 1e-12);
}

TEST(Minibatch, IdenticalStreamsGiveOne) {
  std::mt19937_64 gen(21);
  const Matrix2D x = random_matrix(128, 5, gen);
  EXPECT_NEAR(minibatch_cka(x, x, {32, 3, 1, true}), 1.0, 1e-9);
}

TEST(Minibatch, BatchSizeErrors) {
  std::mt19937_64 gen(22);
  MinibatchCkaAccumulator acc;
  EXPECT_THROW(acc.accumulate(random_matrix(3, 2, gen), random_matrix(3, 2, gen)), ValidationError);
  acc.accumulate(random_matrix(6, 2, gen), random_matrix(6, 2, gen));
  EXPECT_THROW(acc.accumulate(random_matrix(7, 2, gen), random_matrix(7, 2, gen)), ValidationError);
  EXPECT_THROW(acc.accumulate(random_matrix(6, 2, gen), random_matrix(5, 2, gen)), ValidationError);
  EXPECT_THROW(minibatch_cka(random_matrix(10, 2, gen), random_matrix(10, 2, gen), {16, 1, 0, true}),
               ValidationError);
}

TEST(Minibatch, DeterministicForSeed) {
  std::mt19937_64 gen(23);
  const Matrix2D x = random_matrix(96, 5, gen), y = random_matrix(96, 5, gen);
  EXPECT_EQ(minibatch_cka(x, y, {16, 2, 4, true}), minibatch_cka(x, y, {16, 2, 4, true}));
  // Unshuffled single pass over stored order equals manual accumulation.
  MinibatchCkaAccumulator acc;
  for (std::size_t b = 0; b + 16 <= 96; b += 16) {
    std::vector<std::size_t> rows(16);
    std::iota(rows.begin(), rows.end(), b);
    acc.accumulate(select_rows(x, rows), select_rows(y, rows));
  }
  EXPECT_NEAR(minibatch_cka(x, y, {16, 1, 0, false}), acc.finalize(), 1e-15);
}

TEST(Minibatch, NegativeSelfSumIsError) {
  // Duplicated rows in one batch drive the self estimate to exactly zero.
  MinibatchCkaAccumulator acc;
  acc.accumulate(Matrix2D(4, 2, 1.0), Matrix2D(4, 2, 1.0));
  EXPECT_THROW(acc.finalize(), DegenerateError);
}

}  // namespace
}  // namespace augimpact
