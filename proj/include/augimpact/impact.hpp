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

#include <optional>
#include <string>
#include <vector>

#include "augimpact/cka.hpp"
#include "augimpact/imageio.hpp"

namespace augimpact {

/// How layer pairs are compared: full-batch biased CKA by default, or
/// streaming minibatch CKA when `minibatch` is set.
struct CkaMode {
  KernelOptions kernel;
  std::optional<MinibatchOptions> minibatch;
  /// Worker threads for independent layer pairs; 0 picks the hardware count.
  unsigned threads = 0;
};

double compare(const Matrix2D& x, const Matrix2D& y, const CkaMode& mode);

/// L_A x L_B grid of CKA values; rows follow `a`, columns follow `b`.
struct CkaMatrix {
  std::vector<std::string> layers_a;
  std::vector<std::string> layers_b;
  std::vector<double> values;  // row-major

  std::size_t rows() const { return layers_a.size(); }
  std::size_t cols() const { return layers_b.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * layers_b.size() + j]; }
  /// Throws ValidationError if a value is non-finite or outside [-0.05, 1.05].
  void validate() const;
};

/// values[i][j] = cka(a_i, b_j). Each layer's Gram is built once.
CkaMatrix cka_matrix(const ActivationSet& a, const ActivationSet& b, const CkaMode& mode = {});

struct ImpactCurve {
  std::string augmentation_id;
  std::vector<std::string> layer_names;
  std::vector<double> normalized_depths;
  std::vector<double> cka_nn;
  std::vector<double> cka_n1a;
  std::vector<double> cka_n2a;
  /// Percent decrease per layer; negative when the augmented network is
  /// closer to the baselines than they are to each other.
  std::vector<double> impacts;
  double average = 0.0;
  std::optional<double> accuracy;

  std::size_t size() const { return impacts.size(); }
  /// Depths strictly increasing from 0 to 1, average equal to the mean of
  /// impacts within 1e-9, parallel vectors of equal length.
  void validate() const;
};

/// 100 * (cka_nn - (cka_n1a + cka_n2a) / 2) / cka_nn. Throws ValidationError
/// when cka_nn <= 0.
double layer_impact(double cka_nn, double cka_n1a, double cka_n2a);

/// Layer i of L sits at depth i / (L - 1); a single layer sits at 0.
std::vector<double> normalized_depths(std::size_t layer_count);

/// Pairs layers by position. The three sets must list the same layer names
/// and the same example count.
ImpactCurve impact_curve(const ActivationSet& none1, const ActivationSet& none2,
                         const ActivationSet& aug, const CkaMode& mode = {});

/// Builds the curve from already computed per-layer CKA values.
ImpactCurve impact_curve_from_cka(std::string augmentation_id, std::vector<std::string> layers,
                                  std::vector<double> cka_nn, std::vector<double> cka_n1a,
                                  std::vector<double> cka_n2a);

/// Arithmetic mean of the curve's impacts. Throws on an empty curve.
double average_impact(const ImpactCurve& curve);

struct SummaryRow {
  std::string augmentation_id;
  std::optional<double> accuracy;
  double average_decrease = 0.0;
};

/// One row per curve, in input order. Throws ValidationError on duplicate
/// augmentation ids or when a curve's stored average disagrees with its
/// impacts by more than 1e-9.
std::vector<SummaryRow> build_summary_table(const std::vector<ImpactCurve>& curves);

}  // namespace augimpact
