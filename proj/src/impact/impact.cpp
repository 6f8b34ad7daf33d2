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

#include "augimpact/impact.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "augimpact/errors.hpp"

namespace augimpact {
namespace {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Results are
// written by index, so completion order never shows in the output. The first
// exception thrown by any task is rethrown on the caller.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

void require_same_examples(const ActivationSet& a, const ActivationSet& b) {
  if (a.example_count() != b.example_count()) {
    throw ValidationError(fmt::format("'{}' has {} examples but '{}' has {}",
                                      a.manifest().model_id, a.example_count(),
                                      b.manifest().model_id, b.example_count()));
  }
}

void require_same_layers(const ActivationSet& a, const ActivationSet& b) {
  if (a.layer_count() != b.layer_count()) {
    throw ValidationError(fmt::format("'{}' lists {} layers but '{}' lists {}",
                                      a.manifest().model_id, a.layer_count(),
                                      b.manifest().model_id, b.layer_count()));
  }
  for (std::size_t i = 0; i < a.layer_count(); ++i) {
    if (a.layer_name(i) != b.layer_name(i)) {
      throw ValidationError(fmt::format("layer {} is '{}' in '{}' but '{}' in '{}'", i,
                                        a.layer_name(i), a.manifest().model_id, b.layer_name(i),
                                        b.manifest().model_id));
    }
  }
}

}  // namespace

double compare(const Matrix2D& x, const Matrix2D& y, const CkaMode& mode) {
  if (mode.minibatch) return minibatch_cka(x, y, *mode.minibatch, mode.kernel);
  return cka(x, y, mode.kernel);
}

void CkaMatrix::validate() const {
  if (values.size() != rows() * cols()) throw ValidationError("cka matrix: size mismatch");
  for (const double v : values) {
    if (!std::isfinite(v) || v < -0.05 || v > 1.05) {
      throw ValidationError(fmt::format("cka matrix: value {} outside [-0.05, 1.05]", v));
    }
  }
}

CkaMatrix cka_matrix(const ActivationSet& a, const ActivationSet& b, const CkaMode& mode) {
  require_same_examples(a, b);
  CkaMatrix out;
  for (std::size_t i = 0; i < a.layer_count(); ++i) out.layers_a.push_back(a.layer_name(i));
  for (std::size_t j = 0; j < b.layer_count(); ++j) out.layers_b.push_back(b.layer_name(j));
  const std::size_t la = a.layer_count();
  const std::size_t lb = b.layer_count();
  out.values.assign(la * lb, 0.0);

  if (mode.minibatch) {
    parallel_for(la * lb, mode.threads, [&](std::size_t k) {
      out.values[k] = compare(a.layer(k / lb), b.layer(k % lb), mode);
    });
  } else {
    std::vector<PreparedRepresentation> pa(la);
    parallel_for(la, mode.threads, [&](std::size_t i) { pa[i] = prepare(a.layer(i), mode.kernel); });
    std::vector<PreparedRepresentation> pb_storage;
    const std::vector<PreparedRepresentation>* pb = &pa;
    if (&a != &b) {
      pb_storage.resize(lb);
      parallel_for(lb, mode.threads,
                   [&](std::size_t j) { pb_storage[j] = prepare(b.layer(j), mode.kernel); });
      pb = &pb_storage;
    }
    parallel_for(la * lb, mode.threads, [&](std::size_t k) {
      out.values[k] = cka(pa[k / lb], (*pb)[k % lb]);
    });
  }
  out.validate();
  return out;
}

double layer_impact(double cka_nn, double cka_n1a, double cka_n2a) {
  if (!(cka_nn > 0.0)) {
    throw ValidationError(fmt::format("impact: baseline CKA must be positive, got {}", cka_nn));
  }
  const double mean_aug = 0.5 * (cka_n1a + cka_n2a);
  return 100.0 - 100.0 * mean_aug / cka_nn;
}

std::vector<double> normalized_depths(std::size_t layer_count) {
  std::vector<double> depths(layer_count, 0.0);
  if (layer_count < 2) return depths;
  const double last = static_cast<double>(layer_count - 1);
  for (std::size_t i = 0; i < layer_count; ++i) depths[i] = static_cast<double>(i) / last;
  return depths;
}

void ImpactCurve::validate() const {
  const std::size_t n = impacts.size();
  if (layer_names.size() != n || normalized_depths.size() != n || cka_nn.size() != n ||
      cka_n1a.size() != n || cka_n2a.size() != n) {
    throw ValidationError("impact curve: column lengths differ");
  }
  if (n == 0) throw ValidationError("impact curve: empty");
  if (normalized_depths.front() != 0.0 || (n > 1 && normalized_depths.back() != 1.0)) {
    throw ValidationError("impact curve: depths must run from 0 to 1");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(normalized_depths[i] > normalized_depths[i - 1])) {
      throw ValidationError("impact curve: depths must be strictly increasing");
    }
  }
  if (std::abs(average - average_impact(*this)) > 1e-9) {
    throw ValidationError(fmt::format("impact curve '{}': stored average {} != mean of impacts {}",
                                      augmentation_id, average, average_impact(*this)));
  }
}

ImpactCurve impact_curve_from_cka(std::string augmentation_id, std::vector<std::string> layers,
                                  std::vector<double> cka_nn, std::vector<double> cka_n1a,
                                  std::vector<double> cka_n2a) {
  ImpactCurve curve;
  curve.augmentation_id = std::move(augmentation_id);
  curve.normalized_depths = normalized_depths(layers.size());
  curve.layer_names = std::move(layers);
  curve.cka_nn = std::move(cka_nn);
  curve.cka_n1a = std::move(cka_n1a);
  curve.cka_n2a = std::move(cka_n2a);
  if (curve.cka_nn.size() != curve.layer_names.size() ||
      curve.cka_n1a.size() != curve.layer_names.size() ||
      curve.cka_n2a.size() != curve.layer_names.size()) {
    throw ValidationError("impact curve: column lengths differ");
  }
  for (std::size_t i = 0; i < curve.layer_names.size(); ++i) {
    curve.impacts.push_back(layer_impact(curve.cka_nn[i], curve.cka_n1a[i], curve.cka_n2a[i]));
  }
  curve.average = average_impact(curve);
  return curve;
}

ImpactCurve impact_curve(const ActivationSet& none1, const ActivationSet& none2,
                         const ActivationSet& aug, const CkaMode& mode) {
  require_same_layers(none1, none2);
  require_same_layers(none1, aug);
  require_same_examples(none1, none2);
  require_same_examples(none1, aug);

  const std::size_t layers = none1.layer_count();
  std::vector<double> nn(layers), n1a(layers), n2a(layers);
  parallel_for(layers, mode.threads, [&](std::size_t i) {
    if (mode.minibatch) {
      nn[i] = compare(none1.layer(i), none2.layer(i), mode);
      n1a[i] = compare(none1.layer(i), aug.layer(i), mode);
      n2a[i] = compare(none2.layer(i), aug.layer(i), mode);
      return;
    }
    const PreparedRepresentation p1 = prepare(none1.layer(i), mode.kernel);
    const PreparedRepresentation p2 = prepare(none2.layer(i), mode.kernel);
    const PreparedRepresentation pa = prepare(aug.layer(i), mode.kernel);
    nn[i] = cka(p1, p2);
    n1a[i] = cka(p1, pa);
    n2a[i] = cka(p2, pa);
  });

  std::vector<std::string> names;
  for (std::size_t i = 0; i < layers; ++i) names.push_back(none1.layer_name(i));
  ImpactCurve curve = impact_curve_from_cka(aug.manifest().augmentation_id, std::move(names),
                                            std::move(nn), std::move(n1a), std::move(n2a));
  curve.accuracy = aug.manifest().accuracy;
  return curve;
}

double average_impact(const ImpactCurve& curve) {
  if (curve.impacts.empty()) throw ValidationError("average_impact: empty curve");
  double sum = 0.0;
  for (const double v : curve.impacts) sum += v;
  return sum / static_cast<double>(curve.impacts.size());
}

std::vector<SummaryRow> build_summary_table(const std::vector<ImpactCurve>& curves) {
  std::vector<SummaryRow> rows;
  std::set<std::string> seen;
  for (const auto& curve : curves) {
    if (!seen.insert(curve.augmentation_id).second) {
      throw ValidationError(
          fmt::format("summary: duplicate augmentation id '{}'", curve.augmentation_id));
    }
    const double recomputed = average_impact(curve);
    if (std::abs(recomputed - curve.average) > 1e-9) {
      throw ValidationError(fmt::format("summary: '{}' stores average {} but its impacts give {}",
                                        curve.augmentation_id, curve.average, recomputed));
    }
    rows.push_back({curve.augmentation_id, curve.accuracy, curve.average});
  }
  return rows;
}

}  // namespace augimpact
