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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "augimpact/impact.hpp"

namespace augimpact {

// --- CSV ----------------------------------------------------------------------
//
// Reals are written with 17 significant digits so parsing reproduces the
// stored doubles exactly.

/// Header: augmentation_id,layer_name,normalized_depth,cka_nn,cka_n1a,cka_n2a,impact_pct
std::string format_impact_csv(std::span<const ImpactCurve> curves);
/// Groups rows by augmentation_id in order of first appearance and
/// recomputes each curve's average.
std::vector<ImpactCurve> parse_impact_csv(std::string_view text);

/// Header: augmentation_id,accuracy,average_decrease (accuracy blank when
/// unknown).
std::string format_summary_csv(std::span<const SummaryRow> rows);

/// Long form, header: row,col,layer_a,layer_b,cka
std::string format_cka_csv(const CkaMatrix& m);
CkaMatrix parse_cka_csv(std::string_view text);

std::string format_real(double v);

// --- SVG ----------------------------------------------------------------------

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

std::string to_hex(Rgb c);

/// Piecewise-linear color map over [0, 1]; inputs are clamped.
///   "viridis": #440154 at 0, #3b528b at .25, #21918c at .5, #5ec962 at .75,
///              #fde725 at 1
///   "gray":    #000000 at 0, #ffffff at 1
/// Channels are interpolated linearly and rounded half-even.
Rgb map_color(std::string_view color_map, double value);
bool is_known_color_map(std::string_view name);

struct RenderConfig {
  int width = 640;
  int height = 480;
  std::string color_map = "viridis";
  std::string title;
  std::string x_label;
  std::string y_label;
  /// Cycled in order for curves.
  std::vector<std::string> series_colors = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                                            "#66a61e", "#e6ab02", "#a6761d", "#666666",
                                            "#1f78b4", "#b2df8a"};
  /// Throws ValidationError for non-positive dimensions or an unknown map.
  void validate() const;
};

/// One <rect> per cell, row i of the matrix drawn as the i-th row from the
/// top; axes labeled by layer index. Throws ValidationError on an empty
/// matrix.
std::string render_heatmap(const CkaMatrix& m, const RenderConfig& cfg);

/// x = normalized depth on [0, 1]; y spans the data (and always 0) with a
/// dashed zero line; one polyline plus circle markers per curve and a legend
/// in input order. Throws ValidationError on empty input.
std::string render_curves(std::span<const ImpactCurve> curves, const RenderConfig& cfg);

// --- CLI ----------------------------------------------------------------------

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Subcommands: dataset-info | augment | cka | impact | render. `args`
/// excludes the program name. Diagnostics go to `err`, data to files or
/// `out`. Returns 0 on success, 1 on usage errors, 2 on data errors.
int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace augimpact
