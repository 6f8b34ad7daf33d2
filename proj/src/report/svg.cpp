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
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "augimpact/errors.hpp"
#include "augimpact/report.hpp"

namespace augimpact {
namespace {

struct ColorStop {
  double at;
  Rgb color;
};

constexpr std::array<ColorStop, 5> kViridis{{
    {0.00, {0x44, 0x01, 0x54}},
    {0.25, {0x3b, 0x52, 0x8b}},
    {0.50, {0x21, 0x91, 0x8c}},
    {0.75, {0x5e, 0xc9, 0x62}},
    {1.00, {0xfd, 0xe7, 0x25}},
}};
constexpr std::array<ColorStop, 2> kGray{{{0.0, {0, 0, 0}}, {1.0, {255, 255, 255}}}};

std::span<const ColorStop> stops_for(std::string_view name) {
  if (name == "viridis") return kViridis;
  if (name == "gray") return kGray;
  throw ValidationError(fmt::format("unknown color map '{}'", name));
}

std::uint8_t lerp_channel(std::uint8_t a, std::uint8_t b, double t) {
  return static_cast<std::uint8_t>(std::nearbyint(a + (b - a) * t));
}

// Fixed two-decimal coordinates keep the output byte-stable.
std::string num(double v) {
  const std::string s = fmt::format("{:.2f}", v);
  return s == "-0.00" ? "0.00" : s;
}

std::string escape(std::string_view text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(const RenderConfig& cfg) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\">\n"
      "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"#ffffff\"/>\n",
      cfg.width, cfg.height);
}

std::string text(double x, double y, std::string_view body, std::string_view anchor,
                 int size = 11, std::string_view extra = {}) {
  return fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"{}\"{}>{}</text>\n",
                     num(x), num(y), size, anchor, extra, escape(body));
}

// Label every k-th index so at most ~20 ticks appear on an axis.
std::size_t tick_step(std::size_t count) { return std::max<std::size_t>(1, (count + 19) / 20); }

}  // namespace

std::string to_hex(Rgb c) { return fmt::format("#{:02x}{:02x}{:02x}", c.r, c.g, c.b); }

bool is_known_color_map(std::string_view name) { return name == "viridis" || name == "gray"; }

Rgb map_color(std::string_view color_map, double value) {
  const auto stops = stops_for(color_map);
  const double v = std::isnan(value) ? 0.0 : std::clamp(value, 0.0, 1.0);
  for (std::size_t k = 1; k < stops.size(); ++k) {
    if (v <= stops[k].at) {
      const auto& lo = stops[k - 1];
      const auto& hi = stops[k];
      const double t = (v - lo.at) / (hi.at - lo.at);
      return {lerp_channel(lo.color.r, hi.color.r, t), lerp_channel(lo.color.g, hi.color.g, t),
              lerp_channel(lo.color.b, hi.color.b, t)};
    }
  }
  return stops.back().color;
}

void RenderConfig::validate() const {
  if (width <= 0 || height <= 0) throw ValidationError("render: dimensions must be positive");
  if (!is_known_color_map(color_map)) {
    throw ValidationError(fmt::format("render: unknown color map '{}'", color_map));
  }
  if (series_colors.empty()) throw ValidationError("render: no series colors");
}

std::string render_heatmap(const CkaMatrix& m, const RenderConfig& cfg) {
  cfg.validate();
  if (m.rows() == 0 || m.cols() == 0) throw ValidationError("render_heatmap: empty matrix");
  if (m.values.size() != m.rows() * m.cols()) throw ValidationError("render_heatmap: bad matrix");

  const double left = 60, top = 40, right = 90, bottom = 50;
  const double plot_w = cfg.width - left - right;
  const double plot_h = cfg.height - top - bottom;
  if (plot_w <= 0 || plot_h <= 0) throw ValidationError("render_heatmap: canvas too small");
  const double cell_w = plot_w / static_cast<double>(m.cols());
  const double cell_h = plot_h / static_cast<double>(m.rows());

  std::string svg = header(cfg);
  if (!cfg.title.empty()) svg += text(cfg.width / 2.0, 22, cfg.title, "middle", 14);
  svg += "<g id=\"cells\">\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double v = m.at(i, j);
      svg += fmt::format(
          "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\">"
          "<title>{} / {}: {}</title></rect>\n",
          num(left + j * cell_w), num(top + i * cell_h), num(cell_w), num(cell_h),
          to_hex(map_color(cfg.color_map, v)), escape(m.layers_a[i]), escape(m.layers_b[j]),
          fmt::format("{:.4f}", v));
    }
  }
  svg += "</g>\n<g id=\"axes\">\n";
  const std::size_t col_step = tick_step(m.cols());
  for (std::size_t j = 0; j < m.cols(); j += col_step) {
    svg += text(left + (j + 0.5) * cell_w, top + plot_h + 16, std::to_string(j), "middle", 10);
  }
  const std::size_t row_step = tick_step(m.rows());
  for (std::size_t i = 0; i < m.rows(); i += row_step) {
    svg += text(left - 6, top + (i + 0.5) * cell_h + 4, std::to_string(i), "end", 10);
  }
  const std::string x_label = cfg.x_label.empty() ? "layer (B)" : cfg.x_label;
  const std::string y_label = cfg.y_label.empty() ? "layer (A)" : cfg.y_label;
  svg += text(left + plot_w / 2, cfg.height - 12, x_label, "middle", 12);
  svg += text(16, top + plot_h / 2, y_label, "middle", 12,
              fmt::format(" transform=\"rotate(-90 16 {})\"", num(top + plot_h / 2)));
  svg += "</g>\n<g id=\"colorbar\">\n";
  constexpr int kBarSegments = 20;
  const double bar_x = left + plot_w + 20;
  const double seg_h = plot_h / kBarSegments;
  for (int s = 0; s < kBarSegments; ++s) {
    // Top segment shows the high end of the map.
    const double v = 1.0 - (s + 0.5) / kBarSegments;
    svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"16\" height=\"{}\" fill=\"{}\"/>\n",
                       num(bar_x), num(top + s * seg_h), num(seg_h),
                       to_hex(map_color(cfg.color_map, v)));
  }
  svg += text(bar_x + 22, top + 10, "1", "start", 10);
  svg += text(bar_x + 22, top + plot_h, "0", "start", 10);
  svg += "</g>\n</svg>\n";
  return svg;
}

std::string render_curves(std::span<const ImpactCurve> curves, const RenderConfig& cfg) {
  cfg.validate();
  if (curves.empty()) throw ValidationError("render_curves: no curves");
  double lo = 0.0, hi = 0.0;
  for (const auto& c : curves) {
    if (c.impacts.empty() || c.impacts.size() != c.normalized_depths.size()) {
      throw ValidationError(fmt::format("render_curves: curve '{}' is empty or ragged",
                                        c.augmentation_id));
    }
    for (const double v : c.impacts) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi == lo) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  const double left = 70, top = 40, right = 150, bottom = 50;
  const double plot_w = cfg.width - left - right;
  const double plot_h = cfg.height - top - bottom;
  if (plot_w <= 0 || plot_h <= 0) throw ValidationError("render_curves: canvas too small");
  auto px = [&](double depth) { return left + depth * plot_w; };
  auto py = [&](double value) { return top + (hi - value) / (hi - lo) * plot_h; };

  std::string svg = header(cfg);
  if (!cfg.title.empty()) svg += text(cfg.width / 2.0, 22, cfg.title, "middle", 14);
  svg += "<g id=\"axes\" stroke=\"#000000\" stroke-width=\"1\" fill=\"none\">\n";
  svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>\n", num(left), num(top),
                     num(plot_w), num(plot_h));
  svg += "</g>\n<g id=\"ticks\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double d = k / 4.0;
    svg += text(px(d), top + plot_h + 16, fmt::format("{:.2f}", d), "middle", 10);
    const double v = lo + (hi - lo) * k / 4.0;
    svg += text(left - 6, py(v) + 4, fmt::format("{:.2f}", v), "end", 10);
  }
  svg += text(left + plot_w / 2, cfg.height - 12,
              cfg.x_label.empty() ? "normalized depth" : cfg.x_label, "middle", 12);
  const std::string y_label = cfg.y_label.empty() ? "decrease in CKA (%)" : cfg.y_label;
  svg += text(16, top + plot_h / 2, y_label, "middle", 12,
              fmt::format(" transform=\"rotate(-90 16 {})\"", num(top + plot_h / 2)));
  svg += "</g>\n";
  svg += fmt::format(
      "<line id=\"zero\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#888888\" "
      "stroke-dasharray=\"4 3\"/>\n",
      num(px(0.0)), num(py(0.0)), num(px(1.0)), num(py(0.0)));

  svg += "<g id=\"series\">\n";
  for (std::size_t s = 0; s < curves.size(); ++s) {
    const auto& c = curves[s];
    const std::string& color = cfg.series_colors[s % cfg.series_colors.size()];
    std::string points;
    for (std::size_t i = 0; i < c.size(); ++i) {
      points += fmt::format("{}{},{}", i ? " " : "", num(px(c.normalized_depths[i])),
                            num(py(c.impacts[i])));
    }
    svg += fmt::format(
        "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color,
        points);
    for (std::size_t i = 0; i < c.size(); ++i) {
      svg += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>\n",
                         num(px(c.normalized_depths[i])), num(py(c.impacts[i])), color);
    }
  }
  svg += "</g>\n<g id=\"legend\">\n";
  for (std::size_t s = 0; s < curves.size(); ++s) {
    const double y = top + 12 + 18.0 * s;
    const double x = left + plot_w + 12;
    const std::string& color = cfg.series_colors[s % cfg.series_colors.size()];
    svg += fmt::format(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
        num(x), num(y), num(x + 18), num(y), color);
    svg += text(x + 24, y + 4, curves[s].augmentation_id, "start", 11);
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

}  // namespace augimpact
