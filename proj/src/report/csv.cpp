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

#include <charconv>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "augimpact/errors.hpp"
#include "augimpact/report.hpp"

namespace augimpact {
namespace {

constexpr std::string_view kImpactHeader =
    "augmentation_id,layer_name,normalized_depth,cka_nn,cka_n1a,cka_n2a,impact_pct";
constexpr std::string_view kCkaHeader = "row,col,layer_a,layer_b,cka";

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// RFC 4180 style: fields may be double-quoted, "" escapes a quote.
std::vector<std::vector<std::string>> split_rows(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw FormatError("csv: unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

double parse_real(const std::string& field, std::size_t line) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw FormatError(fmt::format("csv line {}: '{}' is not a number", line, field));
  }
  return v;
}

std::size_t parse_index(const std::string& field, std::size_t line) {
  std::size_t v = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw FormatError(fmt::format("csv line {}: '{}' is not an index", line, field));
  }
  return v;
}

std::string join(std::span<const std::string> header) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  return out;
}

void expect_header(const std::vector<std::vector<std::string>>& rows, std::string_view header) {
  if (rows.empty()) throw FormatError("csv: empty input");
  if (join(rows.front()) != header) {
    throw FormatError(fmt::format("csv: expected header '{}'", header));
  }
}

}  // namespace

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

std::string format_impact_csv(std::span<const ImpactCurve> curves) {
  std::string out(kImpactHeader);
  out += '\n';
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      out += fmt::format("{},{},{},{},{},{},{}\n", quote(c.augmentation_id),
                         quote(c.layer_names[i]), format_real(c.normalized_depths[i]),
                         format_real(c.cka_nn[i]), format_real(c.cka_n1a[i]),
                         format_real(c.cka_n2a[i]), format_real(c.impacts[i]));
    }
  }
  return out;
}

std::vector<ImpactCurve> parse_impact_csv(std::string_view text) {
  const auto rows = split_rows(text);
  expect_header(rows, kImpactHeader);
  std::vector<ImpactCurve> curves;
  std::map<std::string, std::size_t> index;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (f.size() != 7) throw FormatError(fmt::format("csv line {}: expected 7 fields", r + 1));
    auto [it, inserted] = index.try_emplace(f[0], curves.size());
    if (inserted) {
      curves.emplace_back();
      curves.back().augmentation_id = f[0];
    }
    ImpactCurve& c = curves[it->second];
    c.layer_names.push_back(f[1]);
    c.normalized_depths.push_back(parse_real(f[2], r + 1));
    c.cka_nn.push_back(parse_real(f[3], r + 1));
    c.cka_n1a.push_back(parse_real(f[4], r + 1));
    c.cka_n2a.push_back(parse_real(f[5], r + 1));
    c.impacts.push_back(parse_real(f[6], r + 1));
  }
  for (auto& c : curves) c.average = average_impact(c);
  return curves;
}

std::string format_summary_csv(std::span<const SummaryRow> rows) {
  std::string out = "augmentation_id,accuracy,average_decrease\n";
  for (const auto& row : rows) {
    out += fmt::format("{},{},{}\n", quote(row.augmentation_id),
                       row.accuracy ? format_real(*row.accuracy) : std::string(),
                       format_real(row.average_decrease));
  }
  return out;
}

std::string format_cka_csv(const CkaMatrix& m) {
  std::string out(kCkaHeader);
  out += '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      out += fmt::format("{},{},{},{},{}\n", i, j, quote(m.layers_a[i]), quote(m.layers_b[j]),
                         format_real(m.at(i, j)));
    }
  }
  return out;
}

CkaMatrix parse_cka_csv(std::string_view text) {
  const auto rows = split_rows(text);
  expect_header(rows, kCkaHeader);
  struct Cell {
    std::size_t i, j;
    double v;
  };
  std::vector<Cell> cells;
  std::map<std::size_t, std::string> names_a, names_b;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (f.size() != 5) throw FormatError(fmt::format("csv line {}: expected 5 fields", r + 1));
    const std::size_t i = parse_index(f[0], r + 1);
    const std::size_t j = parse_index(f[1], r + 1);
    names_a[i] = f[2];
    names_b[j] = f[3];
    cells.push_back({i, j, parse_real(f[4], r + 1)});
  }
  CkaMatrix m;
  for (std::size_t i = 0; i < names_a.size(); ++i) {
    if (!names_a.contains(i)) throw FormatError("cka csv: row indices are not contiguous");
    m.layers_a.push_back(names_a[i]);
  }
  for (std::size_t j = 0; j < names_b.size(); ++j) {
    if (!names_b.contains(j)) throw FormatError("cka csv: column indices are not contiguous");
    m.layers_b.push_back(names_b[j]);
  }
  if (cells.size() != m.rows() * m.cols()) throw FormatError("cka csv: matrix is incomplete");
  m.values.assign(cells.size(), 0.0);
  std::vector<bool> filled(cells.size(), false);
  for (const auto& c : cells) {
    const std::size_t k = c.i * m.cols() + c.j;
    if (filled[k]) throw FormatError(fmt::format("cka csv: duplicate cell ({}, {})", c.i, c.j));
    filled[k] = true;
    m.values[k] = c.v;
  }
  return m;
}

}  // namespace augimpact
