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

#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "augimpact/errors.hpp"
#include "augimpact/imageio.hpp"

static_assert(std::endian::native == std::endian::little,
              "NPY codec assumes a little-endian host");

namespace augimpact {
namespace {

constexpr std::string_view kMagic = "\x93NUMPY";
constexpr std::size_t kPreludeBytes = 10;  // magic + version + header length
constexpr std::size_t kAlign = 64;

struct NpyHeader {
  std::string descr;
  bool fortran_order = false;
  std::vector<std::size_t> shape;
};

// Minimal parser for the Python-literal dict numpy writes, e.g.
// {'descr': '<f8', 'fortran_order': False, 'shape': (2, 3), }
class HeaderParser {
 public:
  explicit HeaderParser(std::string_view text) : text_(text) {}

  NpyHeader parse() {
    NpyHeader header;
    bool have_descr = false, have_order = false, have_shape = false;
    expect('{');
    while (true) {
      skip_ws();
      if (peek() == '}') {
        ++pos_;
        break;
      }
      const std::string key = parse_string();
      expect(':');
      if (key == "descr") {
        header.descr = parse_string();
        have_descr = true;
      } else if (key == "fortran_order") {
        header.fortran_order = parse_bool();
        have_order = true;
      } else if (key == "shape") {
        header.shape = parse_shape();
        have_shape = true;
      } else {
        throw FormatError(fmt::format("npy: unexpected header key '{}'", key));
      }
      skip_ws();
      if (peek() == ',') ++pos_;
    }
    if (!have_descr || !have_order || !have_shape) {
      throw FormatError("npy: header is missing descr, fortran_order or shape");
    }
    return header;
  }

 private:
  char peek() const {
    if (pos_ >= text_.size()) throw FormatError("npy: truncated header");
    return text_[pos_];
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip_ws();
    if (peek() != c) throw FormatError(fmt::format("npy: expected '{}' in header", c));
    ++pos_;
  }
  std::string parse_string() {
    skip_ws();
    const char quote = peek();
    if (quote != '\'' && quote != '"') throw FormatError("npy: expected quoted string");
    ++pos_;
    const auto end = text_.find(quote, pos_);
    if (end == std::string_view::npos) throw FormatError("npy: unterminated string");
    std::string out(text_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return out;
  }
  bool parse_bool() {
    skip_ws();
    if (text_.substr(pos_, 4) == "True") {
      pos_ += 4;
      return true;
    }
    if (text_.substr(pos_, 5) == "False") {
      pos_ += 5;
      return false;
    }
    throw FormatError("npy: fortran_order must be True or False");
  }
  std::vector<std::size_t> parse_shape() {
    expect('(');
    std::vector<std::size_t> dims;
    while (true) {
      skip_ws();
      if (peek() == ')') {
        ++pos_;
        return dims;
      }
      if (!std::isdigit(static_cast<unsigned char>(peek()))) {
        throw FormatError("npy: malformed shape tuple");
      }
      std::size_t value = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        value = value * 10 + static_cast<std::size_t>(text_[pos_] - '0');
        ++pos_;
      }
      dims.push_back(value);
      skip_ws();
      if (peek() == ',') ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Matrix2D decode_npy(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPreludeBytes ||
      std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw FormatError("npy: bad magic");
  }
  if (bytes[6] != 1 || bytes[7] != 0) {
    throw FormatError(fmt::format("npy: unsupported version {}.{}", bytes[6], bytes[7]));
  }
  const std::size_t header_len = bytes[8] | (static_cast<std::size_t>(bytes[9]) << 8);
  if (bytes.size() < kPreludeBytes + header_len) throw FormatError("npy: truncated header");
  const std::string_view header_text(reinterpret_cast<const char*>(bytes.data()) + kPreludeBytes,
                                     header_len);
  const NpyHeader header = HeaderParser(header_text).parse();

  if (header.fortran_order) throw FormatError("npy: Fortran-order arrays are not supported");
  std::size_t item_size = 0;
  if (header.descr == "<f8") {
    item_size = 8;
  } else if (header.descr == "<f4") {
    item_size = 4;
  } else {
    throw FormatError(fmt::format("npy: unsupported dtype '{}'", header.descr));
  }
  if (header.shape.size() != 2) {
    throw FormatError(fmt::format("npy: expected 2 dimensions, got {}", header.shape.size()));
  }
  const std::size_t rows = header.shape[0];
  const std::size_t cols = header.shape[1];
  const std::size_t count = rows * cols;
  const auto payload = bytes.subspan(kPreludeBytes + header_len);
  if (payload.size() != count * item_size) {
    throw FormatError(fmt::format("npy: payload is {} bytes, shape needs {}", payload.size(),
                                  count * item_size));
  }

  std::vector<double> values(count);
  if (item_size == 8) {
    std::memcpy(values.data(), payload.data(), payload.size());
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      float f;
      std::memcpy(&f, payload.data() + i * 4, 4);
      values[i] = static_cast<double>(f);
    }
  }
  return Matrix2D(rows, cols, std::move(values));
}

std::vector<std::uint8_t> encode_npy(const Matrix2D& m) {
  std::string header = fmt::format("{{'descr': '<f8', 'fortran_order': False, 'shape': ({}, {}), }}",
                                    m.rows(), m.cols());
  // Pad with spaces so the payload starts on a 64-byte boundary; the header
  // always ends in '\n'.
  const std::size_t unpadded = kPreludeBytes + header.size() + 1;
  header.append((kAlign - unpadded % kAlign) % kAlign, ' ');
  header.push_back('\n');

  std::vector<std::uint8_t> out;
  out.reserve(kPreludeBytes + header.size() + m.values().size_bytes());
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  out.push_back(1);
  out.push_back(0);
  out.push_back(static_cast<std::uint8_t>(header.size() & 0xff));
  out.push_back(static_cast<std::uint8_t>(header.size() >> 8));
  out.insert(out.end(), header.begin(), header.end());
  const auto* raw = reinterpret_cast<const std::uint8_t*>(m.values().data());
  out.insert(out.end(), raw, raw + m.values().size_bytes());
  return out;
}

Matrix2D read_npy(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return decode_npy(bytes);
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_npy(const Matrix2D& m, const std::filesystem::path& path) {
  write_file_bytes(path, encode_npy(m));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(fmt::format("read failed for '{}'", path.string()));
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

}  // namespace augimpact
