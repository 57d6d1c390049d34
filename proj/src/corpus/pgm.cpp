// Copyright 2026 The dectk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <cmath>
#include <string>

#include "dectk/corpus.hpp"

namespace dectk::corpus {
namespace {

class HeaderScanner {
 public:
  explicit HeaderScanner(ByteView data) : data_(data) {}

  void skip_space_and_comments() {
    while (pos_ < data_.size()) {
      const auto c = data_[pos_];
      if (c == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  std::uint32_t number(const char* what) {
    skip_space_and_comments();
    std::uint64_t v = 0;
    std::size_t digits = 0;
    while (pos_ < data_.size() && std::isdigit(data_[pos_])) {
      v = v * 10 + (data_[pos_++] - '0');
      if (v > 0xFFFFFFFFull) throw FormatError(std::string("PGM ") + what + " too large");
      ++digits;
    }
    if (digits == 0) throw FormatError(std::string("PGM header: missing ") + what);
    return static_cast<std::uint32_t>(v);
  }

  std::size_t& pos() { return pos_; }

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

}  // namespace

ImagePlane read_pgm(ByteView data) {
  if (data.size() < 2 || data[0] != 'P') throw FormatError("not a PGM file");
  if (data[1] != '5') {
    throw FormatError(std::string("unsupported PNM variant P") + static_cast<char>(data[1]) + " (only binary P5)");
  }
  HeaderScanner scan(data.subspan(2));
  const std::uint32_t width = scan.number("width");
  const std::uint32_t height = scan.number("height");
  const std::uint32_t maxval = scan.number("maxval");
  if (width == 0 || height == 0) throw FormatError("PGM dimensions must be positive");
  if (maxval == 0 || maxval > 65535) throw FormatError("PGM maxval must be in [1, 65535]");
  std::size_t pos = 2 + scan.pos();
  if (pos >= data.size() || !std::isspace(data[pos])) throw FormatError("PGM header not terminated by whitespace");
  ++pos;
  const std::uint64_t bytes_per = maxval > 255 ? 2 : 1;
  const std::uint64_t count = static_cast<std::uint64_t>(width) * height;
  if (data.size() - pos != count * bytes_per) {
    throw FormatError("PGM sample data is " + std::to_string(data.size() - pos) + " bytes, expected " +
                      std::to_string(count * bytes_per));
  }
  std::vector<float> values(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint32_t s = data[pos + i * bytes_per];
    if (bytes_per == 2) s = (s << 8) | data[pos + i * 2 + 1];
    if (s > maxval) throw FormatError("PGM sample exceeds maxval");
    values[i] = static_cast<float>(s);
  }
  return ImagePlane::from_values(width, height, std::move(values));
}

Bytes write_pgm(const ImagePlane& img, std::uint16_t maxval) {
  if (img.width == 0 || img.height == 0 || img.values.size() != img.pixel_count()) {
    throw RangeError("cannot write an empty or inconsistent plane as PGM");
  }
  std::uint32_t top = 0;
  for (float v : img.values) {
    if (!(v >= 0.0f && v <= 65535.0f) || v != std::floor(v)) {
      throw RangeError("PGM samples must be integers in [0, 65535]");
    }
    top = std::max(top, static_cast<std::uint32_t>(v));
  }
  const std::uint32_t mv = maxval == 0 ? std::max<std::uint32_t>(top, 1) : maxval;
  if (top > mv) throw RangeError("sample " + std::to_string(top) + " exceeds maxval " + std::to_string(mv));
  const std::string header =
      "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n" + std::to_string(mv) + "\n";
  Bytes out(header.begin(), header.end());
  out.reserve(out.size() + img.values.size() * 2);
  for (float v : img.values) {
    const auto s = static_cast<std::uint32_t>(v);
    if (mv > 255) out.push_back(static_cast<std::uint8_t>(s >> 8));
    out.push_back(static_cast<std::uint8_t>(s & 0xFF));
  }
  return out;
}

}  // namespace dectk::corpus
