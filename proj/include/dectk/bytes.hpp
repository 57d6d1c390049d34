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

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dectk/error.hpp"

namespace dectk {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

// Little-endian append helpers.
class ByteWriter {
 public:
  explicit ByteWriter(Bytes& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { put_le(v, 2); }
  void u32(std::uint32_t v) { put_le(v, 4); }
  void u64(std::uint64_t v) { put_le(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void raw(ByteView data) {
    if (data.empty()) return;
    const std::size_t at = out_.size();
    out_.resize(at + data.size());
    std::memcpy(out_.data() + at, data.data(), data.size());
  }
  void raw(std::string_view s) { raw(as_bytes(s)); }

 private:
  void put_le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  Bytes& out_;
};

// Bounds-checked little-endian cursor. Every overrun throws FormatError with
// the supplied context so parse errors name what was being read.
class ByteReader {
 public:
  explicit ByteReader(ByteView data) : data_(data) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }
  bool at_end() const { return pos_ == data_.size(); }

  std::uint8_t u8(std::string_view what) { return static_cast<std::uint8_t>(get_le(1, what)); }
  std::uint16_t u16(std::string_view what) { return static_cast<std::uint16_t>(get_le(2, what)); }
  std::uint32_t u32(std::string_view what) { return static_cast<std::uint32_t>(get_le(4, what)); }
  std::uint64_t u64(std::string_view what) { return get_le(8, what); }
  float f32(std::string_view what) { return std::bit_cast<float>(u32(what)); }

  ByteView take(std::uint64_t n, std::string_view what) {
    require(n, what);
    ByteView view = data_.subspan(pos_, static_cast<std::size_t>(n));
    pos_ += static_cast<std::size_t>(n);
    return view;
  }

  void require(std::uint64_t n, std::string_view what) const {
    if (n > remaining()) {
      throw FormatError("truncated input while reading " + std::string(what) + " at offset " +
                        std::to_string(pos_));
    }
  }

 private:
  std::uint64_t get_le(int n, std::string_view what) {
    require(static_cast<std::uint64_t>(n), what);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  ByteView data_;
  std::size_t pos_ = 0;
};

Bytes read_file(const std::string& path);
// Writes to a sibling temp file and renames it into place.
void write_file_atomic(const std::string& path, ByteView data);

}  // namespace dectk
