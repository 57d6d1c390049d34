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

#include <cstdint>
#include <span>
#include <vector>

#include "dectk/bytes.hpp"

namespace dectk::codec {

inline constexpr int kProbabilityBits = 16;
inline constexpr std::uint32_t kProbabilityTotal = 1u << kProbabilityBits;

// Cumulative frequency table over the contiguous symbols
// [min_symbol, min_symbol + size). Frequencies sum to 65536 and are all >= 1.
class FrequencyTable {
 public:
  FrequencyTable() = default;
  // Throws RangeError unless every frequency is >= 1 and they sum to 65536.
  FrequencyTable(int min_symbol, std::span<const std::uint32_t> frequencies);

  int min_symbol() const { return min_symbol_; }
  int max_symbol() const { return min_symbol_ + static_cast<int>(size()) - 1; }
  std::size_t size() const { return cdf_.empty() ? 0 : cdf_.size() - 1; }
  bool contains(int symbol) const { return symbol >= min_symbol_ && symbol <= max_symbol(); }

  std::uint32_t low(int symbol) const { return cdf_[static_cast<std::size_t>(symbol - min_symbol_)]; }
  std::uint32_t frequency(int symbol) const {
    const auto i = static_cast<std::size_t>(symbol - min_symbol_);
    return cdf_[i + 1] - cdf_[i];
  }
  // Symbol whose interval contains `target` in [0, 65536).
  int lookup(std::uint32_t target) const;
  // Bits needed to code `symbol` under this table.
  double cost_bits(int symbol) const;

  const std::vector<std::uint32_t>& cdf() const { return cdf_; }

 private:
  int min_symbol_ = 0;
  std::vector<std::uint32_t> cdf_;
};

// Carry-propagating range coder: 64-bit low, 32-bit range, byte-wise
// renormalization below 2^24, five-byte flush. The first output byte is
// always zero.
class RangeEncoder {
 public:
  void encode(std::uint32_t low, std::uint32_t frequency);
  void encode(const FrequencyTable& table, int symbol);
  Bytes finish();

 private:
  void shift_low();

  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::uint64_t cache_size_ = 1;
  Bytes out_;
};

class RangeDecoder {
 public:
  // Throws DecodeError on a stream too short to prime or with a non-zero lead byte.
  explicit RangeDecoder(ByteView data);
  int decode(const FrequencyTable& table);
  // Throws DecodeError unless the stream was consumed exactly.
  void finish() const;

 private:
  std::uint8_t next_byte();

  ByteView data_;
  std::size_t pos_ = 0;
  std::uint32_t code_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
};

// One table per symbol. Out-of-range symbols are EncodeError.
Bytes range_encode(std::span<const int> symbols, std::span<const FrequencyTable* const> tables);
std::vector<int> range_decode(ByteView data, std::size_t count, std::span<const FrequencyTable* const> tables);

}  // namespace dectk::codec
