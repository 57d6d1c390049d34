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

#include "dectk/range_coder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dectk::codec {
namespace {
constexpr std::uint32_t kTop = 1u << 24;
}

FrequencyTable::FrequencyTable(int min_symbol, std::span<const std::uint32_t> frequencies)
    : min_symbol_(min_symbol) {
  if (frequencies.empty()) throw RangeError("frequency table needs at least one symbol");
  cdf_.reserve(frequencies.size() + 1);
  cdf_.push_back(0);
  std::uint64_t total = 0;
  for (std::uint32_t f : frequencies) {
    if (f == 0) throw RangeError("zero frequency in table");
    total += f;
    if (total > kProbabilityTotal) break;
    cdf_.push_back(static_cast<std::uint32_t>(total));
  }
  if (total != kProbabilityTotal) {
    throw RangeError("frequencies sum to " + std::to_string(total) + ", expected 65536");
  }
}

int FrequencyTable::lookup(std::uint32_t target) const {
  // First cdf entry strictly greater than target, minus one.
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
  return min_symbol_ + static_cast<int>(it - cdf_.begin()) - 1;
}

double FrequencyTable::cost_bits(int symbol) const {
  return kProbabilityBits - std::log2(static_cast<double>(frequency(symbol)));
}

void RangeEncoder::shift_low() {
  if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
    const auto carry = static_cast<std::uint8_t>(low_ >> 32);
    std::uint8_t pending = cache_;
    do {
      out_.push_back(static_cast<std::uint8_t>(pending + carry));
      pending = 0xFF;
    } while (--cache_size_ != 0);
    cache_ = static_cast<std::uint8_t>(low_ >> 24);
  }
  ++cache_size_;
  low_ = (low_ & 0x00FFFFFFu) << 8;
}

void RangeEncoder::encode(std::uint32_t low, std::uint32_t frequency) {
  const std::uint32_t r = range_ >> kProbabilityBits;
  low_ += static_cast<std::uint64_t>(low) * r;
  range_ = r * frequency;
  while (range_ < kTop) {
    range_ <<= 8;
    shift_low();
  }
}

void RangeEncoder::encode(const FrequencyTable& table, int symbol) {
  if (!table.contains(symbol)) {
    throw EncodeError("symbol " + std::to_string(symbol) + " outside model range [" +
                      std::to_string(table.min_symbol()) + ", " + std::to_string(table.max_symbol()) + "]");
  }
  encode(table.low(symbol), table.frequency(symbol));
}

Bytes RangeEncoder::finish() {
  for (int i = 0; i < 5; ++i) shift_low();
  Bytes out = std::move(out_);
  *this = RangeEncoder{};
  return out;
}

RangeDecoder::RangeDecoder(ByteView data) : data_(data) {
  if (data_.size() < 5) throw DecodeError("range-coded stream shorter than 5 bytes");
  if (data_[0] != 0) throw DecodeError("range-coded stream has a non-zero lead byte");
  pos_ = 1;
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | data_[pos_++];
}

std::uint8_t RangeDecoder::next_byte() {
  if (pos_ >= data_.size()) throw DecodeError("range-coded stream ended early");
  return data_[pos_++];
}

int RangeDecoder::decode(const FrequencyTable& table) {
  const std::uint32_t r = range_ >> kProbabilityBits;
  const std::uint32_t target = code_ / r;
  if (target >= kProbabilityTotal) throw DecodeError("range decoder state out of bounds");
  const int symbol = table.lookup(target);
  code_ -= table.low(symbol) * r;
  range_ = r * table.frequency(symbol);
  while (range_ < kTop) {
    code_ = (code_ << 8) | next_byte();
    range_ <<= 8;
  }
  return symbol;
}

void RangeDecoder::finish() const {
  if (pos_ != data_.size()) {
    throw DecodeError(std::to_string(data_.size() - pos_) + " unread bytes after the last symbol");
  }
}

Bytes range_encode(std::span<const int> symbols, std::span<const FrequencyTable* const> tables) {
  if (symbols.size() != tables.size()) throw EncodeError("one table per symbol required");
  RangeEncoder enc;
  for (std::size_t i = 0; i < symbols.size(); ++i) enc.encode(*tables[i], symbols[i]);
  return enc.finish();
}

std::vector<int> range_decode(ByteView data, std::size_t count, std::span<const FrequencyTable* const> tables) {
  if (tables.size() != count) throw DecodeError("one table per symbol required");
  RangeDecoder dec(data);
  std::vector<int> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = dec.decode(*tables[i]);
  dec.finish();
  return out;
}

}  // namespace dectk::codec
