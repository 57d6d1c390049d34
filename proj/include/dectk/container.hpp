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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dectk/bytes.hpp"

// MTC v1: a flat little-endian container of named float32 tensors plus an
// opaque key/value extras dictionary.
//
//   "MTC1" | version u16 | reserved u16 (=0) | tensor count u32 | extras count u32
//   per tensor: name len u16 | name | rank u8 | dims u32 x rank | payload len u64 | payload
//   per extra:  key len u16  | key  | value len u64 | value
namespace dectk::container {

inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::uint64_t kHeaderSize = 16;
// Fixed bytes of an extras entry besides the key and value themselves.
inline constexpr std::uint64_t kExtraOverhead = 2 + 8;

struct TensorEntry {
  std::string name;
  std::vector<std::uint32_t> shape;
  std::vector<float> data;

  std::uint64_t element_count() const;
  // Serialized size of this entry including its header.
  std::uint64_t serialized_size() const;

  friend bool operator==(const TensorEntry& a, const TensorEntry& b);
};

struct ExtraEntry {
  std::string key;
  Bytes value;

  std::uint64_t serialized_size() const { return kExtraOverhead + key.size() + value.size(); }
  friend bool operator==(const ExtraEntry&, const ExtraEntry&) = default;
};

struct Checkpoint {
  std::uint16_t version = kFormatVersion;
  std::vector<TensorEntry> tensors;
  std::vector<ExtraEntry> extras;

  const TensorEntry* find_tensor(std::string_view name) const;
  TensorEntry* find_tensor(std::string_view name);
  const ExtraEntry* find_extra(std::string_view key) const;

  friend bool operator==(const Checkpoint& a, const Checkpoint& b);
};

// Bytes of the serialized tensor header for a given name and rank.
std::uint64_t tensor_header_size(std::size_t name_bytes, std::size_t rank);

// Throws SchemaError when names collide, are empty or too long, or when a
// tensor's data length disagrees with its shape.
void validate(const Checkpoint& ckpt);

Bytes serialize(const Checkpoint& ckpt);
std::uint64_t write_checkpoint(const Checkpoint& ckpt, std::ostream& sink);

// Strict parser: trailing bytes, bad magic, truncation and inconsistent
// lengths are FormatError. Never reads past `data`.
Checkpoint parse(ByteView data);
Checkpoint read_checkpoint(std::istream& source);

Checkpoint load(const std::string& path);
void save(const Checkpoint& ckpt, const std::string& path);

std::uint64_t total_size(const Checkpoint& ckpt);
std::uint64_t parameter_count(const Checkpoint& ckpt);

// Bitwise equality of float payloads (NaN payloads included).
bool same_bits(const std::vector<float>& a, const std::vector<float>& b);

}  // namespace dectk::container
