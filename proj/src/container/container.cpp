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

#include "dectk/container.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <unordered_set>

namespace dectk::container {
namespace {

constexpr char kMagic[4] = {'M', 'T', 'C', '1'};

bool checked_product(const std::vector<std::uint32_t>& shape, std::uint64_t& out) {
  std::uint64_t n = 1;
  for (std::uint32_t d : shape) {
    if (d != 0 && n > std::numeric_limits<std::uint64_t>::max() / d) return false;
    n *= d;
  }
  out = n;
  return true;
}

}  // namespace

std::uint64_t TensorEntry::element_count() const {
  std::uint64_t n = 1;
  for (std::uint32_t d : shape) n *= d;
  return n;
}

std::uint64_t TensorEntry::serialized_size() const {
  return tensor_header_size(name.size(), shape.size()) + 4 * static_cast<std::uint64_t>(data.size());
}

bool same_bits(const std::vector<float>& a, const std::vector<float>& b) {
  return a.size() == b.size() &&
         (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0);
}

bool operator==(const TensorEntry& a, const TensorEntry& b) {
  return a.name == b.name && a.shape == b.shape && same_bits(a.data, b.data);
}

bool operator==(const Checkpoint& a, const Checkpoint& b) {
  return a.version == b.version && a.tensors == b.tensors && a.extras == b.extras;
}

const TensorEntry* Checkpoint::find_tensor(std::string_view name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

TensorEntry* Checkpoint::find_tensor(std::string_view name) {
  for (auto& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const ExtraEntry* Checkpoint::find_extra(std::string_view key) const {
  for (const auto& e : extras) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

std::uint64_t tensor_header_size(std::size_t name_bytes, std::size_t rank) {
  return 2 + name_bytes + 1 + 4 * static_cast<std::uint64_t>(rank) + 8;
}

void validate(const Checkpoint& ckpt) {
  if (ckpt.version != kFormatVersion) {
    throw SchemaError("unsupported checkpoint version " + std::to_string(ckpt.version));
  }
  std::unordered_set<std::string_view> names;
  for (const auto& t : ckpt.tensors) {
    if (t.name.empty()) throw SchemaError("tensor with empty name");
    if (t.name.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw SchemaError("tensor name too long: " + t.name.substr(0, 64));
    }
    if (!names.insert(t.name).second) throw SchemaError("duplicate tensor name '" + t.name + "'");
    if (t.shape.size() > std::numeric_limits<std::uint8_t>::max()) {
      throw SchemaError("tensor '" + t.name + "' has rank above 255");
    }
    std::uint64_t n = 0;
    for (std::uint32_t d : t.shape) {
      if (d == 0) throw SchemaError("tensor '" + t.name + "' has a zero dimension");
    }
    if (!checked_product(t.shape, n) || n != t.data.size()) {
      throw SchemaError("tensor '" + t.name + "' data length " + std::to_string(t.data.size()) +
                        " does not match its shape");
    }
  }
  std::unordered_set<std::string_view> keys;
  for (const auto& e : ckpt.extras) {
    if (e.key.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw SchemaError("extras key too long");
    }
    if (!keys.insert(e.key).second) throw SchemaError("duplicate extras key '" + e.key + "'");
  }
}

Bytes serialize(const Checkpoint& ckpt) {
  validate(ckpt);
  Bytes out;
  out.reserve(total_size(ckpt));
  ByteWriter w(out);
  w.raw(std::string_view(kMagic, 4));
  w.u16(ckpt.version);
  w.u16(0);
  w.u32(static_cast<std::uint32_t>(ckpt.tensors.size()));
  w.u32(static_cast<std::uint32_t>(ckpt.extras.size()));
  for (const auto& t : ckpt.tensors) {
    w.u16(static_cast<std::uint16_t>(t.name.size()));
    w.raw(t.name);
    w.u8(static_cast<std::uint8_t>(t.shape.size()));
    for (std::uint32_t d : t.shape) w.u32(d);
    w.u64(4 * static_cast<std::uint64_t>(t.data.size()));
    if constexpr (std::endian::native == std::endian::little) {
      const auto* p = reinterpret_cast<const std::uint8_t*>(t.data.data());
      out.insert(out.end(), p, p + t.data.size() * sizeof(float));
    } else {
      for (float v : t.data) w.f32(v);
    }
  }
  for (const auto& e : ckpt.extras) {
    w.u16(static_cast<std::uint16_t>(e.key.size()));
    w.raw(e.key);
    w.u64(e.value.size());
    w.raw(e.value);
  }
  return out;
}

std::uint64_t write_checkpoint(const Checkpoint& ckpt, std::ostream& sink) {
  const Bytes bytes = serialize(ckpt);
  sink.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!sink) throw Error("failed writing checkpoint stream");
  return bytes.size();
}

Checkpoint parse(ByteView data) {
  ByteReader r(data);
  ByteView magic = r.take(4, "magic");
  if (std::memcmp(magic.data(), kMagic, 4) != 0) throw FormatError("bad magic: not an MTC1 checkpoint");
  Checkpoint ckpt;
  ckpt.version = r.u16("format version");
  if (ckpt.version != kFormatVersion) {
    throw FormatError("unsupported format version " + std::to_string(ckpt.version));
  }
  if (r.u16("reserved field") != 0) throw FormatError("reserved header field is not zero");
  const std::uint32_t tensor_count = r.u32("tensor count");
  const std::uint32_t extras_count = r.u32("extras count");

  std::unordered_set<std::string> names;
  for (std::uint32_t i = 0; i < tensor_count; ++i) {
    const std::string where = "tensor #" + std::to_string(i);
    const std::uint16_t name_len = r.u16(where + " name length");
    ByteView name_bytes = r.take(name_len, where + " name");
    TensorEntry t;
    t.name.assign(name_bytes.begin(), name_bytes.end());
    if (t.name.empty()) throw FormatError(where + " has an empty name");
    if (!names.insert(t.name).second) throw FormatError("duplicate tensor name '" + t.name + "'");
    const std::string label = "tensor '" + t.name + "'";
    const std::uint8_t rank = r.u8(label + " rank");
    r.require(4ull * rank, label + " dims");
    t.shape.resize(rank);
    for (auto& d : t.shape) {
      d = r.u32(label + " dims");
      if (d == 0) throw FormatError(label + " has a zero dimension");
    }
    std::uint64_t elements = 0;
    if (!checked_product(t.shape, elements) || elements > std::numeric_limits<std::uint64_t>::max() / 4) {
      throw FormatError(label + " shape overflows");
    }
    const std::uint64_t payload_len = r.u64(label + " payload length");
    if (payload_len != elements * 4) {
      throw FormatError(label + " payload length " + std::to_string(payload_len) +
                        " disagrees with shape");
    }
    ByteView payload = r.take(payload_len, label + " payload");
    t.data.resize(static_cast<std::size_t>(elements));
    if constexpr (std::endian::native == std::endian::little) {
      if (!payload.empty()) std::memcpy(t.data.data(), payload.data(), payload.size());
    } else {
      ByteReader pr(payload);
      for (auto& v : t.data) v = pr.f32(label + " payload");
    }
    ckpt.tensors.push_back(std::move(t));
  }

  std::unordered_set<std::string> keys;
  for (std::uint32_t i = 0; i < extras_count; ++i) {
    const std::string where = "extra #" + std::to_string(i);
    const std::uint16_t key_len = r.u16(where + " key length");
    ByteView key_bytes = r.take(key_len, where + " key");
    ExtraEntry e;
    e.key.assign(key_bytes.begin(), key_bytes.end());
    if (!keys.insert(e.key).second) throw FormatError("duplicate extras key '" + e.key + "'");
    const std::string label = "extra '" + e.key + "'";
    const std::uint64_t value_len = r.u64(label + " value length");
    ByteView value = r.take(value_len, label + " value");
    e.value.assign(value.begin(), value.end());
    ckpt.extras.push_back(std::move(e));
  }
  if (!r.at_end()) {
    throw FormatError(std::to_string(r.remaining()) + " trailing bytes after checkpoint");
  }
  return ckpt;
}

Checkpoint read_checkpoint(std::istream& source) {
  Bytes bytes{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
  return parse(bytes);
}

Checkpoint load(const std::string& path) { return parse(read_file(path)); }

void save(const Checkpoint& ckpt, const std::string& path) { write_file_atomic(path, serialize(ckpt)); }

std::uint64_t total_size(const Checkpoint& ckpt) {
  std::uint64_t size = kHeaderSize;
  for (const auto& t : ckpt.tensors) size += t.serialized_size();
  for (const auto& e : ckpt.extras) size += e.serialized_size();
  return size;
}

std::uint64_t parameter_count(const Checkpoint& ckpt) {
  std::uint64_t n = 0;
  for (const auto& t : ckpt.tensors) n += t.data.size();
  return n;
}

}  // namespace dectk::container
