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

#include <algorithm>
#include <cctype>
#include <cstring>

#include <zlib.h>

#include "dectk/stego.hpp"

namespace dectk::stego {
namespace {
constexpr char kMagic[4] = {'D', 'E', 'X', 'C'};
}

std::string_view channel_name(Channel c) {
  switch (c) {
    case Channel::kLsb: return "LSB";
    case Channel::kDict: return "DICT";
    case Channel::kValue: return "VALUE";
  }
  return "?";
}

Channel parse_channel(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "lsb") return Channel::kLsb;
  if (lower == "dict") return Channel::kDict;
  if (lower == "value") return Channel::kValue;
  throw PlanError("unknown channel '" + std::string(name) + "' (expected lsb, dict or value)");
}

std::uint32_t crc32(ByteView data) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in chunks.
  std::size_t pos = 0;
  while (pos < data.size()) {
    const std::size_t n = std::min<std::size_t>(data.size() - pos, 1u << 30);
    crc = ::crc32(crc, data.data() + pos, static_cast<uInt>(n));
    pos += n;
  }
  return static_cast<std::uint32_t>(crc);
}

Bytes make_frame(ByteView payload, std::uint8_t flags) {
  Bytes out;
  out.reserve(kFrameOverhead + payload.size());
  ByteWriter w(out);
  w.raw(std::string_view(kMagic, 4));
  w.u8(kFrameVersion);
  w.u8(flags);
  w.u64(payload.size());
  w.u32(crc32(payload));
  w.raw(payload);
  return out;
}

bool has_frame_magic(ByteView data) {
  return data.size() >= 4 && std::memcmp(data.data(), kMagic, 4) == 0;
}

Bytes open_frame(ByteView framed) {
  if (!has_frame_magic(framed)) throw NoPayloadError("no DEXC frame magic");
  if (framed.size() < kFrameOverhead) throw CorruptPayloadError("DEXC frame header truncated");
  ByteReader r(framed);
  r.take(4, "magic");
  const std::uint8_t version = r.u8("frame version");
  r.u8("frame flags");
  const std::uint64_t length = r.u64("frame length");
  const std::uint32_t crc = r.u32("frame crc");
  if (version != kFrameVersion) {
    throw CorruptPayloadError("unsupported DEXC frame version " + std::to_string(version));
  }
  if (length > r.remaining()) {
    throw CorruptPayloadError("DEXC frame declares " + std::to_string(length) + " bytes but only " +
                              std::to_string(r.remaining()) + " are present");
  }
  ByteView payload = r.take(length, "frame payload");
  if (crc32(payload) != crc) throw CorruptPayloadError("DEXC frame CRC mismatch");
  return Bytes(payload.begin(), payload.end());
}

}  // namespace dectk::stego
