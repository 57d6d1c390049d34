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
#include <string>
#include <string_view>
#include <vector>

#include "dectk/bytes.hpp"
#include "dectk/container.hpp"

namespace dectk::stego {

// DEXC frame: "DEXC" | version u8 | flags u8 | length u64 | crc32 u32 | payload.
inline constexpr std::size_t kFrameOverhead = 18;
inline constexpr std::uint8_t kFrameVersion = 1;
inline constexpr int kDefaultLsbBits = 16;
inline constexpr int kMaxLsbBits = 23;  // float32 mantissa width

enum class Channel { kLsb, kDict, kValue };

std::string_view channel_name(Channel c);
// Accepts "lsb", "dict", "value" (any case). Throws PlanError otherwise.
Channel parse_channel(std::string_view name);

struct EmbedPlan {
  Channel channel = Channel::kLsb;
  int bits_per_param = kDefaultLsbBits;
  // LSB: existing tensors whose words carry the frame, in scan order.
  // VALUE: names of the tensors to create.
  std::vector<std::string> carrier_tensors;
  double value_scale = 1.0;
};

// IEEE 802.3 CRC-32 (reflected, init and final xor 0xFFFFFFFF).
std::uint32_t crc32(ByteView data);

Bytes make_frame(ByteView payload, std::uint8_t flags = 0);
bool has_frame_magic(ByteView data);
// Verifies magic, declared length and CRC. Bytes after the frame are ignored.
// Bad magic is NoPayloadError; any other inconsistency is CorruptPayloadError.
Bytes open_frame(ByteView framed);

std::uint64_t lsb_capacity(const container::Checkpoint& ckpt, const EmbedPlan& plan);
container::Checkpoint embed_lsb(const container::Checkpoint& ckpt, const EmbedPlan& plan,
                                ByteView payload);
Bytes extract_lsb(const container::Checkpoint& ckpt, const EmbedPlan& plan);

container::Checkpoint embed_dict(const container::Checkpoint& ckpt, std::string_view key,
                                 ByteView payload);
Bytes extract_dict(const container::Checkpoint& ckpt, std::string_view key);

// Appends tensors holding values x value_scale. Additive noise sigma on the
// stored parameters reads back as noise sigma / value_scale on the values.
container::Checkpoint embed_values(const container::Checkpoint& ckpt, const EmbedPlan& plan,
                                   std::span<const float> values);
std::vector<float> extract_values(const container::Checkpoint& ckpt, const EmbedPlan& plan);

}  // namespace dectk::stego
