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

#include <bit>
#include <cmath>
#include <unordered_set>

#include "dectk/stego.hpp"

namespace dectk::stego {
namespace {

using container::Checkpoint;
using container::TensorEntry;

void check_lsb_plan(const EmbedPlan& plan) {
  if (plan.channel != Channel::kLsb) throw PlanError("plan channel is not LSB");
  if (plan.bits_per_param < 1 || plan.bits_per_param > kMaxLsbBits) {
    throw PlanError("bits_per_param must be in [1, 23], got " + std::to_string(plan.bits_per_param));
  }
}

// Carrier tensor indices in plan order.
std::vector<std::size_t> resolve_carriers(const Checkpoint& ckpt, const EmbedPlan& plan) {
  std::vector<std::size_t> out;
  std::unordered_set<std::string_view> seen;
  for (const auto& name : plan.carrier_tensors) {
    if (!seen.insert(name).second) throw PlanError("carrier tensor '" + name + "' listed twice");
    bool found = false;
    for (std::size_t i = 0; i < ckpt.tensors.size(); ++i) {
      if (ckpt.tensors[i].name == name) {
        out.push_back(i);
        found = true;
        break;
      }
    }
    if (!found) throw PlanError("unknown carrier tensor '" + name + "'");
  }
  return out;
}

std::uint64_t carrier_params(const Checkpoint& ckpt, const std::vector<std::size_t>& carriers) {
  std::uint64_t n = 0;
  for (std::size_t i : carriers) n += ckpt.tensors[i].data.size();
  return n;
}

// Pulls the low `bits` of successive carrier words as one LSB-first bitstream.
class LsbReader {
 public:
  LsbReader(const Checkpoint& ckpt, const std::vector<std::size_t>& carriers, int bits)
      : ckpt_(ckpt), carriers_(carriers), bits_(bits) {}

  Bytes read(std::uint64_t count) {
    Bytes out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t i = 0; i < count; ++i) {
      while (held_ < 8) refill();
      out.push_back(static_cast<std::uint8_t>(acc_ & 0xFF));
      acc_ >>= 8;
      held_ -= 8;
    }
    return out;
  }

 private:
  void refill() {
    while (carrier_ < carriers_.size() && elem_ >= ckpt_.tensors[carriers_[carrier_]].data.size()) {
      ++carrier_;
      elem_ = 0;
    }
    if (carrier_ >= carriers_.size()) throw CorruptPayloadError("LSB payload runs past carrier capacity");
    const float v = ckpt_.tensors[carriers_[carrier_]].data[elem_++];
    const std::uint64_t word = std::bit_cast<std::uint32_t>(v);
    acc_ |= (word & ((1ull << bits_) - 1)) << held_;
    held_ += bits_;
  }

  const Checkpoint& ckpt_;
  const std::vector<std::size_t>& carriers_;
  int bits_;
  std::size_t carrier_ = 0;
  std::size_t elem_ = 0;
  std::uint64_t acc_ = 0;
  int held_ = 0;
};

}  // namespace

std::uint64_t lsb_capacity(const Checkpoint& ckpt, const EmbedPlan& plan) {
  check_lsb_plan(plan);
  const auto carriers = resolve_carriers(ckpt, plan);
  const std::uint64_t bytes = carrier_params(ckpt, carriers) * plan.bits_per_param / 8;
  return bytes > kFrameOverhead ? bytes - kFrameOverhead : 0;
}

Checkpoint embed_lsb(const Checkpoint& ckpt, const EmbedPlan& plan, ByteView payload) {
  const std::uint64_t capacity = lsb_capacity(ckpt, plan);
  const auto carriers = resolve_carriers(ckpt, plan);
  if (payload.size() > capacity ||
      carrier_params(ckpt, carriers) * plan.bits_per_param / 8 < kFrameOverhead) {
    throw CapacityError("payload of " + std::to_string(payload.size()) + " bytes exceeds LSB capacity of " +
                        std::to_string(capacity) + " bytes");
  }
  const Bytes frame = make_frame(payload);
  const std::uint64_t total_bits = 8 * static_cast<std::uint64_t>(frame.size());
  const int bits = plan.bits_per_param;

  Checkpoint out = ckpt;
  std::uint64_t pos = 0;
  for (std::size_t ci : carriers) {
    TensorEntry& t = out.tensors[ci];
    for (float& v : t.data) {
      if (pos >= total_bits) return out;
      if (!std::isfinite(v)) {
        throw RangeError("carrier tensor '" + t.name + "' holds a non-finite value");
      }
      const int n = static_cast<int>(std::min<std::uint64_t>(bits, total_bits - pos));
      std::uint32_t chunk = 0;
      for (int b = 0; b < n; ++b, ++pos) {
        chunk |= static_cast<std::uint32_t>((frame[pos >> 3] >> (pos & 7)) & 1u) << b;
      }
      const std::uint32_t mask = n == 32 ? ~0u : ((1u << n) - 1);
      const std::uint32_t word = (std::bit_cast<std::uint32_t>(v) & ~mask) | chunk;
      v = std::bit_cast<float>(word);
    }
  }
  return out;
}

Bytes extract_lsb(const Checkpoint& ckpt, const EmbedPlan& plan) {
  check_lsb_plan(plan);
  const auto carriers = resolve_carriers(ckpt, plan);
  const std::uint64_t total_bytes = carrier_params(ckpt, carriers) * plan.bits_per_param / 8;
  if (total_bytes < kFrameOverhead) throw NoPayloadError("carriers too small to hold a frame");

  LsbReader reader(ckpt, carriers, plan.bits_per_param);
  Bytes frame = reader.read(kFrameOverhead);
  if (!has_frame_magic(frame)) throw NoPayloadError("no DEXC frame in carrier LSBs");
  ByteReader header(frame);
  header.take(6, "frame prefix");
  const std::uint64_t length = header.u64("frame length");
  if (length > total_bytes - kFrameOverhead) {
    throw CorruptPayloadError("DEXC frame length " + std::to_string(length) + " exceeds carrier capacity");
  }
  Bytes body = reader.read(length);
  frame.insert(frame.end(), body.begin(), body.end());
  return open_frame(frame);
}

Checkpoint embed_dict(const Checkpoint& ckpt, std::string_view key, ByteView payload) {
  if (ckpt.find_extra(key) != nullptr) {
    throw SchemaError("extras key '" + std::string(key) + "' already present");
  }
  Checkpoint out = ckpt;
  out.extras.push_back({std::string(key), make_frame(payload)});
  return out;
}

Bytes extract_dict(const Checkpoint& ckpt, std::string_view key) {
  const auto* entry = ckpt.find_extra(key);
  if (entry == nullptr) throw NoPayloadError("no extras entry '" + std::string(key) + "'");
  return open_frame(entry->value);
}

Checkpoint embed_values(const Checkpoint& ckpt, const EmbedPlan& plan, std::span<const float> values) {
  if (plan.channel != Channel::kValue) throw PlanError("plan channel is not VALUE");
  if (!(plan.value_scale > 0.0) || !std::isfinite(plan.value_scale)) {
    throw PlanError("value_scale must be positive and finite");
  }
  const std::size_t k = plan.carrier_tensors.size();
  if (k == 0) throw PlanError("VALUE plan names no tensors to create");
  if (values.size() < k) {
    throw PlanError("cannot spread " + std::to_string(values.size()) + " values over " + std::to_string(k) +
                    " tensors");
  }
  for (float v : values) {
    if (!std::isfinite(v)) throw RangeError("VALUE channel payload holds a non-finite value");
  }
  Checkpoint out = ckpt;
  const std::size_t base = values.size() / k;
  const std::size_t extra = values.size() % k;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::string& name = plan.carrier_tensors[i];
    if (out.find_tensor(name) != nullptr) throw SchemaError("tensor '" + name + "' already exists");
    const std::size_t n = base + (i < extra ? 1 : 0);
    container::TensorEntry t;
    t.name = name;
    t.shape = {static_cast<std::uint32_t>(n)};
    t.data.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double scaled = static_cast<double>(values[pos + j]) * plan.value_scale;
      t.data[j] = static_cast<float>(scaled);
      if (!std::isfinite(t.data[j])) throw RangeError("scaled value overflows float32");
    }
    pos += n;
    out.tensors.push_back(std::move(t));
  }
  container::validate(out);
  return out;
}

std::vector<float> extract_values(const Checkpoint& ckpt, const EmbedPlan& plan) {
  if (plan.channel != Channel::kValue) throw PlanError("plan channel is not VALUE");
  if (!(plan.value_scale > 0.0) || !std::isfinite(plan.value_scale)) {
    throw PlanError("value_scale must be positive and finite");
  }
  std::vector<float> out;
  for (const auto& name : plan.carrier_tensors) {
    const auto* t = ckpt.find_tensor(name);
    if (t == nullptr) throw NoPayloadError("VALUE tensor '" + name + "' missing");
    for (float v : t->data) out.push_back(static_cast<float>(static_cast<double>(v) / plan.value_scale));
  }
  return out;
}

}  // namespace dectk::stego
