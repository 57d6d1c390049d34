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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dectk/codec.hpp"
#include "dectk/container.hpp"
#include "dectk/image.hpp"
#include "dectk/stego.hpp"

namespace dectk::privacy {

// Owner-side mitigation: zero-mean Gaussian noise on exported parameters.
struct NoiseSpec {
  double sigma = 0.0;               // absolute, in parameter units
  std::uint64_t seed = 0;
  std::vector<std::string> scope;   // tensor names; empty means every tensor
};

// RangeError for a negative or non-finite sigma, PlanError for unknown names.
void validate(const NoiseSpec& spec, const container::Checkpoint& ckpt);

// x -> x + N(0, sigma^2) for every scoped value, drawn in tensor then storage
// order from one mt19937_64 stream. sigma 0 returns an exact copy. Extras are
// never touched.
container::Checkpoint add_noise(const container::Checkpoint& ckpt, const NoiseSpec& spec);

// Seed of one sweep cell: seed xor splitmix64(bits(sigma) * golden + trial).
std::uint64_t cell_seed(std::uint64_t seed, double sigma, std::uint64_t trial);

inline const std::vector<double> kDefaultSigmas = {0.0, 0.001, 0.002, 0.003, 0.01, 0.03};

// EP: only the codes leave the lake; the attacker holds the decoder.
// IT: the decoder tensors travel inside the exported checkpoint.
enum class Scenario { kExternalPretraining, kInternalTraining };
std::string_view scenario_name(Scenario s);
Scenario parse_scenario(std::string_view name);  // "ep" / "it"

struct ExportOptions {
  codec::CodecProfile profile;
  Scenario scenario = Scenario::kExternalPretraining;
  bool lsb = true;    // Z in carrier LSBs
  bool dict = true;   // Z as an extras entry
  bool value = true;  // y as appended float tensors, header as an extras entry
  int lsb_bits = stego::kDefaultLsbBits;
  std::vector<std::string> lsb_carriers;  // empty: every tensor of the carrier model
  std::string dict_key = "z.payload";
  std::string y_header_key = "y.header";
  std::vector<std::string> value_tensors = {"neck.adapter.0.weight", "neck.adapter.1.weight"};
  double value_scale = 1.0;
};

struct ExportedModel {
  container::Checkpoint ckpt;
  Scenario scenario = Scenario::kExternalPretraining;
  codec::CodecProfile profile;
  std::optional<stego::EmbedPlan> lsb_plan;
  std::optional<std::string> dict_key;
  std::optional<stego::EmbedPlan> value_plan;
  std::string y_header_key;
  codec::LatentCode z;
  codec::DecodedLatent y;

  std::vector<stego::Channel> channels() const;
};

// Encodes `img` and hides it in a copy of `carrier`. CapacityError if the
// LSB carriers are too small.
ExportedModel export_model(const container::Checkpoint& carrier, const ImagePlane& img, const ExportOptions& opts);

enum class Outcome { kOk, kNoPayload, kCorruptPayload, kDecodeFailure };
std::string_view outcome_name(Outcome o);

struct Recovery {
  Outcome outcome = Outcome::kNoPayload;
  bool crc_ok = false;  // the channel's DEXC frame verified
  std::optional<ImagePlane> image;
  std::string detail;
};

// Reconstructs the image hidden in `ckpt` through one channel, following the
// plans recorded in `exported`. Failures are reported, not thrown.
Recovery recover(const container::Checkpoint& ckpt, const ExportedModel& exported, stego::Channel channel);

struct ResilienceRow {
  double sigma = 0.0;
  stego::Channel channel = stego::Channel::kLsb;
  std::uint64_t trial = 0;
  bool extract_ok = false;  // an image was reconstructed
  bool crc_ok = false;
  std::optional<double> psnr_db;  // only with extract_ok
  std::optional<double> ms_ssim;  // only with extract_ok and sides >= 176
  Outcome outcome = Outcome::kNoPayload;
};

struct SweepOptions {
  std::vector<double> sigmas = kDefaultSigmas;
  std::uint64_t trials = 10;
  std::uint64_t seed = 0;
  std::vector<stego::Channel> channels;  // empty: every channel the export carries
  std::vector<std::string> scope;        // noise scope; empty means every tensor
  bool with_ms_ssim = true;
};

std::vector<ResilienceRow> resilience_sweep(const ExportedModel& exported, const ImagePlane& reference,
                                            const SweepOptions& opts);

struct SweepSummary {
  double sigma = 0.0;
  stego::Channel channel = stego::Channel::kLsb;
  std::uint64_t trials = 0;
  double extract_rate = 0.0;
  double crc_rate = 0.0;
  std::optional<double> mean_psnr_db;
  std::optional<double> mean_ms_ssim;
};

// One entry per (sigma, channel) in first-seen order.
std::vector<SweepSummary> summarize(const std::vector<ResilienceRow>& rows);

// Header: sigma,channel,trial,extract_ok,crc_ok,psnr_db,ms_ssim
std::string rows_csv(const std::vector<ResilienceRow>& rows);
std::string summary_csv(const std::vector<SweepSummary>& summary);

}  // namespace dectk::privacy
