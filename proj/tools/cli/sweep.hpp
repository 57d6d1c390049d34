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
#include <ostream>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "cli/manifest.hpp"
#include "dectk/codec.hpp"
#include "dectk/corpus.hpp"
#include "dectk/privacy.hpp"

namespace dectk::cli {

// Keys accepted in a sweep config (all optional):
//   scenario          "ep" | "it"                      default "ep"
//   profiles          list of profile names             default ["50x80-analog"]
//   q_step            overrides every profile's step
//   decoder_stages    refinement stages                 default 1
//   channels          subset of "lsb", "dict", "value"  default all three
//   sigmas            noise levels                      default [0, 0.001, 0.002, 0.003, 0.01, 0.03]
//   trials            per sigma                         default 10
//   kind, modality    phantom kind and modality         default "composite", "ct"
//   size, count       phantom side and number           default 256, 1
//   carrier_params    parameters of the carrier model   default 262144
//   carrier_structure "uniform" | "grid"                default "uniform"
//   lsb_bits          default 16
//   value_scale       default 1
//   ms_ssim           default true
//   seed              overrides --seed
struct SweepConfig {
  privacy::Scenario scenario = privacy::Scenario::kExternalPretraining;
  std::vector<codec::CodecProfile> profiles;
  std::vector<stego::Channel> channels;
  std::vector<double> sigmas;
  std::uint64_t trials = 10;
  corpus::PhantomKind kind = corpus::PhantomKind::kComposite;
  corpus::Modality modality = corpus::Modality::kCt;
  std::uint32_t size = 256;
  std::uint64_t count = 1;
  std::uint64_t carrier_params = 262144;
  corpus::WeightStructure carrier_structure = corpus::WeightStructure::kUniformMantissa;
  int lsb_bits = 16;
  double value_scale = 1.0;
  bool ms_ssim = true;
  std::uint64_t seed = 0;
};

SweepConfig sweep_config(const Config& c, std::uint64_t default_seed);

// Writes codec.csv, resilience.csv and summary.csv into `out`.
//   codec.csv:      profile,c_latent,c_hyper,q_step,image,z_bytes,y_bytes,lossless_bytes,bpp,p_ratio,psnr_db,ms_ssim,y_over_z
//   resilience.csv: profile,image,sigma,channel,trial,extract_ok,crc_ok,psnr_db,ms_ssim
//   summary.csv:    profile,sigma,channel,trials,extract_rate,crc_rate,mean_psnr_db,mean_ms_ssim
void run_sweep(const SweepConfig& cfg, OutputSet& out, std::ostream* log);

}  // namespace dectk::cli
