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

#include "cli/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dectk/error.hpp"
#include "dectk/metrics.hpp"

namespace dectk::cli {
namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Prefixes every data line of a CSV (header dropped).
std::string prefixed_rows(const std::string& csv, const std::string& prefix) {
  std::string out;
  std::size_t pos = csv.find('\n') + 1;
  while (pos < csv.size()) {
    const std::size_t nl = csv.find('\n', pos);
    out += prefix + csv.substr(pos, nl - pos + 1);
    pos = nl + 1;
  }
  return out;
}

}  // namespace

SweepConfig sweep_config(const Config& c, std::uint64_t default_seed) {
  c.check_keys({"scenario", "profiles", "q_step", "decoder_stages", "channels", "sigmas", "trials", "kind", "modality",
                "size", "count", "carrier_params", "carrier_structure", "lsb_bits", "value_scale", "ms_ssim", "seed"});
  SweepConfig s;
  s.scenario = privacy::parse_scenario(c.get_string("scenario", "ep"));
  std::optional<float> q;
  if (c.has("q_step")) q = static_cast<float>(c.get_number("q_step", 0.0));
  const int stages = static_cast<int>(c.get_uint("decoder_stages", 1));
  for (const auto& name : c.get_strings("profiles", {"50x80-analog"})) {
    s.profiles.push_back(codec::parse_profile(name, q, stages));
  }
  for (const auto& ch : c.get_strings("channels", {"lsb", "dict", "value"})) s.channels.push_back(stego::parse_channel(ch));
  s.sigmas = c.get_numbers("sigmas", privacy::kDefaultSigmas);
  for (double sigma : s.sigmas) {
    if (!(sigma >= 0.0)) throw RangeError("sweep sigmas must be >= 0");
  }
  s.trials = c.get_uint("trials", 10);
  s.kind = corpus::parse_kind(c.get_string("kind", "composite"));
  s.modality = corpus::parse_modality(c.get_string("modality", "ct"));
  const std::uint64_t size = c.get_uint("size", 256);
  if (size > 65535) throw RangeError("sweep size too large");
  s.size = static_cast<std::uint32_t>(size);
  s.count = c.get_uint("count", 1);
  s.carrier_params = c.get_uint("carrier_params", 262144);
  s.carrier_structure = corpus::parse_structure(c.get_string("carrier_structure", "uniform"));
  s.lsb_bits = static_cast<int>(c.get_uint("lsb_bits", 16));
  s.value_scale = c.get_number("value_scale", 1.0);
  s.ms_ssim = c.get_bool("ms_ssim", true);
  s.seed = c.get_uint("seed", default_seed);
  return s;
}

void run_sweep(const SweepConfig& cfg, OutputSet& out, std::ostream* log) {
  std::string codec_csv =
      "profile,c_latent,c_hyper,q_step,image,z_bytes,y_bytes,lossless_bytes,bpp,p_ratio,psnr_db,ms_ssim,y_over_z\n";
  std::string resilience_csv = "profile,image,sigma,channel,trial,extract_ok,crc_ok,psnr_db,ms_ssim\n";
  std::string summary_csv = "profile,sigma,channel,trials,extract_rate,crc_rate,mean_psnr_db,mean_ms_ssim\n";

  const bool lsb = std::find(cfg.channels.begin(), cfg.channels.end(), stego::Channel::kLsb) != cfg.channels.end();
  const bool dict = std::find(cfg.channels.begin(), cfg.channels.end(), stego::Channel::kDict) != cfg.channels.end();
  const bool value = std::find(cfg.channels.begin(), cfg.channels.end(), stego::Channel::kValue) != cfg.channels.end();

  for (const auto& profile : cfg.profiles) {
    const std::string name = codec::profile_name(profile);
    std::vector<privacy::ResilienceRow> all_rows;
    for (std::uint64_t i = 0; i < cfg.count; ++i) {
      const ImagePlane img = corpus::gen_phantom({cfg.kind, cfg.size, cfg.size, cfg.seed + i, cfg.modality});
      const auto carrier =
          corpus::gen_clean_checkpoint(cfg.carrier_params, cfg.carrier_structure, cfg.seed + 0x5EEDull + i);
      privacy::ExportOptions opts;
      opts.profile = profile;
      opts.scenario = cfg.scenario;
      opts.lsb = lsb;
      opts.dict = dict;
      opts.value = value;
      opts.lsb_bits = cfg.lsb_bits;
      opts.value_scale = cfg.value_scale;
      const auto exported = privacy::export_model(carrier, img, opts);

      const auto weights = codec::SynthesisWeights::standard(profile.decoder_stages);
      const ImagePlane decoded = codec::synthesize(exported.y, &weights);
      const std::uint64_t z_bytes = codec::code_size(exported.z);
      const std::uint64_t y_bytes = codec::code_size(exported.y);
      const std::uint64_t lossless = codec::lossless_baseline(img).size();
      const auto q = metrics::quality_report(img, decoded, z_bytes, lossless);
      const std::string image = "img" + std::to_string(i);
      codec_csv += name + "," + std::to_string(profile.c_latent) + "," + std::to_string(profile.c_hyper) + "," +
                   short_num(profile.q_step) + "," + image + "," + std::to_string(z_bytes) + "," +
                   std::to_string(y_bytes) + "," + std::to_string(lossless) + "," + num(q.bpp) + "," +
                   num(q.p_ratio) + "," + num(q.psnr_db) + "," + num(q.ms_ssim) + "," +
                   num(static_cast<double>(y_bytes) / static_cast<double>(z_bytes)) + "\n";

      privacy::SweepOptions so;
      so.sigmas = cfg.sigmas;
      so.trials = cfg.trials;
      so.seed = cfg.seed;
      so.channels = cfg.channels;
      so.with_ms_ssim = cfg.ms_ssim;
      const auto rows = privacy::resilience_sweep(exported, img, so);
      resilience_csv += prefixed_rows(privacy::rows_csv(rows), name + "," + image + ",");
      all_rows.insert(all_rows.end(), rows.begin(), rows.end());
      if (log != nullptr) {
        *log << name << " " << image << ": |Z| " << z_bytes << " B, |y| " << y_bytes << " B, PSNR "
             << num(q.psnr_db) << " dB, P_ratio " << num(q.p_ratio) << "\n";
      }
    }
    summary_csv += prefixed_rows(privacy::summary_csv(privacy::summarize(all_rows)), name + ",");
  }
  out.write("codec.csv", codec_csv);
  out.write("resilience.csv", resilience_csv);
  out.write("summary.csv", summary_csv);
}

}  // namespace dectk::cli
