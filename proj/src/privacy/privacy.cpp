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

#include "dectk/privacy.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>

#include "dectk/error.hpp"
#include "dectk/metrics.hpp"

namespace dectk::privacy {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string sigma_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string optional_number(const std::optional<double>& v) { return v ? number(*v) : std::string(); }

codec::SynthesisWeights decoder_for(const container::Checkpoint& ckpt, const ExportedModel& exported) {
  if (exported.scenario == Scenario::kInternalTraining) {
    return codec::synthesis_from_checkpoint(ckpt, exported.profile);
  }
  return codec::SynthesisWeights::standard(exported.profile.decoder_stages);
}

Recovery decode_z(const container::Checkpoint& ckpt, const ExportedModel& exported, const Bytes& payload) {
  Recovery r;
  r.crc_ok = true;
  try {
    const codec::LatentCode z = codec::parse_latent_code(payload);
    const codec::SynthesisWeights w = decoder_for(ckpt, exported);
    r.image = codec::synthesize(codec::entropy_decode(z), &w);
    r.outcome = Outcome::kOk;
  } catch (const Error& e) {
    r.outcome = Outcome::kDecodeFailure;
    r.detail = e.what();
  }
  return r;
}

}  // namespace

void validate(const NoiseSpec& spec, const container::Checkpoint& ckpt) {
  if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma)) throw RangeError("noise sigma must be finite and >= 0");
  for (const auto& name : spec.scope) {
    if (ckpt.find_tensor(name) == nullptr) throw PlanError("noise scope names unknown tensor '" + name + "'");
  }
}

container::Checkpoint add_noise(const container::Checkpoint& ckpt, const NoiseSpec& spec) {
  validate(spec, ckpt);
  container::Checkpoint out = ckpt;
  if (spec.sigma == 0.0) return out;
  const std::set<std::string> scope(spec.scope.begin(), spec.scope.end());
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, spec.sigma);
  for (auto& t : out.tensors) {
    if (!scope.empty() && scope.count(t.name) == 0) continue;
    for (auto& v : t.data) v = static_cast<float>(static_cast<double>(v) + normal(rng));
  }
  return out;
}

std::uint64_t cell_seed(std::uint64_t seed, double sigma, std::uint64_t trial) {
  return seed ^ splitmix64(std::bit_cast<std::uint64_t>(sigma) * 0x9E3779B97F4A7C15ull + trial);
}

std::string_view scenario_name(Scenario s) { return s == Scenario::kInternalTraining ? "it" : "ep"; }

Scenario parse_scenario(std::string_view name) {
  std::string n(name);
  for (auto& c : n) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (n == "ep") return Scenario::kExternalPretraining;
  if (n == "it") return Scenario::kInternalTraining;
  throw PlanError("unknown scenario '" + std::string(name) + "' (expected ep or it)");
}

std::vector<stego::Channel> ExportedModel::channels() const {
  std::vector<stego::Channel> out;
  if (lsb_plan) out.push_back(stego::Channel::kLsb);
  if (dict_key) out.push_back(stego::Channel::kDict);
  if (value_plan) out.push_back(stego::Channel::kValue);
  return out;
}

ExportedModel export_model(const container::Checkpoint& carrier, const ImagePlane& img, const ExportOptions& opts) {
  opts.profile.validate();
  ExportedModel ex;
  ex.scenario = opts.scenario;
  ex.profile = opts.profile;
  ex.y_header_key = opts.y_header_key;
  ex.z = codec::encode_image(img, opts.profile);
  ex.y = codec::entropy_decode(ex.z);
  ex.ckpt = carrier;

  std::vector<std::string> carriers = opts.lsb_carriers;
  if (carriers.empty()) {
    for (const auto& t : carrier.tensors) carriers.push_back(t.name);
  }
  if (opts.scenario == Scenario::kInternalTraining) {
    for (auto& t : codec::synthesis_tensors(codec::SynthesisWeights::standard(opts.profile.decoder_stages))) {
      ex.ckpt.tensors.push_back(std::move(t));
    }
  }
  const Bytes z_bytes = codec::serialize(ex.z);
  if (opts.lsb) {
    stego::EmbedPlan plan;
    plan.channel = stego::Channel::kLsb;
    plan.bits_per_param = opts.lsb_bits;
    plan.carrier_tensors = carriers;
    ex.ckpt = stego::embed_lsb(ex.ckpt, plan, z_bytes);
    ex.lsb_plan = plan;
  }
  if (opts.dict) {
    ex.ckpt = stego::embed_dict(ex.ckpt, opts.dict_key, z_bytes);
    ex.dict_key = opts.dict_key;
  }
  if (opts.value) {
    stego::EmbedPlan plan;
    plan.channel = stego::Channel::kValue;
    plan.carrier_tensors = opts.value_tensors;
    plan.value_scale = opts.value_scale;
    ex.ckpt = stego::embed_values(ex.ckpt, plan, ex.y.coefficients);
    ex.ckpt = stego::embed_dict(ex.ckpt, opts.y_header_key, codec::serialize_header(ex.y));
    ex.value_plan = plan;
  }
  return ex;
}

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kOk: return "ok";
    case Outcome::kNoPayload: return "no_payload";
    case Outcome::kCorruptPayload: return "corrupt_payload";
    case Outcome::kDecodeFailure: return "decode_failure";
  }
  return "?";
}

Recovery recover(const container::Checkpoint& ckpt, const ExportedModel& exported, stego::Channel channel) {
  Recovery r;
  try {
    switch (channel) {
      case stego::Channel::kLsb:
        if (!exported.lsb_plan) throw NoPayloadError("export carries no LSB payload");
        return decode_z(ckpt, exported, stego::extract_lsb(ckpt, *exported.lsb_plan));
      case stego::Channel::kDict:
        if (!exported.dict_key) throw NoPayloadError("export carries no dictionary payload");
        return decode_z(ckpt, exported, stego::extract_dict(ckpt, *exported.dict_key));
      case stego::Channel::kValue: {
        if (!exported.value_plan) throw NoPayloadError("export carries no value payload");
        codec::DecodedLatent y = codec::parse_decoded_header(stego::extract_dict(ckpt, exported.y_header_key));
        r.crc_ok = true;
        try {
          y.coefficients = stego::extract_values(ckpt, *exported.value_plan);
          const codec::SynthesisWeights w = decoder_for(ckpt, exported);
          r.image = codec::synthesize(y, &w);
          r.outcome = Outcome::kOk;
        } catch (const Error& e) {
          r.outcome = Outcome::kDecodeFailure;
          r.detail = e.what();
        }
        return r;
      }
    }
  } catch (const NoPayloadError& e) {
    r.outcome = Outcome::kNoPayload;
    r.detail = e.what();
  } catch (const CorruptPayloadError& e) {
    r.outcome = Outcome::kCorruptPayload;
    r.detail = e.what();
  } catch (const Error& e) {
    r.outcome = Outcome::kDecodeFailure;
    r.detail = e.what();
  }
  return r;
}

std::vector<ResilienceRow> resilience_sweep(const ExportedModel& exported, const ImagePlane& reference,
                                            const SweepOptions& opts) {
  const std::vector<stego::Channel> channels = opts.channels.empty() ? exported.channels() : opts.channels;
  const bool ms_ok =
      opts.with_ms_ssim && std::min(reference.width, reference.height) >= metrics::kMsSsimMinSize;
  std::vector<ResilienceRow> rows;
  for (double sigma : opts.sigmas) {
    for (std::uint64_t trial = 0; trial < opts.trials; ++trial) {
      const container::Checkpoint noisy =
          add_noise(exported.ckpt, NoiseSpec{sigma, cell_seed(opts.seed, sigma, trial), opts.scope});
      for (stego::Channel ch : channels) {
        const Recovery rec = recover(noisy, exported, ch);
        ResilienceRow row;
        row.sigma = sigma;
        row.channel = ch;
        row.trial = trial;
        row.outcome = rec.outcome;
        row.crc_ok = rec.crc_ok;
        row.extract_ok = rec.image.has_value();
        if (rec.image) {
          row.psnr_db = metrics::psnr(reference, *rec.image);
          if (ms_ok) row.ms_ssim = metrics::ms_ssim(reference, *rec.image);
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<SweepSummary> summarize(const std::vector<ResilienceRow>& rows) {
  struct Acc {
    SweepSummary s;
    std::uint64_t extracted = 0;
    std::uint64_t crc = 0;
    double psnr = 0.0;
    std::uint64_t psnr_n = 0;
    double ms = 0.0;
    std::uint64_t ms_n = 0;
  };
  std::vector<Acc> acc;
  std::map<std::pair<std::uint64_t, int>, std::size_t> index;
  for (const auto& r : rows) {
    const auto key = std::make_pair(std::bit_cast<std::uint64_t>(r.sigma), static_cast<int>(r.channel));
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, acc.size()).first;
      Acc a;
      a.s.sigma = r.sigma;
      a.s.channel = r.channel;
      acc.push_back(a);
    }
    Acc& a = acc[it->second];
    ++a.s.trials;
    a.extracted += r.extract_ok;
    a.crc += r.crc_ok;
    if (r.psnr_db) {
      a.psnr += *r.psnr_db;
      ++a.psnr_n;
    }
    if (r.ms_ssim) {
      a.ms += *r.ms_ssim;
      ++a.ms_n;
    }
  }
  std::vector<SweepSummary> out;
  for (auto& a : acc) {
    const auto n = static_cast<double>(a.s.trials);
    a.s.extract_rate = static_cast<double>(a.extracted) / n;
    a.s.crc_rate = static_cast<double>(a.crc) / n;
    if (a.psnr_n > 0) a.s.mean_psnr_db = a.psnr / static_cast<double>(a.psnr_n);
    if (a.ms_n > 0) a.s.mean_ms_ssim = a.ms / static_cast<double>(a.ms_n);
    out.push_back(a.s);
  }
  return out;
}

std::string rows_csv(const std::vector<ResilienceRow>& rows) {
  std::string out = "sigma,channel,trial,extract_ok,crc_ok,psnr_db,ms_ssim\n";
  for (const auto& r : rows) {
    out += sigma_text(r.sigma) + "," + std::string(stego::channel_name(r.channel)) + "," + std::to_string(r.trial) +
           "," + (r.extract_ok ? "1" : "0") + "," + (r.crc_ok ? "1" : "0") + "," + optional_number(r.psnr_db) + "," +
           optional_number(r.ms_ssim) + "\n";
  }
  return out;
}

std::string summary_csv(const std::vector<SweepSummary>& summary) {
  std::string out = "sigma,channel,trials,extract_rate,crc_rate,mean_psnr_db,mean_ms_ssim\n";
  for (const auto& s : summary) {
    out += sigma_text(s.sigma) + "," + std::string(stego::channel_name(s.channel)) + "," +
           std::to_string(s.trials) + "," + number(s.extract_rate) + "," + number(s.crc_rate) + "," +
           optional_number(s.mean_psnr_db) + "," + optional_number(s.mean_ms_ssim) + "\n";
  }
  return out;
}

}  // namespace dectk::privacy
