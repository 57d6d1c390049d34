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

#include "cli/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <sstream>

#include "cli/config.hpp"
#include "cli/manifest.hpp"
#include "cli/report.hpp"
#include "cli/sweep.hpp"
#include "dectk/codec.hpp"
#include "dectk/container.hpp"
#include "dectk/corpus.hpp"
#include "dectk/defender.hpp"
#include "dectk/error.hpp"
#include "dectk/metrics.hpp"
#include "dectk/privacy.hpp"
#include "dectk/stego.hpp"

namespace dectk::cli {
namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string out = ".";
  bool quiet = false;
};

struct Run {
  Globals g;
  std::ostream& out;
  Manifest manifest;
  OutputSet files;

  void info(const std::string& line) const {
    if (!g.quiet) out << line << "\n";
  }
  Bytes input(const std::string& path) { return read_input(path, manifest.inputs); }
  container::Checkpoint checkpoint(const std::string& path) { return container::parse(input(path)); }
};

using Handler = std::function<int(Run&)>;

std::string fixed(double v, int digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string magic_of(ByteView data) {
  return data.size() >= 4 ? std::string(reinterpret_cast<const char*>(data.data()), 4) : std::string();
}

// Decoded latent from either a DECZ code or a DECY latent file.
codec::DecodedLatent latent_from(ByteView data) {
  const std::string magic = magic_of(data);
  if (magic == "DECZ") return codec::entropy_decode(codec::parse_latent_code(data));
  if (magic == "DECY") return codec::parse_decoded_latent(data);
  throw FormatError("expected a DECZ code or a DECY latent file");
}

bool is_synthesis(const std::string& name) { return name.rfind("synthesis.", 0) == 0; }

std::vector<std::string> default_carriers(const container::Checkpoint& ckpt) {
  std::vector<std::string> out;
  for (const auto& t : ckpt.tensors) {
    if (!is_synthesis(t.name)) out.push_back(t.name);
  }
  return out;
}

// Rounds to integer samples in [0, 65535] for PGM output.
ImagePlane to_samples(const ImagePlane& img) {
  std::vector<float> v(img.values.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::clamp(std::nearbyint(img.values[i]), 0.0f, 65535.0f);
  return ImagePlane::from_values(img.width, img.height, std::move(v));
}

const std::vector<std::string> kChannels = {"lsb", "dict", "value", "LSB", "DICT", "VALUE"};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"dectk: data exfiltration by compression toolkit (attack, defense and experiments)", "dectk"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_flag("--quiet", g.quiet, "Suppress informational output");

  struct Opts {
    std::string kind = "composite", modality = "ct", prefix = "phantom";
    std::uint32_t size = 512;
    std::uint64_t count = 20;
    std::uint64_t params = 0;
    std::string structure = "uniform", model_output = "model.mtc";
    std::string in, profile = "50x80-analog", output, y_output, ckpt_path, reference, payload;
    std::optional<float> q;
    std::optional<int> stages;
    double sigma = 0.0;
    std::vector<std::string> scope;
    std::string config, replay;
    std::string csv, calibration;
    std::optional<std::uint64_t> size_limit;
    std::vector<std::string> allow;
    int bits = 16;
    double threshold = 0.5;
    std::uint64_t min_lsb_bytes = 0;
    std::string before, after;
    double epsilon = defender::kDefaultAuditEpsilon;
    std::uint64_t limit = 0;
    std::vector<std::string> csvs;
  };
  Opts o;

  std::map<CLI::App*, Handler> handlers;

  // gen-corpus
  {
    auto* c = app.add_subcommand("gen-corpus", "Write synthetic phantoms as PGM files");
    c->add_option("--kind", o.kind, "ellipses, gradient, texture, noise or composite")
        ->check(CLI::IsMember({"ellipses", "gradient", "texture", "noise", "composite"}))
        ->capture_default_str();
    c->add_option("--modality", o.modality, "ct or mr")->check(CLI::IsMember({"ct", "mr"}))->capture_default_str();
    c->add_option("--size", o.size, "Side length in pixels (>= 176)")->capture_default_str();
    c->add_option("--count", o.count, "Number of phantoms")->capture_default_str();
    c->add_option("--prefix", o.prefix, "File name prefix")->capture_default_str();
    handlers[c] = [&o](Run& r) {
      const auto k = corpus::parse_kind(o.kind);
      const auto m = corpus::parse_modality(o.modality);
      for (std::uint64_t i = 0; i < o.count; ++i) {
        ImagePlane img = corpus::gen_phantom({k, o.size, o.size, r.g.seed + i, m});
        if (m == corpus::Modality::kCt) {
          for (auto& v : img.values) v += corpus::kCtStoredOffset;
          img = ImagePlane::from_values(img.width, img.height, std::move(img.values));
        }
        char name[64];
        std::snprintf(name, sizeof name, "_%03llu.pgm", static_cast<unsigned long long>(i));
        r.files.write(o.prefix + name, corpus::write_pgm(img, img.max_val <= 4095.0f ? 4095 : 65535));
      }
      r.info("wrote " + std::to_string(o.count) + " phantoms to " + r.files.dir().string());
      return kExitOk;
    };
  }

  // gen-ckpt
  {
    auto* c = app.add_subcommand("gen-ckpt", "Write a clean carrier checkpoint");
    c->add_option("--params", o.params, "Parameter count")->required();
    c->add_option("--structure", o.structure, "uniform (random mantissas) or grid (1e-3 grid)")
        ->check(CLI::IsMember({"uniform", "grid"}))
        ->capture_default_str();
    c->add_option("--output", o.model_output, "Checkpoint file")->capture_default_str();
    handlers[c] = [&o](Run& r) {
      const auto ckpt = corpus::gen_clean_checkpoint(o.params, corpus::parse_structure(o.structure), r.g.seed);
      r.files.write(o.model_output, container::serialize(ckpt));
      r.info("wrote " + o.model_output + ": " + std::to_string(container::total_size(ckpt)) + " bytes");
      return kExitOk;
    };
  }

  // encode
  {
    auto* c = app.add_subcommand("encode", "Compress a PGM image to a DECZ code");
    c->add_option("--in", o.in, "Input PGM")->required();
    c->add_option("--profile", o.profile,
                  "Profile: <latent>x<hyper>-analog (retained DCT coefficients per block x scale classes, "
                  "named after a learned codec's channel configuration) or near-lossless")
        ->capture_default_str();
    c->add_option("--q-step", o.q, "Quantization step override");
    c->add_option("--stages", o.stages, "Decoder refinement stages");
    c->add_option("--output", o.output, "Output DECZ file")->required();
    c->add_option("--y-output", o.y_output, "Also write the decoded latent y (DECY)");
    handlers[c] = [&o](Run& r) {
      const ImagePlane img = corpus::read_pgm(r.input(o.in));
      const auto p = codec::parse_profile(o.profile, o.q, o.stages);
      const auto z = codec::encode_image(img, p);
      r.files.write(o.output, codec::serialize(z));
      const auto y = codec::entropy_decode(z);
      if (!o.y_output.empty()) r.files.write(o.y_output, codec::serialize(y));
      const std::uint64_t z_bytes = codec::code_size(z);
      const std::uint64_t lossless = codec::lossless_baseline(img).size();
      r.info("profile " + codec::profile_name(p) + ": |Z| " + std::to_string(z_bytes) + " bytes, bpp " +
             fixed(metrics::bpp(z_bytes, img.width, img.height), 4) + ", P_ratio " +
             fixed(metrics::p_ratio(z_bytes, lossless), 4) + ", |y|/|Z| " +
             fixed(static_cast<double>(codec::code_size(y)) / static_cast<double>(z_bytes), 2));
      return kExitOk;
    };
  }

  // decode
  {
    auto* c = app.add_subcommand("decode", "Reconstruct a PGM image from a DECZ code or DECY latent");
    c->add_option("--in", o.in, "DECZ or DECY file")->required();
    c->add_option("--ckpt", o.ckpt_path, "Checkpoint carrying synthesis tensors (internal-training exports)");
    c->add_option("--output", o.output, "Output PGM")->required();
    c->add_option("--reference", o.reference, "Original PGM to score against");
    handlers[c] = [&o](Run& r) {
      const auto y = latent_from(r.input(o.in));
      codec::SynthesisWeights w = codec::SynthesisWeights::standard(y.profile.decoder_stages);
      if (!o.ckpt_path.empty()) {
        const auto ckpt = r.checkpoint(o.ckpt_path);
        if (codec::has_synthesis_tensors(ckpt)) w = codec::synthesis_from_checkpoint(ckpt, y.profile);
      }
      const ImagePlane decoded = to_samples(codec::synthesize(y, &w));
      r.files.write(o.output, corpus::write_pgm(decoded));
      if (!o.reference.empty()) {
        const ImagePlane ref = corpus::read_pgm(r.input(o.reference));
        std::string line = "PSNR " + fixed(metrics::psnr(ref, decoded), 2) + " dB";
        if (std::min(ref.width, ref.height) >= metrics::kMsSsimMinSize) {
          line += ", MS-SSIM " + fixed(metrics::ms_ssim(ref, decoded), 4);
        }
        r.info(line);
      }
      return kExitOk;
    };
  }

  // lossless
  {
    auto* c = app.add_subcommand("lossless", "DEFLATE baseline of a PGM image");
    c->add_option("--in", o.in, "Input PGM")->required();
    c->add_option("--output", o.output, "Output raw-deflate file")->required();
    handlers[c] = [&o](Run& r) {
      const ImagePlane img = corpus::read_pgm(r.input(o.in));
      const Bytes d = codec::lossless_baseline(img);
      r.files.write(o.output, d);
      r.info("lossless: " + std::to_string(d.size()) + " bytes (" + fixed(metrics::bpp(d.size(), img.width, img.height), 4) +
             " bpp)");
      return kExitOk;
    };
  }

  // embed / extract share their channel options.
  struct ChannelArgs {
    std::string ckpt, channel, key, output, scenario = "ep";
    int bits = stego::kDefaultLsbBits;
    std::vector<std::string> tensors;
    double value_scale = 1.0;
  };
  ChannelArgs ch;
  auto add_channel_options = [&ch](CLI::App* c) {
    c->add_option("--ckpt", ch.ckpt, "Checkpoint")->required();
    c->add_option("--channel", ch.channel, "lsb, dict or value")->check(CLI::IsMember(kChannels))->required();
    c->add_option("--bits", ch.bits, "LSB bits per parameter")->capture_default_str();
    c->add_option("--tensors", ch.tensors,
                  "LSB carriers (default: every non-synthesis tensor) or VALUE tensor names")
        ->delimiter(',');
    c->add_option("--key", ch.key, "Extras key (default z.payload; y.header for the value channel)");
    c->add_option("--value-scale", ch.value_scale, "Scale applied to values")->capture_default_str();
    c->add_option("--output", ch.output, "Output file")->required();
  };
  auto plan_for = [&ch](stego::Channel channel, const container::Checkpoint& ckpt) {
    stego::EmbedPlan plan;
    plan.channel = channel;
    plan.bits_per_param = ch.bits;
    plan.value_scale = ch.value_scale;
    plan.carrier_tensors = ch.tensors;
    if (plan.carrier_tensors.empty()) {
      plan.carrier_tensors = channel == stego::Channel::kValue ? privacy::ExportOptions{}.value_tensors
                                                                : default_carriers(ckpt);
    }
    return plan;
  };
  auto key_for = [&ch](stego::Channel channel) {
    if (!ch.key.empty()) return ch.key;
    return std::string(channel == stego::Channel::kValue ? "y.header" : "z.payload");
  };

  {
    auto* c = app.add_subcommand("embed", "Hide a payload in a checkpoint");
    add_channel_options(c);
    c->add_option("--payload", o.payload, "Payload file (DECY latent for the value channel)")->required();
    c->add_option("--scenario", ch.scenario, "ep (codes only) or it (also export the decoder tensors)")
        ->check(CLI::IsMember({"ep", "it", "EP", "IT"}))
        ->capture_default_str();
    handlers[c] = [&o, &ch, plan_for, key_for](Run& r) {
      container::Checkpoint ckpt = r.checkpoint(ch.ckpt);
      const Bytes data = r.input(o.payload);
      const auto channel = stego::parse_channel(ch.channel);
      stego::EmbedPlan plan = plan_for(channel, ckpt);
      if (privacy::parse_scenario(ch.scenario) == privacy::Scenario::kInternalTraining &&
          !codec::has_synthesis_tensors(ckpt)) {
        const auto y = latent_from(data);
        for (auto& t : codec::synthesis_tensors(codec::SynthesisWeights::standard(y.profile.decoder_stages))) {
          ckpt.tensors.push_back(std::move(t));
        }
      }
      switch (channel) {
        case stego::Channel::kLsb:
          ckpt = stego::embed_lsb(ckpt, plan, data);
          break;
        case stego::Channel::kDict:
          ckpt = stego::embed_dict(ckpt, key_for(channel), data);
          break;
        case stego::Channel::kValue: {
          const auto y = codec::parse_decoded_latent(data);
          ckpt = stego::embed_values(ckpt, plan, y.coefficients);
          ckpt = stego::embed_dict(ckpt, key_for(channel), codec::serialize_header(y));
          break;
        }
      }
      const Bytes bytes = container::serialize(ckpt);
      r.files.write(ch.output, bytes);
      r.info("embedded " + std::to_string(data.size()) + " bytes via " + std::string(stego::channel_name(channel)) +
             "; checkpoint is " + std::to_string(bytes.size()) + " bytes");
      return kExitOk;
    };
  }

  {
    auto* c = app.add_subcommand("extract", "Recover a hidden payload from a checkpoint");
    add_channel_options(c);
    handlers[c] = [&o, &ch, plan_for, key_for](Run& r) {
      const container::Checkpoint ckpt = r.checkpoint(ch.ckpt);
      const auto channel = stego::parse_channel(ch.channel);
      const stego::EmbedPlan plan = plan_for(channel, ckpt);
      Bytes data;
      switch (channel) {
        case stego::Channel::kLsb:
          data = stego::extract_lsb(ckpt, plan);
          break;
        case stego::Channel::kDict:
          data = stego::extract_dict(ckpt, key_for(channel));
          break;
        case stego::Channel::kValue: {
          codec::DecodedLatent y = codec::parse_decoded_header(stego::extract_dict(ckpt, key_for(channel)));
          y.coefficients = stego::extract_values(ckpt, plan);
          data = codec::serialize(y);
          break;
        }
      }
      r.files.write(ch.output, data);
      r.info("extracted " + std::to_string(data.size()) + " bytes via " + std::string(stego::channel_name(channel)));
      return kExitOk;
    };
  }

  // noise
  {
    auto* c = app.add_subcommand("noise", "Add Gaussian noise to checkpoint parameters");
    c->add_option("--ckpt", o.ckpt_path, "Checkpoint")->required();
    c->add_option("--sigma", o.sigma, "Absolute standard deviation")->required();
    c->add_option("--scope", o.scope, "Tensors to perturb (default: all)")->delimiter(',');
    c->add_option("--output", o.output, "Output checkpoint")->required();
    handlers[c] = [&o](Run& r) {
      const auto noisy = privacy::add_noise(r.checkpoint(o.ckpt_path), privacy::NoiseSpec{o.sigma, r.g.seed, o.scope});
      r.files.write(o.output, container::serialize(noisy));
      r.info("noise sigma " + fixed(o.sigma, 6) + " applied");
      return kExitOk;
    };
  }

  // sweep
  {
    auto* c = app.add_subcommand("sweep", "Noise-resilience sweep over profiles, channels and sigmas");
    auto* cfg_opt = c->add_option("--config", o.config, "Sweep config (flat key = value file)");
    auto* rep_opt = c->add_option("--replay", o.replay, "Re-run a sweep manifest and compare output hashes");
    cfg_opt->excludes(rep_opt);
    handlers[c] = [&o](Run& r) {
      if (o.config.empty() == o.replay.empty()) throw CLI::ValidationError("sweep needs exactly one of --config or --replay");
      std::ostream* log = r.g.quiet ? nullptr : &r.out;
      if (!o.config.empty()) {
        const Bytes text = r.input(o.config);
        r.manifest.config.assign(text.begin(), text.end());
        const SweepConfig cfg = sweep_config(Config::parse(r.manifest.config), r.g.seed);
        r.manifest.seed = cfg.seed;
        run_sweep(cfg, r.files, log);
        return kExitOk;
      }
      const Bytes text = r.input(o.replay);
      const Manifest old = manifest_from_json(std::string(text.begin(), text.end()));
      if (old.command != "sweep") throw FormatError("manifest is not from a sweep run");
      r.manifest.config = old.config;
      const SweepConfig cfg = sweep_config(Config::parse(old.config), old.seed);
      r.manifest.seed = cfg.seed;
      run_sweep(cfg, r.files, log);
      std::size_t matched = 0;
      for (const auto& want : old.outputs) {
        const auto it = std::find_if(r.files.digests().begin(), r.files.digests().end(),
                                     [&](const FileDigest& d) { return d.path == want.path; });
        const bool ok = it != r.files.digests().end() && it->sha256 == want.sha256;
        matched += ok;
        r.out << (ok ? "match    " : "MISMATCH ") << want.path << "\n";
      }
      r.out << "replay: " << matched << "/" << old.outputs.size() << " outputs reproduced\n";
      return matched == old.outputs.size() ? kExitOk : kExitData;
    };
  }

  // scan
  {
    auto* c = app.add_subcommand("scan", "Defender scan: size, extras entries and LSB statistics");
    c->add_option("--ckpt", o.ckpt_path, "Checkpoint")->required();
    c->add_option("--size-limit", o.size_limit, "Flag checkpoints larger than this many bytes");
    c->add_option("--allow", o.allow, "Allowed extras keys")->delimiter(',');
    c->add_option("--bits", o.bits, "Low bits examined per parameter")->check(CLI::Range(1, 23))->capture_default_str();
    c->add_option("--threshold", o.threshold, "LSB suspicion threshold")->capture_default_str();
    c->add_option("--min-lsb-bytes", o.min_lsb_bytes,
                  "Shortest low-bit stream that can raise the flag (default: 256 parameters' worth)");
    c->add_option("--calibration", o.calibration, "Calibration table (default: built in)");
    c->add_option("--csv", o.csv, "Write per-tensor statistics here");
    handlers[c] = [&o](Run& r) {
      defender::ScanOptions opts;
      opts.size_limit = o.size_limit;
      opts.allowed_keys = {o.allow.begin(), o.allow.end()};
      opts.bits = o.bits;
      opts.lsb_threshold = o.threshold;
      opts.min_lsb_bytes = o.min_lsb_bytes;
      if (!o.calibration.empty()) {
        const Bytes text = r.input(o.calibration);
        opts.calibration = defender::parse_calibration(std::string(text.begin(), text.end()));
      }
      const auto report = defender::scan(r.checkpoint(o.ckpt_path), o.ckpt_path, opts);
      if (!o.csv.empty()) r.files.write(o.csv, defender::lsb_csv(report.lsb_findings));
      r.out << defender::report_text(report);
      return report.flagged() ? kExitAlert : kExitOk;
    };
  }

  // audit
  {
    auto* c = app.add_subcommand("audit", "Fine-tuning audit: did every parameter tensor change?");
    c->add_option("--before", o.before, "Checkpoint before fine-tuning")->required();
    c->add_option("--after", o.after, "Checkpoint after fine-tuning")->required();
    c->add_option("--epsilon", o.epsilon, "Change threshold")->capture_default_str();
    handlers[c] = [&o](Run& r) {
      const auto report = defender::finetune_audit(r.checkpoint(o.before), r.checkpoint(o.after), o.epsilon);
      r.out << defender::audit_text(report, o.epsilon);
      return report.verdict == defender::AuditVerdict::kAlert ? kExitAlert : kExitOk;
    };
  }

  // size-check
  {
    auto* c = app.add_subcommand("size-check", "Defender size filter");
    c->add_option("--ckpt", o.ckpt_path, "Checkpoint")->required();
    c->add_option("--limit", o.limit, "Limit in bytes")->required();
    handlers[c] = [&o](Run& r) {
      const auto ckpt = r.checkpoint(o.ckpt_path);
      const bool flag = defender::size_filter(ckpt, o.limit);
      r.out << o.ckpt_path << ": " << container::total_size(ckpt) << " bytes, limit " << o.limit << ": "
            << (flag ? "FLAGGED" : "pass") << "\n";
      return flag ? kExitAlert : kExitOk;
    };
  }

  // report
  {
    auto* c = app.add_subcommand("report", "Summarize sweep CSVs as aligned tables");
    c->add_option("csvs", o.csvs, "codec.csv, summary.csv or resilience.csv files");
    c->add_option("--output", o.output, "Also write the tables here");
    handlers[c] = [&o](Run& r) {
      Report rep;
      for (const auto& path : o.csvs) {
        const Bytes text = r.input(path);
        add_csv(rep, std::string_view(reinterpret_cast<const char*>(text.data()), text.size()), path);
      }
      finish(rep);
      const std::string rendered = render(rep);
      if (!o.output.empty()) r.files.write(o.output, rendered);
      r.out << rendered;
      return kExitOk;
    };
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  Run r{g, out, Manifest{}, OutputSet(g.out)};
  r.manifest.command = chosen->get_name();
  r.manifest.args = args;
  r.manifest.seed = g.seed;
  try {
    const int status = handlers.at(chosen)(r);
    r.manifest.outputs = r.files.digests();
    write_file_atomic((std::filesystem::path(g.out) / (r.manifest.command + ".manifest.json")).string(),
                      as_bytes(to_json(r.manifest)));
    return status;
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace dectk::cli
