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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstring>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli/app.hpp"
#include "cli/manifest.hpp"
#include "dectk/codec.hpp"
#include "dectk/container.hpp"
#include "dectk/corpus.hpp"
#include "dectk/defender.hpp"
#include "dectk/error.hpp"
#include "dectk/metrics.hpp"
#include "dectk/privacy.hpp"
#include "dectk/range_coder.hpp"
#include "dectk/stego.hpp"
#include "../support/parseval_oracle.hpp"
#include "../support/random_checkpoint.hpp"

using namespace dectk;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = "first failure: " + what + "; " + detail;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
  Bytes b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  return b;
}

Outcome format_bijection() {
  Outcome o;
  std::mt19937_64 rng(1);
  int ok = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto c = testing::random_checkpoint(rng, 256);
    const Bytes once = container::serialize(c);
    std::stringstream ss;
    container::write_checkpoint(c, ss);
    const auto back = container::read_checkpoint(ss);
    ok += back == c && container::serialize(back) == once && ss.str() == std::string(once.begin(), once.end());
  }
  o.require(ok == 1000, "round trip");

  // Half the fuzz inputs are mutations of a valid file so the parser gets past
  // the header.
  const Bytes valid = container::serialize(corpus::gen_clean_checkpoint(300, corpus::WeightStructure::kGridRounded, 3));
  int parsed = 0;
  int rejected = 0;
  int other = 0;
  for (int i = 0; i < 100000; ++i) {
    Bytes in;
    if (i % 2 == 0) {
      in = random_bytes(rng, rng() % 300);
      if (in.size() >= 4 && i % 4 == 0) std::copy_n("MTC1", 4, in.begin());
    } else {
      in = valid;
      const int flips = 1 + static_cast<int>(rng() % 8);
      for (int f = 0; f < flips; ++f) in[rng() % in.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
      if (rng() % 4 == 0) in.resize(rng() % in.size());
    }
    std::istringstream is(std::string(in.begin(), in.end()));
    try {
      container::read_checkpoint(is);
      ++parsed;
    } catch (const FormatError&) {
      ++rejected;
    } catch (...) {
      ++other;
    }
  }
  o.require(other == 0, "fuzz raised a non-format exception");
  o.detail += "1000/1000 round trips byte-identical: " + std::string(ok == 1000 ? "yes" : "no") +
              "; fuzz 1e5: " + std::to_string(parsed) + " parsed, " + std::to_string(rejected) +
              " FormatError, " + std::to_string(other) + " other";
  return o;
}

Outcome range_coder() {
  Outcome o;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_excess = -1e9;
  int ok = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    // Odd trials: Gaussian bin models; even trials: arbitrary tables.
    std::vector<codec::FrequencyTable> tables;
    const int n_models = 1 + static_cast<int>(rng() % 4);
    for (int m = 0; m < n_models; ++m) {
      if (trial % 2) {
        tables.push_back(codec::GaussianBinModel(std::pow(10.0, -3.0 + 4.0 * u(rng)), 0.01 + u(rng),
                                                 1 + static_cast<int>(rng() % 300))
                             .table());
      } else {
        const std::size_t k = 2 + rng() % 40;
        std::vector<std::uint32_t> f(k, 1);
        std::uint32_t left = codec::kProbabilityTotal - static_cast<std::uint32_t>(k);
        for (std::size_t i = 0; i + 1 < k && left > 0; ++i) {
          const auto take = static_cast<std::uint32_t>(rng() % (left + 1));
          f[i] += take;
          left -= take;
        }
        f[k - 1] += left;
        std::shuffle(f.begin(), f.end(), rng);
        tables.emplace_back(-static_cast<int>(rng() % 20), f);
      }
    }
    const std::size_t n = rng() % 1500;
    std::vector<int> symbols(n);
    std::vector<const codec::FrequencyTable*> which(n);
    double bits = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& t = tables[rng() % tables.size()];
      symbols[i] = t.lookup(static_cast<std::uint32_t>(rng() % codec::kProbabilityTotal));
      which[i] = &t;
      bits -= std::log2(t.frequency(symbols[i]) / static_cast<double>(codec::kProbabilityTotal));
    }
    const Bytes out = codec::range_encode(symbols, which);
    const double excess = static_cast<double>(out.size()) - bits / 8.0;
    worst_excess = std::max(worst_excess, excess);
    ok += excess <= 16.0 && codec::range_decode(out, n, which) == symbols;
  }
  o.require(ok == 10000, "round trip or bound");

  const codec::FrequencyTable skew(0, std::vector<std::uint32_t>{64881, 655});
  std::bernoulli_distribution rare(0.01);
  std::vector<int> s(1000);
  for (auto& v : s) v = rare(rng) ? 1 : 0;
  std::vector<const codec::FrequencyTable*> which(s.size(), &skew);
  const Bytes out = codec::range_encode(s, which);
  o.require(out.size() <= 27 && codec::range_decode(out, s.size(), which) == s, "skewed source");
  o.detail += std::to_string(ok) + "/10000 exact within bound (worst excess " + fmt("%.2f", worst_excess) +
              " B over Shannon); skewed n=1000: " + std::to_string(out.size()) + " B";
  return o;
}

Outcome stego_fidelity() {
  Outcome o;
  std::mt19937_64 rng(3);
  const auto carrier = corpus::gen_clean_checkpoint(20000, corpus::WeightStructure::kUniformMantissa, 3);
  stego::EmbedPlan plan;
  for (const auto& t : carrier.tensors) plan.carrier_tensors.push_back(t.name);
  const auto cap = stego::lsb_capacity(carrier, plan);
  std::uint64_t words = 0;
  std::uint64_t high_bit_changes = 0;
  std::uint64_t over_tolerance = 0;
  std::uint64_t non_normal = 0;
  double worst = 0.0;
  int round_trips = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t len = trial == 0 ? cap : rng() % (cap + 1);
    const Bytes payload = random_bytes(rng, len);
    const auto out = stego::embed_lsb(carrier, plan, payload);
    round_trips += stego::extract_lsb(out, plan) == payload;
    for (std::size_t t = 0; t < carrier.tensors.size(); ++t) {
      const auto& a = carrier.tensors[t].data;
      const auto& b = out.tensors[t].data;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const auto wa = std::bit_cast<std::uint32_t>(a[i]);
        const auto wb = std::bit_cast<std::uint32_t>(b[i]);
        ++words;
        high_bit_changes += (wa >> 16) != (wb >> 16);
        if (!std::isnormal(a[i])) {
          ++non_normal;
          continue;
        }
        const double rel = std::fabs(static_cast<double>(b[i]) - a[i]) / std::fabs(a[i]);
        worst = std::max(worst, rel);
        over_tolerance += rel >= std::ldexp(1.0, -7);
      }
    }
  }
  o.require(round_trips == 1000, "payload round trip");
  o.require(high_bit_changes == 0, "bit outside the low 16 changed");
  o.require(over_tolerance == 0 && non_normal == 0, "relative error");
  o.detail += std::to_string(round_trips) + "/1000 payloads exact; " + std::to_string(words) +
              " words checked, high-bit changes " + std::to_string(high_bit_changes) + ", worst relative error " +
              fmt("%.3g", worst) + " (< 2^-7 = 0.0078125), non-normal carriers " + std::to_string(non_normal);
  return o;
}

Outcome capacity_law() {
  Outcome o;
  std::mt19937_64 rng(4);
  int exact = 0;
  for (int i = 0; i < 100; ++i) {
    const auto structure = i % 2 ? corpus::WeightStructure::kGridRounded : corpus::WeightStructure::kUniformMantissa;
    const auto c = corpus::gen_clean_checkpoint(1000 + rng() % 200000, structure, rng());
    stego::EmbedPlan plan;
    std::uint64_t carrier_bytes = 0;
    for (const auto& t : c.tensors) {
      if (i % 3 == 0 || rng() % 2) {
        plan.carrier_tensors.push_back(t.name);
        carrier_bytes += 4 * t.data.size();
      }
    }
    const std::uint64_t expect = carrier_bytes / 2 > 18 ? carrier_bytes / 2 - 18 : 0;
    exact += stego::lsb_capacity(c, plan) == expect;
  }
  o.require(exact == 100, "capacity");
  o.detail += std::to_string(exact) + "/100 checkpoints at carrier_bytes/2 - 18";
  return o;
}

struct CorpusStats {
  std::vector<double> y_over_z;
};

Outcome compression(CorpusStats& stats) {
  Outcome o;
  const auto ct = corpus::gen_corpus(corpus::PhantomKind::kComposite, corpus::Modality::kCt, 512, 10, 500);
  const auto mr = corpus::gen_corpus(corpus::PhantomKind::kComposite, corpus::Modality::kMr, 512, 10, 600);
  std::vector<ImagePlane> images(ct);
  images.insert(images.end(), mr.begin(), mr.end());

  const auto analog = codec::parse_profile("50x80-analog");
  const auto near = codec::parse_profile("near-lossless");
  double worst_ratio = 0.0;
  double worst_near = std::numeric_limits<double>::infinity();
  int monotone_violations = 0;
  for (const auto& img : images) {
    const auto z = codec::encode_image(img, analog);
    const auto y = codec::entropy_decode(z);
    const double ratio = metrics::p_ratio(codec::code_size(z), codec::lossless_baseline(img).size());
    worst_ratio = std::max(worst_ratio, ratio);
    stats.y_over_z.push_back(static_cast<double>(codec::code_size(y)) / codec::code_size(z));

    const auto zn = codec::encode_image(img, near);
    worst_near = std::min(worst_near, metrics::psnr(img, codec::synthesize(codec::entropy_decode(zn))));

    std::uint64_t prev = std::numeric_limits<std::uint64_t>::max();
    for (float q : {0.01f, 0.02f, 0.04f, 0.08f, 0.16f}) {
      const auto s = codec::code_size(codec::encode_image(img, codec::make_profile(50, 80, q)));
      monotone_violations += s > prev;
      prev = s;
    }
    prev = 0;
    for (int c : {8, 16, 24, 32, 40, 50, 64}) {
      const auto s = codec::code_size(codec::encode_image(img, codec::make_profile(c, 80, 0.04f)));
      monotone_violations += s < prev;
      prev = s;
    }
  }
  o.require(worst_ratio < 0.2, "P_ratio");
  o.require(monotone_violations == 0, "monotonicity");
  o.require(worst_near >= 80.0, "near-lossless PSNR");
  o.detail += "20 phantoms 512x512: max P_ratio " + fmt("%.4f", worst_ratio) + "; monotonicity violations " +
              std::to_string(monotone_violations) + "/240 steps; min near-lossless PSNR " +
              fmt("%.2f", worst_near) + " dB";
  return o;
}

Outcome noise_dichotomy() {
  Outcome o;
  const auto img = corpus::gen_phantom({corpus::PhantomKind::kComposite, 256, 256, 6, corpus::Modality::kCt});
  privacy::ExportOptions eo;
  eo.profile = codec::parse_profile("50x80-analog");
  eo.dict = false;
  const auto ex =
      privacy::export_model(corpus::gen_clean_checkpoint(262144, corpus::WeightStructure::kUniformMantissa, 6), img, eo);

  privacy::SweepOptions lsb;
  lsb.sigmas = {0.01};
  lsb.trials = 1000;
  lsb.seed = 60;
  lsb.channels = {stego::Channel::kLsb};
  lsb.with_ms_ssim = false;
  std::map<privacy::Outcome, int> outcomes;
  int failed = 0;
  for (const auto& r : privacy::resilience_sweep(ex, img, lsb)) {
    ++outcomes[r.outcome];
    failed += !r.extract_ok;
  }
  o.require(failed >= 999, "LSB extraction survived noise");

  privacy::SweepOptions val;
  val.sigmas = privacy::kDefaultSigmas;
  val.trials = 5;
  val.seed = 61;
  val.channels = {stego::Channel::kValue};
  val.with_ms_ssim = false;
  const auto summary = privacy::summarize(privacy::resilience_sweep(ex, img, val));
  double worst_gap = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  int non_monotone = 0;
  std::string series;
  for (const auto& s : summary) {
    if (!s.mean_psnr_db) {
      o.require(false, "VALUE extraction failed");
      continue;
    }
    non_monotone += *s.mean_psnr_db > prev;
    prev = *s.mean_psnr_db;
    series += (series.empty() ? "" : " ") + fmt("%g", s.sigma) + ":" + fmt("%.2f", *s.mean_psnr_db);
    if (s.sigma <= 0.003) {
      const double predicted = testing::value_channel_psnr_oracle(img, ex.y, s.sigma / eo.value_scale);
      worst_gap = std::max(worst_gap, std::fabs(*s.mean_psnr_db - predicted));
    }
  }
  o.require(worst_gap <= 1.0, "VALUE PSNR off the closed form");
  o.require(non_monotone == 0, "VALUE PSNR not monotone");
  o.detail += "LSB at sigma 0.01 failed " + std::to_string(failed) + "/1000 (NoPayload " +
              std::to_string(outcomes[privacy::Outcome::kNoPayload]) + ", CorruptPayload " +
              std::to_string(outcomes[privacy::Outcome::kCorruptPayload]) + ", DecodeFailure " +
              std::to_string(outcomes[privacy::Outcome::kDecodeFailure]) + "); VALUE max |PSNR - oracle| " +
              fmt("%.3f", worst_gap) + " dB for sigma <= 0.003; PSNR by sigma " + series;
  return o;
}

Outcome size_accounting(const CorpusStats& stats) {
  Outcome o;
  std::mt19937_64 rng(7);
  int additive = 0;
  for (int i = 0; i < 100; ++i) {
    const auto c = corpus::gen_clean_checkpoint(500 + rng() % 5000, corpus::WeightStructure::kGridRounded, rng());
    const std::string key = "k" + std::string(rng() % 30, 'x');
    const Bytes payload = random_bytes(rng, rng() % 5000);
    const auto out = stego::embed_dict(c, key, payload);
    additive += container::total_size(out) ==
                container::total_size(c) + payload.size() + stego::kFrameOverhead + key.size() +
                    container::kExtraOverhead;
  }
  o.require(additive == 100, "DICT additivity");

  const auto img = corpus::gen_phantom({corpus::PhantomKind::kComposite, 192, 192, 7, corpus::Modality::kMr});
  const auto carrier = corpus::gen_clean_checkpoint(60000, corpus::WeightStructure::kUniformMantissa, 7);
  privacy::ExportOptions eo;
  eo.profile = codec::parse_profile("50x80-analog");
  eo.scenario = privacy::Scenario::kInternalTraining;
  const bool it = codec::has_synthesis_tensors(privacy::export_model(carrier, img, eo).ckpt);
  eo.scenario = privacy::Scenario::kExternalPretraining;
  const bool ep = codec::has_synthesis_tensors(privacy::export_model(carrier, img, eo).ckpt);
  o.require(it && !ep, "scenario layout");

  const auto [lo, hi] = std::minmax_element(stats.y_over_z.begin(), stats.y_over_z.end());
  double mean = 0.0;
  for (double r : stats.y_over_z) mean += r / static_cast<double>(stats.y_over_z.size());
  o.require(!stats.y_over_z.empty() && *lo > 1.0, "|y|/|Z|");
  o.detail += "DICT growth exact " + std::to_string(additive) + "/100; IT synthesis tensors " +
              (it ? "present" : "absent") + ", EP " + (ep ? "present" : "absent") + "; |y|/|Z| over " +
              std::to_string(stats.y_over_z.size()) + " images min " + fmt("%.1f", stats.y_over_z.empty() ? 0 : *lo) +
              " mean " + fmt("%.1f", mean) + " max " + fmt("%.1f", stats.y_over_z.empty() ? 0 : *hi);
  return o;
}

Outcome audit() {
  Outcome o;
  const double eps = defender::kDefaultAuditEpsilon;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> mag(10.0 * eps, 100.0 * eps);
  int exact = 0;
  std::uint64_t tensors = 0;
  for (int pair = 0; pair < 100; ++pair) {
    const auto before = corpus::gen_clean_checkpoint(2000 + rng() % 20000, corpus::WeightStructure::kUniformMantissa,
                                                     rng());
    auto after = before;
    std::vector<std::string> expect;
    for (auto& t : after.tensors) {
      ++tensors;
      const auto mode = rng() % 4;
      if (mode == 0) {
        expect.push_back(t.name);  // bit-identical
      } else if (mode == 1) {
        // One-ulp nudges stay far below epsilon.
        expect.push_back(t.name);
        for (auto& v : t.data) v = std::nextafter(v, rng() % 2 ? 1.0f : -1.0f);
      } else {
        for (auto& v : t.data) v = static_cast<float>(v + (rng() % 2 ? 1 : -1) * mag(rng));
      }
    }
    const auto r = defender::finetune_audit(before, after, eps);
    std::vector<std::string> got;
    for (const auto& u : r.unchanged_tensors) got.push_back(u.name);
    std::sort(got.begin(), got.end());
    std::sort(expect.begin(), expect.end());
    exact += got == expect && r.changed_count == before.tensors.size() - expect.size() &&
             (r.verdict == defender::AuditVerdict::kAlert) == !expect.empty();
  }
  o.require(exact == 100, "audit subset");
  o.detail += std::to_string(exact) + "/100 pairs with the unchanged subset exactly identified (" +
              std::to_string(tensors) + " tensors, epsilon 1e-6, changes 1e-5 to 1e-4)";
  return o;
}

Outcome detection() {
  Outcome o;
  double aucs[2];
  const corpus::WeightStructure kinds[2] = {corpus::WeightStructure::kGridRounded,
                                            corpus::WeightStructure::kUniformMantissa};
  for (int k = 0; k < 2; ++k) {
    const auto held = defender::calibration_corpus(kinds[k], defender::kCalibrationCount, 4242);
    std::vector<double> scores;
    std::vector<bool> positive;
    for (const auto& h : held) {
      scores.push_back(defender::lsb_score(defender::lsb_stats(h.tensor, 16), defender::default_calibration()));
      positive.push_back(h.embedded);
    }
    aucs[k] = defender::auc(scores, positive);
  }
  o.require(aucs[0] >= 0.95, "grid-rounded AUC");
  o.require(std::fabs(aucs[1] - 0.5) <= 0.1, "uniform-mantissa AUC");
  o.detail += "held-out AUC grid-rounded " + fmt("%.3f", aucs[0]) + ", uniform-mantissa " + fmt("%.3f", aucs[1]);
  return o;
}

ImagePlane uniform_plane(std::uint32_t w, std::uint32_t h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 255.0f);
  std::vector<float> v(static_cast<std::size_t>(w) * h);
  for (auto& x : v) x = u(rng);
  return ImagePlane::from_values(w, h, std::move(v));
}

Outcome metric_oracles() {
  Outcome o;
  const auto a = uniform_plane(64, 64, 10);
  auto b = a;
  for (auto& v : b.values) v += 1.0f;
  const double p = metrics::psnr(a, b, 255.0);
  o.require(std::fabs(p - 48.13) <= 0.01, "PSNR(a, a+1)");

  const auto s = corpus::gen_phantom({corpus::PhantomKind::kComposite, 192, 192, 10, corpus::Modality::kMr});
  const double self = metrics::ms_ssim(s, s);
  o.require(self == 1.0, "MS-SSIM(a, a)");

  // Ordering: a faint perturbation scores above a flat image, which scores
  // above zero.
  auto faint = s;
  std::mt19937_64 rng(10);
  std::normal_distribution<double> n(0.0, 0.002 * s.range());
  for (auto& v : faint.values) v = static_cast<float>(v + n(rng));
  auto flat = s;
  std::fill(flat.values.begin(), flat.values.end(), static_cast<float>(s.min_val + s.range() / 2));
  const double m_faint = metrics::ms_ssim(s, faint);
  const double m_flat = metrics::ms_ssim(s, flat);
  o.require(m_faint < 1.0 && m_flat < m_faint && m_flat >= 0.0, "MS-SSIM ordering");

  const auto big = uniform_plane(512, 512, 11);
  auto noisy = big;
  std::normal_distribution<double> g(0.0, 2.55);
  for (auto& v : noisy.values) v = static_cast<float>(v + g(rng));
  const double mc = metrics::psnr(big, noisy, 255.0);
  o.require(std::fabs(mc - 40.0) <= 0.1, "Monte-Carlo PSNR");
  o.detail += "PSNR(a, a+1) " + fmt("%.4f", p) + " dB; MS-SSIM(a, a) " + fmt("%.17g", self) + "; ordering flat " +
              fmt("%.4f", m_flat) + " < faint " + fmt("%.6f", m_faint) + " < 1; sigma 2.55 noise " +
              fmt("%.3f", mc) + " dB (oracle 40)";
  return o;
}

Outcome manifest_replay() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("dectk_acceptance_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  const std::string config = (dir / "sweep.toml").string();
  const char* text =
      "profiles = [\"50x80-analog\", \"16x80-analog\"]\n"
      "channels = [\"lsb\", \"dict\", \"value\"]\n"
      "sigmas = [0, 0.003, 0.01]\n"
      "trials = 2\n"
      "size = 192\n"
      "count = 2\n"
      "carrier_params = 60000\n"
      "seed = 42\n";
  write_file_atomic(config, ByteView(reinterpret_cast<const std::uint8_t*>(text), std::strlen(text)));

  std::ostringstream out;
  std::ostringstream err;
  const int first = cli::run({"--out", (dir / "run").string(), "--quiet", "sweep", "--config", config}, out, err);
  o.require(first == 0, "sweep run: " + err.str());

  int reproduced = 0;
  int recorded = 0;
  if (first == 0) {
    const Bytes m = read_file((dir / "run" / "sweep.manifest.json").string());
    const auto manifest = cli::manifest_from_json(std::string(m.begin(), m.end()));
    const int again = cli::run({"--out", (dir / "replay").string(), "--quiet", "sweep", "--replay",
                                (dir / "run" / "sweep.manifest.json").string()},
                               out, err);
    o.require(again == 0, "replay status");
    for (const auto& f : manifest.outputs) {
      ++recorded;
      const auto name = fs::path(f.path).filename();
      const auto replayed = dir / "replay" / name;
      reproduced += fs::exists(replayed) && cli::sha256_hex(read_file(replayed.string())) == f.sha256;
    }
  }
  o.require(recorded > 0 && reproduced == recorded, "output hashes");
  o.detail += std::to_string(reproduced) + "/" + std::to_string(recorded) + " recorded output hashes reproduced";
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main() {
  CorpusStats corpus_stats;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"format bijection", format_bijection},
      {"range coder", range_coder},
      {"stego fidelity", stego_fidelity},
      {"capacity law", capacity_law},
      {"compression dichotomy", [&] { return compression(corpus_stats); }},
      {"noise dichotomy", noise_dichotomy},
      {"size accounting", [&] { return size_accounting(corpus_stats); }},
      {"defender audit", audit},
      {"detection calibration", detection},
      {"metric oracles", metric_oracles},
      {"manifest replay", manifest_replay},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !r.pass;
    std::printf("%s %2zu %s: %s [%.1f s]\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                r.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
