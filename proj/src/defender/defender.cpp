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

#include "dectk/defender.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "dectk/error.hpp"
#include "dectk/stego.hpp"

namespace dectk::defender {
namespace {

constexpr char kShippedCalibration[] = {
#include "lsb_calibration.inc"
};

constexpr std::string_view kPayloadMagics[] = {"DEXC", "DECZ", "DECY"};

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

Bytes low_bit_stream(const container::TensorEntry& t, int bits) {
  const std::uint64_t total_bits = static_cast<std::uint64_t>(t.data.size()) * static_cast<std::uint64_t>(bits);
  Bytes out(static_cast<std::size_t>(total_bits / 8), 0);
  std::uint64_t pos = 0;
  for (float v : t.data) {
    const std::uint32_t w = std::bit_cast<std::uint32_t>(v);
    for (int b = 0; b < bits; ++b, ++pos) {
      if (pos / 8 >= out.size()) return out;
      if ((w >> b) & 1u) out[static_cast<std::size_t>(pos / 8)] |= static_cast<std::uint8_t>(1u << (pos % 8));
    }
  }
  return out;
}

}  // namespace

bool size_filter(std::uint64_t size_bytes, std::uint64_t limit_bytes) {
  if (limit_bytes == 0) throw RangeError("size limit must be positive");
  return size_bytes > limit_bytes;
}

bool size_filter(const container::Checkpoint& ckpt, std::uint64_t limit_bytes) {
  return size_filter(container::total_size(ckpt), limit_bytes);
}

std::string_view verdict_name(Verdict v) { return v == Verdict::kPayload ? "payload" : "unknown"; }

std::vector<ExtrasFinding> extras_scan(const container::Checkpoint& ckpt, const std::set<std::string>& allowed_keys) {
  std::vector<ExtrasFinding> out;
  for (const auto& e : ckpt.extras) {
    if (allowed_keys.count(e.key) != 0) continue;
    ExtrasFinding f{e.key, e.value.size(), Verdict::kUnknown};
    for (std::string_view magic : kPayloadMagics) {
      if (e.value.size() >= magic.size() && std::equal(magic.begin(), magic.end(), e.value.begin())) {
        f.verdict = Verdict::kPayload;
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

const LsbCalibration& default_calibration() {
  static const LsbCalibration cal = parse_calibration(kShippedCalibration);
  return cal;
}

LsbCalibration parse_calibration(std::string_view text) {
  LsbCalibration c;
  bool seen[6] = {};
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string key;
    double value = 0.0;
    if (!(fields >> key >> value)) throw FormatError("calibration: malformed line '" + line + "'");
    if (key == "bias") {
      c.bias = value;
      seen[0] = true;
    } else if (key == "w_chi_square") {
      c.weights[0] = value;
      seen[1] = true;
    } else if (key == "w_monobit") {
      c.weights[1] = value;
      seen[2] = true;
    } else if (key == "w_serial") {
      c.weights[2] = value;
      seen[3] = true;
    } else if (key == "w_log_bytes") {
      c.weights[3] = value;
      seen[4] = true;
    } else if (key == "bits") {
      c.bits = static_cast<int>(value);
      seen[5] = true;
    } else {
      throw FormatError("calibration: unknown key '" + key + "'");
    }
  }
  for (bool s : seen) {
    if (!s) throw FormatError("calibration: missing entries");
  }
  return c;
}

std::string format_calibration(const LsbCalibration& c) {
  return "# LSB scan logistic calibration: 200 clean + 200 embedded grid-rounded tensors\n"
         "bits " + std::to_string(c.bits) + "\n"
         "bias " + exact(c.bias) + "\n"
         "w_chi_square " + exact(c.weights[0]) + "\n"
         "w_monobit " + exact(c.weights[1]) + "\n"
         "w_serial " + exact(c.weights[2]) + "\n"
         "w_log_bytes " + exact(c.weights[3]) + "\n";
}

LsbStats lsb_stats(const container::TensorEntry& t, int bits) {
  if (bits < 1 || bits > stego::kMaxLsbBits) throw RangeError("scan bits must be in [1, 23]");
  const Bytes stream = low_bit_stream(t, bits);
  LsbStats s;
  s.bytes = stream.size();
  if (stream.empty()) return s;
  std::array<std::uint64_t, 256> hist{};
  std::uint64_t ones = 0;
  for (std::uint8_t b : stream) {
    ++hist[b];
    ones += static_cast<std::uint64_t>(std::popcount(b));
  }
  const double n = static_cast<double>(stream.size());
  const double expected = n / 256.0;
  for (std::uint64_t h : hist) s.chi_square += (static_cast<double>(h) - expected) * (static_cast<double>(h) - expected) / expected;
  const double bit_count = 8.0 * n;
  s.monobit = (static_cast<double>(ones) - bit_count / 2.0) / std::sqrt(bit_count / 4.0);
  if (stream.size() > 2) {
    double mx = 0.0, my = 0.0;
    const std::size_t m = stream.size() - 1;
    for (std::size_t i = 0; i < m; ++i) {
      mx += stream[i];
      my += stream[i + 1];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double dx = stream[i] - mx;
      const double dy = stream[i + 1] - my;
      sxy += dx * dy;
      sxx += dx * dx;
      syy += dy * dy;
    }
    s.serial = (sxx > 0.0 && syy > 0.0) ? sxy / std::sqrt(sxx * syy) : 1.0;
  }
  return s;
}

std::array<double, kLsbFeatures> lsb_features(const LsbStats& s) {
  const double m = s.bytes > 1 ? static_cast<double>(s.bytes - 1) : 1.0;
  return {std::log(std::max(s.chi_square / 255.0, 1e-3)), std::log1p(std::abs(s.monobit)),
          std::log1p(std::abs(s.serial) * std::sqrt(m)), std::log(static_cast<double>(std::max<std::uint64_t>(s.bytes, 1)))};
}

double lsb_score(const LsbStats& s, const LsbCalibration& cal) {
  if (s.bytes == 0) return 0.0;
  const auto f = lsb_features(s);
  double z = cal.bias;
  for (int i = 0; i < kLsbFeatures; ++i) z += cal.weights[i] * f[i];
  return sigmoid(z);
}

std::vector<LsbFinding> lsb_scan(const container::Checkpoint& ckpt, int bits, const LsbCalibration& cal) {
  std::vector<LsbFinding> out;
  out.reserve(ckpt.tensors.size());
  for (const auto& t : ckpt.tensors) {
    LsbFinding f;
    f.tensor = t.name;
    f.stats = lsb_stats(t, bits);
    f.score = lsb_score(f.stats, cal);
    out.push_back(std::move(f));
  }
  return out;
}

bool ScanReport::flagged() const {
  if (size_flag || !extras_findings.empty()) return true;
  return std::any_of(lsb_findings.begin(), lsb_findings.end(), [&](const LsbFinding& f) {
    return f.stats.bytes >= min_lsb_bytes && f.score >= lsb_threshold;
  });
}

ScanReport scan(const container::Checkpoint& ckpt, std::string checkpoint_id, const ScanOptions& opts) {
  ScanReport r;
  r.checkpoint_id = std::move(checkpoint_id);
  r.size_bytes = container::total_size(ckpt);
  r.size_limit = opts.size_limit;
  if (opts.size_limit) r.size_flag = size_filter(r.size_bytes, *opts.size_limit);
  r.extras_findings = extras_scan(ckpt, opts.allowed_keys);
  r.lsb_findings = lsb_scan(ckpt, opts.bits, opts.calibration);
  r.lsb_threshold = opts.lsb_threshold;
  r.min_lsb_bytes = opts.min_lsb_bytes != 0 ? opts.min_lsb_bytes
                                            : kMinCalibratedParams * static_cast<std::uint64_t>(opts.bits) / 8;
  return r;
}

std::string report_text(const ScanReport& r) {
  std::string out = "checkpoint: " + r.checkpoint_id + "\n";
  out += "size_bytes: " + std::to_string(r.size_bytes) + "\n";
  if (r.size_limit) {
    out += "size_limit: " + std::to_string(*r.size_limit) + (r.size_flag ? " (EXCEEDED)\n" : " (ok)\n");
  }
  out += "extras_findings: " + std::to_string(r.extras_findings.size()) + "\n";
  for (const auto& f : r.extras_findings) {
    out += "  extra " + f.key + " size=" + std::to_string(f.size) + " verdict=" + std::string(verdict_name(f.verdict)) +
           "\n";
  }
  std::size_t suspicious = 0;
  std::size_t small = 0;
  for (const auto& f : r.lsb_findings) {
    if (f.stats.bytes < r.min_lsb_bytes) {
      ++small;
    } else {
      suspicious += f.score >= r.lsb_threshold;
    }
  }
  out += "lsb_suspicious: " + std::to_string(suspicious) + " of " + std::to_string(r.lsb_findings.size() - small) +
         " tensors (threshold " + fixed(r.lsb_threshold, 3) + ")\n";
  for (const auto& f : r.lsb_findings) {
    if (f.stats.bytes >= r.min_lsb_bytes && f.score >= r.lsb_threshold) {
      out += "  tensor " + f.tensor + " score=" + fixed(f.score, 4) + "\n";
    }
  }
  if (small != 0) {
    out += "lsb_unjudged: " + std::to_string(small) + " tensors under " + std::to_string(r.min_lsb_bytes) +
           " low-bit bytes (scores in csv only)\n";
  }
  out += std::string("verdict: ") + (r.flagged() ? "FLAGGED" : "clean") + "\n";
  return out;
}

std::string lsb_csv(const std::vector<LsbFinding>& findings) {
  std::string out = "tensor,chi_square,monobit,serial,score\n";
  for (const auto& f : findings) {
    out += f.tensor + "," + fixed(f.stats.chi_square) + "," + fixed(f.stats.monobit) + "," + fixed(f.stats.serial) +
           "," + fixed(f.score) + "\n";
  }
  return out;
}

AuditReport finetune_audit(const container::Checkpoint& before, const container::Checkpoint& after, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw RangeError("audit epsilon must be positive");
  if (before.tensors.size() != after.tensors.size()) {
    throw SchemaError("audit: tensor counts differ (" + std::to_string(before.tensors.size()) + " vs " +
                      std::to_string(after.tensors.size()) + ")");
  }
  AuditReport r;
  for (std::size_t i = 0; i < before.tensors.size(); ++i) {
    const auto& a = before.tensors[i];
    const auto& b = after.tensors[i];
    if (a.name != b.name) throw SchemaError("audit: tensor " + std::to_string(i) + " is '" + a.name + "' vs '" + b.name + "'");
    if (a.shape != b.shape || a.data.size() != b.data.size()) throw SchemaError("audit: shape of '" + a.name + "' differs");
    double max_delta = 0.0;
    for (std::size_t k = 0; k < a.data.size(); ++k) {
      const float x = a.data[k];
      const float y = b.data[k];
      double d;
      if (std::bit_cast<std::uint32_t>(x) == std::bit_cast<std::uint32_t>(y)) {
        d = 0.0;
      } else if (std::isnan(x) || std::isnan(y)) {
        d = std::numeric_limits<double>::infinity();
      } else {
        d = std::abs(static_cast<double>(y) - static_cast<double>(x));
      }
      max_delta = std::max(max_delta, d);
    }
    if (max_delta < epsilon) {
      r.unchanged_tensors.push_back({a.name, max_delta});
    } else {
      ++r.changed_count;
    }
  }
  r.verdict = r.unchanged_tensors.empty() ? AuditVerdict::kApprove : AuditVerdict::kAlert;
  return r;
}

std::string audit_text(const AuditReport& r, double epsilon) {
  char eps[32];
  std::snprintf(eps, sizeof eps, "%g", epsilon);
  std::string out = "fine-tuning audit (epsilon " + std::string(eps) + ")\n";
  out += "changed tensors: " + std::to_string(r.changed_count) + "\n";
  out += "unchanged tensors: " + std::to_string(r.unchanged_tensors.size()) + "\n";
  for (const auto& u : r.unchanged_tensors) out += "  " + u.name + " max_abs_delta=" + exact(u.max_abs_delta) + "\n";
  out += "checklist:\n";
  out += "  [manual] 1. training source collected from the data lake and reviewed\n";
  out += "  [manual] 2. fine-tuning loss curve checked for a genuine training run\n";
  out += "  [auto]   3. model refined on owner data before export\n";
  out += std::string("  [auto]   4. every parameter tensor changed after fine-tuning: ") +
         (r.verdict == AuditVerdict::kApprove ? "yes" : "NO") + "\n";
  out += std::string("verdict: ") + (r.verdict == AuditVerdict::kApprove ? "approve" : "alert") + "\n";
  return out;
}

std::vector<LabeledTensor> calibration_corpus(corpus::WeightStructure structure, std::size_t count,
                                              std::uint64_t seed, int bits) {
  std::mt19937_64 rng(seed);
  std::vector<LabeledTensor> out;
  out.reserve(2 * count);
  for (std::size_t i = 0; i < 2 * count; ++i) {
    const auto n = static_cast<std::uint64_t>(256.0 * std::exp2(7.0 * corpus::unit_uniform(rng())));
    const container::Checkpoint src = corpus::gen_clean_checkpoint(n, structure, rng());
    LabeledTensor lt;
    lt.tensor.name = "calib." + std::to_string(i);
    for (const auto& t : src.tensors) lt.tensor.data.insert(lt.tensor.data.end(), t.data.begin(), t.data.end());
    lt.tensor.shape = {static_cast<std::uint32_t>(lt.tensor.data.size())};
    lt.embedded = i % 2 == 1;
    if (lt.embedded) {
      container::Checkpoint c;
      c.tensors.push_back(std::move(lt.tensor));
      stego::EmbedPlan plan;
      plan.bits_per_param = bits;
      plan.carrier_tensors = {c.tensors[0].name};
      Bytes payload(static_cast<std::size_t>(stego::lsb_capacity(c, plan)));
      for (auto& b : payload) b = static_cast<std::uint8_t>(rng());
      c = stego::embed_lsb(c, plan, payload);
      lt.tensor = std::move(c.tensors[0]);
    }
    out.push_back(std::move(lt));
  }
  return out;
}

LsbCalibration fit_calibration(const std::vector<LabeledTensor>& data, int bits, double l2) {
  constexpr int kDim = kLsbFeatures + 1;
  std::vector<std::array<double, kDim>> x;
  std::vector<double> y;
  for (const auto& d : data) {
    const auto f = lsb_features(lsb_stats(d.tensor, bits));
    x.push_back({1.0, f[0], f[1], f[2], f[3]});
    y.push_back(d.embedded ? 1.0 : 0.0);
  }
  std::array<double, kDim> w{};
  for (int iter = 0; iter < 100; ++iter) {
    std::array<double, kDim> grad{};
    std::array<std::array<double, kDim>, kDim> hess{};
    for (std::size_t i = 0; i < x.size(); ++i) {
      double z = 0.0;
      for (int j = 0; j < kDim; ++j) z += w[j] * x[i][j];
      const double p = sigmoid(z);
      const double r = p * (1.0 - p);
      for (int j = 0; j < kDim; ++j) {
        grad[j] += (p - y[i]) * x[i][j];
        for (int k = 0; k < kDim; ++k) hess[j][k] += r * x[i][j] * x[i][k];
      }
    }
    for (int j = 1; j < kDim; ++j) {
      grad[j] += l2 * w[j];
      hess[j][j] += l2;
    }
    hess[0][0] += 1e-9;
    // Solve hess * step = grad by Gaussian elimination with partial pivoting.
    std::array<double, kDim> step = grad;
    for (int c = 0; c < kDim; ++c) {
      int piv = c;
      for (int r = c + 1; r < kDim; ++r) {
        if (std::abs(hess[r][c]) > std::abs(hess[piv][c])) piv = r;
      }
      std::swap(hess[c], hess[piv]);
      std::swap(step[c], step[piv]);
      for (int r = c + 1; r < kDim; ++r) {
        const double m = hess[r][c] / hess[c][c];
        for (int k = c; k < kDim; ++k) hess[r][k] -= m * hess[c][k];
        step[r] -= m * step[c];
      }
    }
    for (int c = kDim - 1; c >= 0; --c) {
      for (int k = c + 1; k < kDim; ++k) step[c] -= hess[c][k] * step[k];
      step[c] /= hess[c][c];
    }
    double change = 0.0;
    for (int j = 0; j < kDim; ++j) {
      w[j] -= step[j];
      change = std::max(change, std::abs(step[j]));
    }
    if (change < 1e-12) break;
  }
  LsbCalibration c;
  c.bits = bits;
  c.bias = w[0];
  c.weights = {w[1], w[2], w[3], w[4]};
  return c;
}

double auc(const std::vector<double>& scores, const std::vector<bool>& positive) {
  if (scores.size() != positive.size()) throw ShapeError("auc: scores and labels differ in length");
  double pos = 0.0;
  double neg = 0.0;
  double wins = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!positive[i]) continue;
    pos += 1.0;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (positive[j]) continue;
      wins += scores[i] > scores[j] ? 1.0 : scores[i] == scores[j] ? 0.5 : 0.0;
    }
  }
  for (bool p : positive) neg += p ? 0.0 : 1.0;
  if (pos == 0.0 || neg == 0.0) throw DivisionError("auc needs both classes");
  return wins / (pos * neg);
}

}  // namespace dectk::defender
