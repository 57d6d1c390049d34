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

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dectk/container.hpp"
#include "dectk/corpus.hpp"

namespace dectk::defender {

// Strictly greater than the limit is flagged. limit 0 is RangeError.
bool size_filter(const container::Checkpoint& ckpt, std::uint64_t limit_bytes);
bool size_filter(std::uint64_t size_bytes, std::uint64_t limit_bytes);

enum class Verdict { kPayload, kUnknown };
std::string_view verdict_name(Verdict v);

struct ExtrasFinding {
  std::string key;
  std::uint64_t size = 0;  // value bytes
  Verdict verdict = Verdict::kUnknown;
};

// Reports every key outside `allowed_keys`; values starting with "DEXC",
// "DECZ" or "DECY" are payloads.
std::vector<ExtrasFinding> extras_scan(const container::Checkpoint& ckpt, const std::set<std::string>& allowed_keys);

// Logistic model over the three LSB statistics and the stream length m:
//   score = 1 / (1 + exp(-(bias + w0 log(chi2/255) + w1 log1p(|monobit z|)
//                               + w2 log1p(|r| sqrt(m)) + w3 log(m))))
// The length term lets short tensors, where the statistics carry little
// evidence either way, settle near the prior instead of reading as random.
inline constexpr int kLsbFeatures = 4;
struct LsbCalibration {
  double bias = 0.0;
  std::array<double, kLsbFeatures> weights{};
  int bits = 16;
};

// The table shipped in data/lsb_calibration.txt, compiled in.
const LsbCalibration& default_calibration();
LsbCalibration parse_calibration(std::string_view text);
std::string format_calibration(const LsbCalibration& c);

struct LsbStats {
  double chi_square = 0.0;  // byte histogram vs uniform, 255 degrees of freedom
  double monobit = 0.0;     // (ones - n/2) / sqrt(n/4) over all bits
  double serial = 0.0;      // lag-1 Pearson correlation of consecutive bytes
  std::uint64_t bytes = 0;
};

struct LsbFinding {
  std::string tensor;
  LsbStats stats;
  double score = 0.0;  // in [0, 1]
};

// Statistics of the low `bits` bits of every word, packed LSB-first as the
// embedder writes them. RangeError unless 1 <= bits <= 23.
LsbStats lsb_stats(const container::TensorEntry& t, int bits);
std::array<double, kLsbFeatures> lsb_features(const LsbStats& s);
double lsb_score(const LsbStats& s, const LsbCalibration& cal);
std::vector<LsbFinding> lsb_scan(const container::Checkpoint& ckpt, int bits,
                                 const LsbCalibration& cal = default_calibration());

// Smallest tensor the calibration covers. Shorter tensors are scored but do
// not raise the flag.
inline constexpr std::uint64_t kMinCalibratedParams = 256;

struct ScanReport {
  std::string checkpoint_id;
  std::uint64_t size_bytes = 0;
  std::optional<std::uint64_t> size_limit;
  bool size_flag = false;
  std::vector<ExtrasFinding> extras_findings;
  std::vector<LsbFinding> lsb_findings;
  double lsb_threshold = 0.5;
  std::uint64_t min_lsb_bytes = 0;

  // Flagged if the size filter fires, any extras key is reported, or any
  // tensor of at least min_lsb_bytes scores at or above the threshold.
  bool flagged() const;
};

struct ScanOptions {
  std::optional<std::uint64_t> size_limit;
  std::set<std::string> allowed_keys;
  int bits = 16;
  double lsb_threshold = 0.5;
  LsbCalibration calibration = default_calibration();
  // 0: kMinCalibratedParams parameters' worth of low bits.
  std::uint64_t min_lsb_bytes = 0;
};

ScanReport scan(const container::Checkpoint& ckpt, std::string checkpoint_id, const ScanOptions& opts);
std::string report_text(const ScanReport& r);
// Header: tensor,chi_square,monobit,serial,score
std::string lsb_csv(const std::vector<LsbFinding>& findings);

inline constexpr double kDefaultAuditEpsilon = 1e-6;

enum class AuditVerdict { kApprove, kAlert };

struct UnchangedTensor {
  std::string name;
  double max_abs_delta = 0.0;
};

struct AuditReport {
  std::vector<UnchangedTensor> unchanged_tensors;
  std::uint64_t changed_count = 0;
  AuditVerdict verdict = AuditVerdict::kApprove;
};

// A tensor is unchanged when max |after - before| < epsilon over all values.
// SchemaError unless both sides list the same names and shapes in the same
// order; RangeError for epsilon <= 0.
AuditReport finetune_audit(const container::Checkpoint& before, const container::Checkpoint& after,
                           double epsilon = kDefaultAuditEpsilon);
// Includes the manual checklist for the steps that are not mechanized.
std::string audit_text(const AuditReport& r, double epsilon);

// Calibration corpus: `count` clean and `count` embedded tensors of the given
// weight structure, sizes log-uniform in [256, 32768] parameters, each embedded
// tensor filled to capacity with random bytes.
struct LabeledTensor {
  container::TensorEntry tensor;
  bool embedded = false;
};
std::vector<LabeledTensor> calibration_corpus(corpus::WeightStructure structure, std::size_t count,
                                              std::uint64_t seed, int bits = 16);

// L2-regularized logistic regression (Newton iterations, bias unpenalized).
LsbCalibration fit_calibration(const std::vector<LabeledTensor>& data, int bits = 16, double l2 = 1e-2);

// Area under the ROC curve of scores against labels (ties count one half).
double auc(const std::vector<double>& scores, const std::vector<bool>& positive);

// The shipped table is produced by this exact call.
inline constexpr std::size_t kCalibrationCount = 200;
inline constexpr std::uint64_t kCalibrationSeed = 20240;

}  // namespace dectk::defender
