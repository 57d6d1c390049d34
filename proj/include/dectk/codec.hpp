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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dectk/bytes.hpp"
#include "dectk/container.hpp"
#include "dectk/image.hpp"
#include "dectk/range_coder.hpp"

// Block-transform image codec with a scale hyperprior.
//
// encode:  normalize -> pad to 8x8 -> orthonormal DCT-II -> keep the first
//          c_latent zigzag coefficients -> quantize by q_step. The DC symbol
//          is coded as a residual against a neighbouring block. Each block's
//          RMS over its coded values picks one of c_hyper log-spaced scale
//          classes (Z_hyper, uniform model); Z_latent is range-coded under the
//          discretized Gaussian of the block's class scale.
// decode:  Z -> symbols -> y (dequantized coefficients) -> inverse DCT ->
//          optional refinement stages -> unpad -> denormalize.
namespace dectk::codec {

inline constexpr int kBlock = 8;
inline constexpr int kBlockArea = kBlock * kBlock;
inline constexpr int kDefaultSymbolBound = 1023;
inline constexpr int kMaxSymbolBound = 32767;

struct CodecProfile {
  int c_latent = 50;        // retained zigzag coefficients per block, 1..64
  int c_hyper = 80;         // number of scale classes, 1..256
  float q_step = 0.04f;     // quantization step in normalized units
  int decoder_stages = 0;   // refinement stages; only affects decoder size
  int symbol_bound = kDefaultSymbolBound;  // K: symbols are clipped to [-K, K]

  // Throws ProfileError when a field is out of range.
  void validate() const;
  friend bool operator==(const CodecProfile&, const CodecProfile&) = default;
};

// Smallest bound that avoids clipping at this step, never below 1023.
int symbol_bound_for(float q_step);

// Builds a validated profile with symbol_bound derived from q_step.
CodecProfile make_profile(int c_latent, int c_hyper, float q_step, int decoder_stages = 0);

// Names: "<latent>x<hyper>-analog" (e.g. "50x80-analog") and "near-lossless".
// The channel counts are an analogy to a learned codec's latent/hyperlatent
// channel configuration, clipped to 64 coefficients per block.
CodecProfile parse_profile(std::string_view name, std::optional<float> q_step = std::nullopt,
                           std::optional<int> decoder_stages = std::nullopt);
std::string profile_name(const CodecProfile& p);

// Abramowitz-Stegun 7.1.26 (|error| <= 1.5e-7), extended as an odd function.
double erf_as(double x);
double normal_cdf(double x);

// Raw bin masses over {-K..K} before quantization; tails folded into +-K.
std::vector<double> bin_probabilities(double scale, double q_step, int bound);

class GaussianBinModel {
 public:
  // Requires scale > 0, q_step > 0 and 1 <= bound <= 32767 (RangeError otherwise).
  GaussianBinModel(double scale, double q_step, int bound);

  double scale() const { return scale_; }
  double q_step() const { return q_step_; }
  int bound() const { return bound_; }
  const FrequencyTable& table() const { return table_; }
  std::uint32_t frequency(int symbol) const { return table_.frequency(symbol); }

 private:
  double scale_;
  double q_step_;
  int bound_;
  FrequencyTable table_;
};

// Log-spaced scale classes for a profile: class 0 is q_step / 8, the last
// is 8 (the largest coefficient magnitude in normalized units).
std::vector<double> class_scales(const CodecProfile& p);
int classify_scale(double rms, const std::vector<double>& scales);

// Coefficient order within a block.
const std::array<int, kBlockArea>& zigzag_order();

// Orthonormal 8x8 DCT-II in float32; coefficient arrays are row-major (v, u).
void forward_dct(const float* block, float* coeffs);
void inverse_dct(const float* coeffs, float* block);

struct LatentCode {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  float min_val = 0.0f;
  float max_val = 0.0f;
  CodecProfile profile;
  Bytes hyper_bytes;
  Bytes latent_bytes;

  friend bool operator==(const LatentCode&, const LatentCode&) = default;
};

struct DecodedLatent {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  float min_val = 0.0f;
  float max_val = 0.0f;
  CodecProfile profile;
  // block_count() x c_latent values, blocks in raster order, zigzag order within.
  std::vector<float> coefficients;

  std::size_t block_count() const;
  friend bool operator==(const DecodedLatent&, const DecodedLatent&) = default;
};

std::size_t block_count(std::uint32_t width, std::uint32_t height);

struct EncodeStats {
  std::size_t clipped_symbols = 0;
  std::vector<int> scale_classes;
};

LatentCode encode_image(const ImagePlane& img, const CodecProfile& profile, EncodeStats* stats = nullptr);
// The quantized coefficients the encoder commits to, dequantized; equals
// entropy_decode(encode_image(img, p)).coefficients.
DecodedLatent analyze(const ImagePlane& img, const CodecProfile& profile, EncodeStats* stats = nullptr);
DecodedLatent entropy_decode(const LatentCode& z);

// Decoder parameters. The basis maps the 64 zigzag coefficients of a block
// to its 64 pixels; each stage is a separable smoothing pass followed by a
// separable sharpening pass (three taps each).
struct SynthesisWeights {
  std::vector<float> basis;  // 64 x 64, row = pixel (row-major), column = zigzag index
  std::vector<std::array<float, 3>> smooth;
  std::vector<std::array<float, 3>> sharpen;

  static SynthesisWeights standard(int decoder_stages);
};

inline constexpr std::string_view kBasisTensor = "synthesis.idct.weight";
std::string stage_tensor_name(int stage);

// Decoder tensors as exported in the internal-training scenario.
std::vector<container::TensorEntry> synthesis_tensors(const SynthesisWeights& w);
// Reads decoder tensors back. Missing or misshapen tensors are ProfileError.
SynthesisWeights synthesis_from_checkpoint(const container::Checkpoint& ckpt, const CodecProfile& profile);
bool has_synthesis_tensors(const container::Checkpoint& ckpt);

// Throws ProfileError if y is inconsistent with its profile or the weights.
ImagePlane synthesize(const DecodedLatent& y, const SynthesisWeights* weights = nullptr);

// Serialization ("DECZ" / "DECY").
inline constexpr std::size_t kLatentHeaderSize = 50;
inline constexpr std::size_t kDecodedHeaderSize = 34;
Bytes serialize(const LatentCode& z);
Bytes serialize(const DecodedLatent& y);
LatentCode parse_latent_code(ByteView data);
DecodedLatent parse_decoded_latent(ByteView data);
// Header-only DECY record (no coefficients) and its inverse.
Bytes serialize_header(const DecodedLatent& y);
DecodedLatent parse_decoded_header(ByteView data);
std::uint64_t code_size(const LatentCode& z);
std::uint64_t code_size(const DecodedLatent& y);

// RFC 1951 raw DEFLATE of the plane as 16-bit little-endian samples: each
// value rounded to an integer and stored as its low 16 bits (two's
// complement for negative intensities).
Bytes lossless_baseline(const ImagePlane& img);
Bytes raw_samples(const ImagePlane& img);
Bytes inflate_raw(ByteView deflated);

}  // namespace dectk::codec
