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

#include <algorithm>
#include <cmath>
#include <memory>

#include "dectk/codec.hpp"

namespace dectk::codec {
namespace {

std::uint32_t padded(std::uint32_t n) { return (n + kBlock - 1) / kBlock * kBlock; }

// Centered working plane in [-0.5, 0.5], edge-replicated to 8x8 multiples.
// A constant image maps to all zeros.
std::vector<float> working_plane(const ImagePlane& img) {
  const std::uint32_t pw = padded(img.width);
  const std::uint32_t ph = padded(img.height);
  std::vector<float> out(static_cast<std::size_t>(pw) * ph, 0.0f);
  const double span = static_cast<double>(img.max_val) - img.min_val;
  if (span <= 0.0 || img.pixel_count() == 0) return out;
  const double mid = 0.5 * (static_cast<double>(img.max_val) + img.min_val);
  for (std::uint32_t y = 0; y < ph; ++y) {
    const std::uint32_t sy = std::min(y, img.height - 1);
    for (std::uint32_t x = 0; x < pw; ++x) {
      const std::uint32_t sx = std::min(x, img.width - 1);
      out[static_cast<std::size_t>(y) * pw + x] = static_cast<float>((img.at(sx, sy) - mid) / span);
    }
  }
  return out;
}

void check_image(const ImagePlane& img) {
  if (img.values.size() != img.pixel_count()) throw RangeError("image sample count does not match its size");
  for (float v : img.values) {
    if (!std::isfinite(v)) throw RangeError("non-finite pixel value");
  }
  if (!std::isfinite(img.min_val) || !std::isfinite(img.max_val) || img.max_val < img.min_val) {
    throw RangeError("invalid recorded intensity range");
  }
}

// Index of the block whose DC predicts block (bx, by): left, else above.
std::ptrdiff_t predictor_block(std::size_t bx, std::size_t by, std::size_t blocks_x) {
  if (bx > 0) return static_cast<std::ptrdiff_t>(by * blocks_x + bx - 1);
  if (by > 0) return static_cast<std::ptrdiff_t>((by - 1) * blocks_x);
  return -1;
}

struct Symbols {
  std::vector<int> classes;  // one per block
  std::vector<int> latent;   // c_latent per block; index 0 is the DC residual
  std::vector<int> levels;   // reconstructed quantization levels, same layout
};

Symbols quantize_blocks(const ImagePlane& img, const CodecProfile& p, std::size_t* clipped) {
  const std::uint32_t pw = padded(img.width);
  const std::size_t bxs = pw / kBlock;
  const std::size_t bys = padded(img.height) / kBlock;
  const std::size_t n_blocks = bxs * bys;
  const auto c = static_cast<std::size_t>(p.c_latent);
  const int bound = p.symbol_bound;
  const auto& zz = zigzag_order();
  const std::vector<float> plane = working_plane(img);
  const std::vector<double> scales = class_scales(p);

  Symbols s;
  s.classes.resize(n_blocks);
  s.latent.resize(n_blocks * c);
  s.levels.resize(n_blocks * c);
  std::size_t clip_count = 0;
  auto clip = [&](long v) {
    if (v > bound || v < -bound) ++clip_count;
    return static_cast<int>(std::clamp<long>(v, -bound, bound));
  };
  float block[kBlockArea];
  float coeffs[kBlockArea];
  for (std::size_t by = 0; by < bys; ++by) {
    for (std::size_t bx = 0; bx < bxs; ++bx) {
      const std::size_t b = by * bxs + bx;
      for (int y = 0; y < kBlock; ++y) {
        for (int x = 0; x < kBlock; ++x) {
          block[y * kBlock + x] = plane[(by * kBlock + y) * pw + bx * kBlock + x];
        }
      }
      forward_dct(block, coeffs);
      int* lev = &s.levels[b * c];
      int* sym = &s.latent[b * c];
      const std::ptrdiff_t pred_block = predictor_block(bx, by, bxs);
      const int pred = pred_block < 0 ? 0 : s.levels[static_cast<std::size_t>(pred_block) * c];
      const long dc = std::lround(coeffs[zz[0]] / p.q_step);
      sym[0] = clip(dc - pred);
      lev[0] = pred + sym[0];
      for (std::size_t k = 1; k < c; ++k) {
        lev[k] = clip(std::lround(coeffs[zz[k]] / p.q_step));
        sym[k] = lev[k];
      }
      double energy = 0.0;
      for (std::size_t k = 0; k < c; ++k) {
        const double v = static_cast<double>(sym[k]) * p.q_step;
        energy += v * v;
      }
      s.classes[b] = classify_scale(std::sqrt(energy / static_cast<double>(c)), scales);
    }
  }
  if (clipped != nullptr) *clipped = clip_count;
  return s;
}

FrequencyTable uniform_table(int classes) {
  std::vector<std::uint32_t> f(static_cast<std::size_t>(classes), kProbabilityTotal / classes);
  for (std::uint32_t i = 0; i < kProbabilityTotal % classes; ++i) ++f[i];
  return FrequencyTable(0, f);
}

std::vector<GaussianBinModel> class_models(const CodecProfile& p) {
  std::vector<GaussianBinModel> models;
  for (double s : class_scales(p)) models.emplace_back(s, p.q_step, p.symbol_bound);
  return models;
}

DecodedLatent latent_from_levels(const ImagePlane& img, const CodecProfile& p, const std::vector<int>& levels) {
  DecodedLatent y;
  y.width = img.width;
  y.height = img.height;
  y.min_val = img.min_val;
  y.max_val = img.max_val;
  y.profile = p;
  y.coefficients.resize(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) y.coefficients[i] = static_cast<float>(levels[i]) * p.q_step;
  return y;
}

}  // namespace

std::size_t block_count(std::uint32_t width, std::uint32_t height) {
  return static_cast<std::size_t>(padded(width) / kBlock) * (padded(height) / kBlock);
}

std::size_t DecodedLatent::block_count() const { return codec::block_count(width, height); }

DecodedLatent analyze(const ImagePlane& img, const CodecProfile& profile, EncodeStats* stats) {
  profile.validate();
  check_image(img);
  std::size_t clipped = 0;
  Symbols s = quantize_blocks(img, profile, &clipped);
  if (stats != nullptr) {
    stats->clipped_symbols = clipped;
    stats->scale_classes = s.classes;
  }
  return latent_from_levels(img, profile, s.levels);
}

LatentCode encode_image(const ImagePlane& img, const CodecProfile& profile, EncodeStats* stats) {
  profile.validate();
  check_image(img);
  std::size_t clipped = 0;
  const Symbols s = quantize_blocks(img, profile, &clipped);
  if (stats != nullptr) {
    stats->clipped_symbols = clipped;
    stats->scale_classes = s.classes;
  }

  LatentCode z;
  z.width = img.width;
  z.height = img.height;
  z.min_val = img.min_val;
  z.max_val = img.max_val;
  z.profile = profile;

  const FrequencyTable hyper = uniform_table(profile.c_hyper);
  RangeEncoder hyper_enc;
  for (int cls : s.classes) hyper_enc.encode(hyper, cls);
  z.hyper_bytes = hyper_enc.finish();

  const auto models = class_models(profile);
  const auto c = static_cast<std::size_t>(profile.c_latent);
  RangeEncoder latent_enc;
  for (std::size_t b = 0; b < s.classes.size(); ++b) {
    const FrequencyTable& table = models[static_cast<std::size_t>(s.classes[b])].table();
    for (std::size_t k = 0; k < c; ++k) latent_enc.encode(table, s.latent[b * c + k]);
  }
  z.latent_bytes = latent_enc.finish();
  return z;
}

DecodedLatent entropy_decode(const LatentCode& z) {
  z.profile.validate();
  const CodecProfile& p = z.profile;
  const std::size_t n_blocks = block_count(z.width, z.height);
  const std::size_t bxs = padded(z.width) / kBlock;
  const auto c = static_cast<std::size_t>(p.c_latent);

  const FrequencyTable hyper = uniform_table(p.c_hyper);
  RangeDecoder hyper_dec(z.hyper_bytes);
  std::vector<int> classes(n_blocks);
  for (auto& cls : classes) cls = hyper_dec.decode(hyper);
  hyper_dec.finish();

  const auto models = class_models(p);
  RangeDecoder latent_dec(z.latent_bytes);
  std::vector<int> levels(n_blocks * c);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    const FrequencyTable& table = models[static_cast<std::size_t>(classes[b])].table();
    int* lev = &levels[b * c];
    for (std::size_t k = 0; k < c; ++k) lev[k] = latent_dec.decode(table);
    const std::ptrdiff_t pred_block = predictor_block(b % bxs, b / bxs, bxs);
    lev[0] += pred_block < 0 ? 0 : levels[static_cast<std::size_t>(pred_block) * c];
    if (lev[0] > p.symbol_bound || lev[0] < -p.symbol_bound) {
      throw DecodeError("reconstructed DC level out of range");
    }
  }
  latent_dec.finish();

  ImagePlane shape;
  shape.width = z.width;
  shape.height = z.height;
  shape.min_val = z.min_val;
  shape.max_val = z.max_val;
  return latent_from_levels(shape, p, levels);
}

std::string stage_tensor_name(int stage) { return "synthesis.stage" + std::to_string(stage) + ".taps"; }

std::vector<container::TensorEntry> synthesis_tensors(const SynthesisWeights& w) {
  std::vector<container::TensorEntry> out;
  out.push_back({std::string(kBasisTensor), {kBlockArea, kBlockArea}, w.basis});
  for (std::size_t s = 0; s < w.smooth.size(); ++s) {
    container::TensorEntry t{stage_tensor_name(static_cast<int>(s)), {2, 3}, {}};
    t.data.insert(t.data.end(), w.smooth[s].begin(), w.smooth[s].end());
    t.data.insert(t.data.end(), w.sharpen[s].begin(), w.sharpen[s].end());
    out.push_back(std::move(t));
  }
  return out;
}

bool has_synthesis_tensors(const container::Checkpoint& ckpt) {
  for (const auto& t : ckpt.tensors) {
    if (t.name.rfind("synthesis.", 0) == 0) return true;
  }
  return false;
}

SynthesisWeights synthesis_from_checkpoint(const container::Checkpoint& ckpt, const CodecProfile& profile) {
  SynthesisWeights w;
  const auto* basis = ckpt.find_tensor(kBasisTensor);
  if (basis == nullptr || basis->data.size() != kBlockArea * kBlockArea) {
    throw ProfileError("checkpoint lacks a 64x64 synthesis basis");
  }
  w.basis = basis->data;
  for (int s = 0; s < profile.decoder_stages; ++s) {
    const auto* t = ckpt.find_tensor(stage_tensor_name(s));
    if (t == nullptr || t->data.size() != 6) throw ProfileError("checkpoint lacks " + stage_tensor_name(s));
    w.smooth.push_back({t->data[0], t->data[1], t->data[2]});
    w.sharpen.push_back({t->data[3], t->data[4], t->data[5]});
  }
  return w;
}

namespace {

void separable_pass(std::vector<float>& plane, std::uint32_t w, std::uint32_t h, const std::array<float, 3>& taps) {
  std::vector<float> tmp(plane.size());
  for (std::uint32_t y = 0; y < h; ++y) {
    const float* row = &plane[static_cast<std::size_t>(y) * w];
    for (std::uint32_t x = 0; x < w; ++x) {
      const float l = row[x == 0 ? 0 : x - 1];
      const float r = row[x + 1 == w ? x : x + 1];
      tmp[static_cast<std::size_t>(y) * w + x] = taps[0] * l + taps[1] * row[x] + taps[2] * r;
    }
  }
  for (std::uint32_t y = 0; y < h; ++y) {
    const std::uint32_t up = y == 0 ? 0 : y - 1;
    const std::uint32_t down = y + 1 == h ? y : y + 1;
    for (std::uint32_t x = 0; x < w; ++x) {
      plane[static_cast<std::size_t>(y) * w + x] = taps[0] * tmp[static_cast<std::size_t>(up) * w + x] +
                                                   taps[1] * tmp[static_cast<std::size_t>(y) * w + x] +
                                                   taps[2] * tmp[static_cast<std::size_t>(down) * w + x];
    }
  }
}

}  // namespace

ImagePlane synthesize(const DecodedLatent& y, const SynthesisWeights* weights) {
  y.profile.validate();
  const CodecProfile& p = y.profile;
  const auto c = static_cast<std::size_t>(p.c_latent);
  const std::size_t n_blocks = y.block_count();
  if (y.coefficients.size() != n_blocks * c) {
    throw ProfileError("latent holds " + std::to_string(y.coefficients.size()) + " coefficients, profile expects " +
                       std::to_string(n_blocks * c));
  }
  for (float v : y.coefficients) {
    if (!std::isfinite(v)) throw RangeError("non-finite latent coefficient");
  }
  std::unique_ptr<SynthesisWeights> owned;
  if (weights == nullptr) {
    owned = std::make_unique<SynthesisWeights>(SynthesisWeights::standard(p.decoder_stages));
    weights = owned.get();
  }
  if (weights->basis.size() != kBlockArea * kBlockArea) throw ProfileError("synthesis basis must be 64x64");
  if (weights->smooth.size() != static_cast<std::size_t>(p.decoder_stages) ||
      weights->sharpen.size() != weights->smooth.size()) {
    throw ProfileError("decoder stage count does not match the profile");
  }

  const std::uint32_t pw = padded(y.width);
  const std::uint32_t ph = padded(y.height);
  const std::size_t bxs = pw / kBlock;
  std::vector<float> plane(static_cast<std::size_t>(pw) * ph, 0.0f);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    const float* coef = &y.coefficients[b * c];
    const std::size_t ox = (b % bxs) * kBlock;
    const std::size_t oy = (b / bxs) * kBlock;
    for (int px = 0; px < kBlockArea; ++px) {
      const float* row = &weights->basis[static_cast<std::size_t>(px) * kBlockArea];
      float acc = 0.0f;
      for (std::size_t k = 0; k < c; ++k) acc += row[k] * coef[k];
      plane[(oy + px / kBlock) * pw + ox + px % kBlock] = acc;
    }
  }
  for (std::size_t s = 0; s < weights->smooth.size(); ++s) {
    separable_pass(plane, pw, ph, weights->smooth[s]);
    separable_pass(plane, pw, ph, weights->sharpen[s]);
  }

  ImagePlane out;
  out.width = y.width;
  out.height = y.height;
  out.min_val = y.min_val;
  out.max_val = y.max_val;
  out.values.resize(out.pixel_count());
  const double span = static_cast<double>(y.max_val) - y.min_val;
  const double mid = 0.5 * (static_cast<double>(y.max_val) + y.min_val);
  for (std::uint32_t row = 0; row < y.height; ++row) {
    for (std::uint32_t col = 0; col < y.width; ++col) {
      const double v = mid + static_cast<double>(plane[static_cast<std::size_t>(row) * pw + col]) * span;
      out.values[static_cast<std::size_t>(row) * y.width + col] =
          static_cast<float>(std::clamp(v, static_cast<double>(y.min_val), static_cast<double>(y.max_val)));
    }
  }
  return out;
}

}  // namespace dectk::codec
