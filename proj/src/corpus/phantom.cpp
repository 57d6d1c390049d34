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
#include <bit>
#include <cctype>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "dectk/corpus.hpp"

namespace dectk::corpus {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return unit_uniform(engine_()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Box-Muller on our own uniforms keeps output identical across standard libraries.
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct Ellipse {
  float cx, cy, a, b, angle, value;
};

// Paints ellipses in order with an approximate one-pixel antialiased edge.
void paint(std::vector<float>& img, std::uint32_t w, std::uint32_t h, const Ellipse& e) {
  const float c = std::cos(e.angle);
  const float s = std::sin(e.angle);
  const float reach = std::max(e.a, e.b) + 2.0f;
  const auto x0 = static_cast<std::uint32_t>(std::clamp(e.cx - reach, 0.0f, static_cast<float>(w)));
  const auto x1 = static_cast<std::uint32_t>(std::clamp(e.cx + reach, 0.0f, static_cast<float>(w)));
  const auto y0 = static_cast<std::uint32_t>(std::clamp(e.cy - reach, 0.0f, static_cast<float>(h)));
  const auto y1 = static_cast<std::uint32_t>(std::clamp(e.cy + reach, 0.0f, static_cast<float>(h)));
  const float edge = std::min(e.a, e.b);
  for (std::uint32_t y = y0; y < y1; ++y) {
    for (std::uint32_t x = x0; x < x1; ++x) {
      const float dx = static_cast<float>(x) + 0.5f - e.cx;
      const float dy = static_cast<float>(y) + 0.5f - e.cy;
      const float u = (c * dx + s * dy) / e.a;
      const float v = (-s * dx + c * dy) / e.b;
      const float dist = (std::sqrt(u * u + v * v) - 1.0f) * edge;
      const float cover = std::clamp(0.5f - dist, 0.0f, 1.0f);
      if (cover > 0.0f) {
        float& px = img[static_cast<std::size_t>(y) * w + x];
        px = px * (1.0f - cover) + e.value * cover;
      }
    }
  }
}

std::vector<float> ellipses(const PhantomSpec& spec, Rng& rng, std::vector<float>* body_mask) {
  const std::uint32_t w = spec.width;
  const std::uint32_t h = spec.height;
  const float fw = static_cast<float>(w);
  const float fh = static_cast<float>(h);
  const bool ct = spec.modality == Modality::kCt;
  const IntensityRange range = modality_range(spec.modality);
  std::vector<float> img(static_cast<std::size_t>(w) * h, ct ? range.lo : 0.0f);

  // Body (CT) or head (MR) outline.
  const float body_a = static_cast<float>(ct ? rng.uniform(0.40, 0.46) : rng.uniform(0.30, 0.36)) * fw;
  const float body_b = static_cast<float>(ct ? rng.uniform(0.30, 0.40) : rng.uniform(0.34, 0.40)) * fh;
  const Ellipse body{fw / 2, fh / 2, body_a, body_b, 0.0f, ct ? 40.0f : 900.0f};
  paint(img, w, h, body);
  if (body_mask != nullptr) {
    body_mask->assign(img.size(), 0.0f);
    paint(*body_mask, w, h, Ellipse{body.cx, body.cy, body.a, body.b, 0.0f, 1.0f});
  }

  // Organ-like plateaus inside the outline.
  static constexpr float kCtValues[] = {60, -100, 150, 30, 700, 90, -50, 1200, 20, 250, 55};
  static constexpr float kMrValues[] = {1500, 2200, 600, 2800, 1100, 3400, 1900, 400, 2500, 1300, 3000};
  const int organs = 5 + static_cast<int>(rng.bits() % 7);
  for (int i = 0; i < organs; ++i) {
    const float r = static_cast<float>(rng.uniform(0.0, 0.6));
    const float theta = static_cast<float>(rng.uniform(0.0, 2.0 * std::numbers::pi));
    Ellipse e;
    e.cx = body.cx + r * body.a * std::cos(theta);
    e.cy = body.cy + r * body.b * std::sin(theta);
    e.a = static_cast<float>(rng.uniform(0.04, 0.18)) * fw;
    e.b = static_cast<float>(rng.uniform(0.04, 0.18)) * fh;
    e.angle = static_cast<float>(rng.uniform(0.0, std::numbers::pi));
    e.value = ct ? kCtValues[i] : kMrValues[i];
    paint(img, w, h, e);
  }
  return img;
}

// Smooth noise: a coarse Gaussian lattice, bilinearly upsampled.
std::vector<float> band_limited(std::uint32_t w, std::uint32_t h, std::uint32_t cell, Rng& rng) {
  const std::uint32_t gw = w / cell + 2;
  const std::uint32_t gh = h / cell + 2;
  std::vector<float> grid(static_cast<std::size_t>(gw) * gh);
  for (auto& g : grid) g = static_cast<float>(rng.normal());
  std::vector<float> out(static_cast<std::size_t>(w) * h);
  for (std::uint32_t y = 0; y < h; ++y) {
    const float fy = static_cast<float>(y) / cell;
    const auto iy = static_cast<std::uint32_t>(fy);
    const float ty = fy - static_cast<float>(iy);
    for (std::uint32_t x = 0; x < w; ++x) {
      const float fx = static_cast<float>(x) / cell;
      const auto ix = static_cast<std::uint32_t>(fx);
      const float tx = fx - static_cast<float>(ix);
      const float g00 = grid[iy * gw + ix];
      const float g10 = grid[iy * gw + ix + 1];
      const float g01 = grid[(iy + 1) * gw + ix];
      const float g11 = grid[(iy + 1) * gw + ix + 1];
      out[static_cast<std::size_t>(y) * w + x] =
          (g00 * (1 - tx) + g10 * tx) * (1 - ty) + (g01 * (1 - tx) + g11 * tx) * ty;
    }
  }
  return out;
}

ImagePlane finish(const PhantomSpec& spec, std::vector<float> img) {
  const IntensityRange range = modality_range(spec.modality);
  for (auto& v : img) v = std::clamp(std::round(v), range.lo, range.hi);
  return ImagePlane::from_values(spec.width, spec.height, std::move(img));
}

}  // namespace

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

std::string_view kind_name(PhantomKind k) {
  switch (k) {
    case PhantomKind::kEllipses: return "ellipses";
    case PhantomKind::kGradient: return "gradient";
    case PhantomKind::kTexture: return "texture";
    case PhantomKind::kNoise: return "noise";
    case PhantomKind::kComposite: return "composite";
  }
  return "?";
}

PhantomKind parse_kind(std::string_view name) {
  const std::string n = lower(name);
  for (auto k : {PhantomKind::kEllipses, PhantomKind::kGradient, PhantomKind::kTexture, PhantomKind::kNoise,
                 PhantomKind::kComposite}) {
    if (n == kind_name(k)) return k;
  }
  throw RangeError("unknown phantom kind '" + std::string(name) + "'");
}

std::string_view modality_name(Modality m) { return m == Modality::kCt ? "ct" : "mr"; }

Modality parse_modality(std::string_view name) {
  const std::string n = lower(name);
  if (n == "ct") return Modality::kCt;
  if (n == "mr" || n == "mri") return Modality::kMr;
  throw RangeError("unknown modality '" + std::string(name) + "'");
}

IntensityRange modality_range(Modality m) {
  return m == Modality::kCt ? IntensityRange{-1024.0f, 3071.0f} : IntensityRange{0.0f, 4095.0f};
}

ImagePlane gen_phantom(const PhantomSpec& spec) {
  if (spec.width < kMinPhantomSize || spec.height < kMinPhantomSize) {
    throw RangeError("phantom dimensions must be at least 176x176");
  }
  Rng rng(spec.seed);
  const IntensityRange range = modality_range(spec.modality);
  const std::uint32_t w = spec.width;
  const std::uint32_t h = spec.height;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  switch (spec.kind) {
    case PhantomKind::kGradient: {
      std::vector<float> img(n);
      const float step = (range.hi - range.lo) / static_cast<float>(w - 1);
      for (std::uint32_t y = 0; y < h; ++y) {
        for (std::uint32_t x = 0; x < w; ++x) img[static_cast<std::size_t>(y) * w + x] = range.lo + step * static_cast<float>(x);
      }
      return finish(spec, std::move(img));
    }
    case PhantomKind::kNoise: {
      // Uniform over the whole 16-bit sample word starting at the modality floor.
      std::vector<float> img(n);
      for (auto& v : img) v = range.lo + static_cast<float>(rng.bits() >> 48);
      return ImagePlane::from_values(w, h, std::move(img));
    }
    case PhantomKind::kTexture: {
      const std::vector<float> tex = band_limited(w, h, 8, rng);
      const float mid = 0.5f * (range.lo + range.hi);
      const float amp = 0.12f * (range.hi - range.lo);
      std::vector<float> img(n);
      for (std::size_t i = 0; i < n; ++i) img[i] = mid + amp * tex[i];
      return finish(spec, std::move(img));
    }
    case PhantomKind::kEllipses:
      return finish(spec, ellipses(spec, rng, nullptr));
    case PhantomKind::kComposite: {
      std::vector<float> body;
      std::vector<float> img = ellipses(spec, rng, &body);
      const std::vector<float> tex = band_limited(w, h, 6, rng);
      const bool ct = spec.modality == Modality::kCt;
      const float amp = ct ? 12.0f : 60.0f;
      // Acquisition noise, confined to the body so the MR background stays exactly zero.
      const float sigma = ct ? kCtNoiseSigma : kMrNoiseSigma;
      for (std::size_t i = 0; i < n; ++i) {
        img[i] += body[i] * (amp * tex[i] + sigma * static_cast<float>(rng.normal()));
      }
      return finish(spec, std::move(img));
    }
  }
  throw RangeError("unknown phantom kind");
}

std::vector<ImagePlane> gen_corpus(PhantomKind kind, Modality modality, std::uint32_t size, std::size_t count,
                                   std::uint64_t base_seed) {
  std::vector<ImagePlane> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(gen_phantom({kind, size, size, base_seed + i, modality}));
  }
  return out;
}

std::string_view structure_name(WeightStructure s) {
  return s == WeightStructure::kGridRounded ? "grid" : "uniform";
}

WeightStructure parse_structure(std::string_view name) {
  const std::string n = lower(name);
  if (n == "grid" || n == "grid_rounded") return WeightStructure::kGridRounded;
  if (n == "uniform" || n == "uniform_mantissa") return WeightStructure::kUniformMantissa;
  throw RangeError("unknown weight structure '" + std::string(name) + "'");
}

container::Checkpoint gen_clean_checkpoint(std::uint64_t param_count, WeightStructure structure, std::uint64_t seed) {
  if (param_count == 0) throw RangeError("param_count must be at least 1");
  Rng rng(seed);
  container::Checkpoint ckpt;
  std::uint64_t remaining = param_count;

  auto fill = [&](container::TensorEntry& t, double stddev) {
    for (auto& v : t.data) {
      float x = static_cast<float>(stddev * rng.normal());
      if (structure == WeightStructure::kGridRounded) {
        x = static_cast<float>(std::round(static_cast<double>(x) / kGridStep) * kGridStep);
      } else {
        const auto mantissa = static_cast<std::uint32_t>(rng.bits() & 0x7FFFFFu);
        x = std::bit_cast<float>((std::bit_cast<std::uint32_t>(x) & 0xFF800000u) | mantissa);
      }
      v = x;
    }
  };
  auto add = [&](std::string name, std::vector<std::uint32_t> shape, double stddev) {
    container::TensorEntry t{std::move(name), std::move(shape), {}};
    t.data.resize(static_cast<std::size_t>(t.element_count()));
    fill(t, stddev);
    remaining -= t.data.size();
    ckpt.tensors.push_back(std::move(t));
  };

  std::uint32_t in_ch = 1;
  for (int block = 0;; ++block) {
    const std::uint32_t out_ch = std::min<std::uint32_t>(16u << (block / 2), 512u);
    for (int conv = 0; conv < 2; ++conv) {
      const std::uint64_t weights = static_cast<std::uint64_t>(out_ch) * in_ch * 9;
      if (weights + out_ch > remaining) {
        add("head.weight", {static_cast<std::uint32_t>(remaining)}, 0.05);
        return ckpt;
      }
      const std::string prefix = "backbone.block" + std::to_string(block) + ".conv" + std::to_string(conv);
      add(prefix + ".weight", {out_ch, in_ch, 3, 3}, std::sqrt(2.0 / (in_ch * 9.0)));
      add(prefix + ".bias", {out_ch}, 0.01);
      in_ch = out_ch;
      if (remaining == 0) return ckpt;
    }
  }
}

}  // namespace dectk::corpus
