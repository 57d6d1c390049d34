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

#include "dectk/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dectk/error.hpp"

namespace dectk::metrics {
namespace {

struct Plane {
  std::size_t w = 0;
  std::size_t h = 0;
  std::vector<double> v;
};

void require_same_shape(const ImagePlane& a, const ImagePlane& b) {
  if (a.width != b.width || a.height != b.height || a.values.size() != b.values.size()) {
    throw ShapeError("image shapes differ: " + std::to_string(a.width) + "x" + std::to_string(a.height) + " vs " +
                     std::to_string(b.width) + "x" + std::to_string(b.height));
  }
}

double resolve_peak(const ImagePlane& ref, std::optional<double> peak) {
  const double p = peak.value_or(ref.range() > 0.0f ? static_cast<double>(ref.range()) : 1.0);
  if (!(p > 0.0) || !std::isfinite(p)) throw RangeError("peak must be positive");
  return p;
}

std::array<double, kMsSsimWindow> gaussian_taps() {
  std::array<double, kMsSsimWindow> g{};
  double sum = 0.0;
  for (int i = 0; i < kMsSsimWindow; ++i) {
    const double d = i - kMsSsimWindow / 2;
    g[i] = std::exp(-d * d / (2.0 * kMsSsimSigma * kMsSsimSigma));
    sum += g[i];
  }
  for (auto& x : g) x /= sum;
  return g;
}

// Valid-mode separable filtering.
Plane blur(const Plane& in) {
  static const auto g = gaussian_taps();
  const std::size_t ow = in.w - kMsSsimWindow + 1;
  const std::size_t oh = in.h - kMsSsimWindow + 1;
  Plane rows{ow, in.h, std::vector<double>(ow * in.h)};
  for (std::size_t y = 0; y < in.h; ++y) {
    const double* src = &in.v[y * in.w];
    for (std::size_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kMsSsimWindow; ++k) acc += g[k] * src[x + k];
      rows.v[y * ow + x] = acc;
    }
  }
  Plane out{ow, oh, std::vector<double>(ow * oh)};
  for (std::size_t y = 0; y < oh; ++y) {
    for (std::size_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kMsSsimWindow; ++k) acc += g[k] * rows.v[(y + k) * ow + x];
      out.v[y * ow + x] = acc;
    }
  }
  return out;
}

Plane product(const Plane& a, const Plane& b) {
  Plane p{a.w, a.h, std::vector<double>(a.v.size())};
  for (std::size_t i = 0; i < a.v.size(); ++i) p.v[i] = a.v[i] * b.v[i];
  return p;
}

Plane downsample(const Plane& in) {
  Plane out{in.w / 2, in.h / 2, {}};
  out.v.resize(out.w * out.h);
  for (std::size_t y = 0; y < out.h; ++y) {
    for (std::size_t x = 0; x < out.w; ++x) {
      const std::size_t i = 2 * y * in.w + 2 * x;
      out.v[y * out.w + x] = 0.25 * (in.v[i] + in.v[i + 1] + in.v[i + in.w] + in.v[i + in.w + 1]);
    }
  }
  return out;
}

// Mean SSIM and mean contrast-structure term at one scale.
std::pair<double, double> ssim_terms(const Plane& a, const Plane& b, double c1, double c2) {
  const Plane mu_a = blur(a);
  const Plane mu_b = blur(b);
  const Plane aa = blur(product(a, a));
  const Plane bb = blur(product(b, b));
  const Plane ab = blur(product(a, b));
  double ssim = 0.0;
  double cs = 0.0;
  for (std::size_t i = 0; i < mu_a.v.size(); ++i) {
    const double ma = mu_a.v[i];
    const double mb = mu_b.v[i];
    const double va = aa.v[i] - ma * ma;
    const double vb = bb.v[i] - mb * mb;
    const double cov = ab.v[i] - ma * mb;
    const double cs_i = (2.0 * cov + c2) / (va + vb + c2);
    cs += cs_i;
    ssim += (2.0 * ma * mb + c1) / (ma * ma + mb * mb + c1) * cs_i;
  }
  const auto n = static_cast<double>(mu_a.v.size());
  return {ssim / n, cs / n};
}

}  // namespace

double psnr(const ImagePlane& a, const ImagePlane& b, std::optional<double> peak) {
  require_same_shape(a, b);
  const double p = resolve_peak(a, peak);
  double mse = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = static_cast<double>(a.values[i]) - b.values[i];
    mse += d * d;
  }
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  mse /= static_cast<double>(a.values.size());
  return 10.0 * std::log10(p * p / mse);
}

double ms_ssim(const ImagePlane& a, const ImagePlane& b, std::optional<double> peak) {
  require_same_shape(a, b);
  if (std::min(a.width, a.height) < kMsSsimMinSize) {
    throw ShapeError("MS-SSIM needs both sides >= 176, got " + std::to_string(a.width) + "x" +
                     std::to_string(a.height));
  }
  const double p = resolve_peak(a, peak);
  const double offset = a.min_val;
  Plane pa{a.width, a.height, std::vector<double>(a.values.size())};
  Plane pb{b.width, b.height, std::vector<double>(b.values.size())};
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    pa.v[i] = a.values[i] - offset;
    pb.v[i] = b.values[i] - offset;
  }
  const double c1 = (0.01 * p) * (0.01 * p);
  const double c2 = (0.03 * p) * (0.03 * p);
  double result = 1.0;
  for (std::size_t s = 0; s < kMsSsimWeights.size(); ++s) {
    const auto [ssim, cs] = ssim_terms(pa, pb, c1, c2);
    const bool last = s + 1 == kMsSsimWeights.size();
    result *= std::pow(std::max(last ? ssim : cs, 0.0), kMsSsimWeights[s]);
    if (!last) {
      pa = downsample(pa);
      pb = downsample(pb);
    }
  }
  return std::clamp(result, 0.0, 1.0);
}

double bpp(std::uint64_t code_bytes, std::uint32_t width, std::uint32_t height) {
  const std::uint64_t pixels = static_cast<std::uint64_t>(width) * height;
  if (pixels == 0) throw DivisionError("bpp of an image with no pixels");
  return 8.0 * static_cast<double>(code_bytes) / static_cast<double>(pixels);
}

double p_ratio(std::uint64_t lossy_bytes, std::uint64_t lossless_bytes) {
  if (lossless_bytes == 0) throw DivisionError("lossless baseline size is zero");
  return static_cast<double>(lossy_bytes) / static_cast<double>(lossless_bytes);
}

double ber(ByteView sent, ByteView got) {
  if (sent.size() != got.size()) {
    throw ShapeError("ber needs equal lengths, got " + std::to_string(sent.size()) + " and " +
                     std::to_string(got.size()));
  }
  if (sent.empty()) return 0.0;
  std::uint64_t diff = 0;
  for (std::size_t i = 0; i < sent.size(); ++i) diff += std::popcount(static_cast<unsigned>(sent[i] ^ got[i]));
  return static_cast<double>(diff) / (8.0 * static_cast<double>(sent.size()));
}

QualityReport quality_report(const ImagePlane& original, const ImagePlane& decoded, std::uint64_t code_bytes,
                             std::uint64_t lossless_bytes) {
  QualityReport r;
  r.psnr_db = psnr(original, decoded);
  r.ms_ssim = ms_ssim(original, decoded);
  r.bpp = bpp(code_bytes, original.width, original.height);
  r.p_ratio = p_ratio(code_bytes, lossless_bytes);
  return r;
}

}  // namespace dectk::metrics
