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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "dectk/codec.hpp"
#include "dectk/image.hpp"

namespace dectk::testing {

// Expected PSNR of synthesize(y + N(0, sigma_y^2) per coefficient) against
// `original`, with no refinement stages. Built from first principles: a
// double-precision inverse DCT gives each pixel's clean value r and its
// noise standard deviation s, and the clamp to [0, 1] is handled exactly:
//   E[(clamp(r + n, 0, 1) - x)^2] for n ~ N(0, s^2).
inline double value_channel_psnr_oracle(const ImagePlane& original, const codec::DecodedLatent& y, double sigma_y) {
  static constexpr int kZigzag[64] = {0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
                                      12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
                                      35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
                                      58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};
  const int c = y.profile.c_latent;
  // basis[p][k]: pixel p of the block, k-th zigzag coefficient.
  std::vector<std::vector<double>> basis(64, std::vector<double>(64));
  for (int p = 0; p < 64; ++p) {
    const int i = p / 8;
    const int j = p % 8;
    for (int k = 0; k < 64; ++k) {
      const int v = kZigzag[k] / 8;
      const int u = kZigzag[k] % 8;
      const double cu = u == 0 ? std::sqrt(0.125) : 0.5;
      const double cv = v == 0 ? std::sqrt(0.125) : 0.5;
      basis[p][k] = cu * cv * std::cos((2 * i + 1) * v * std::numbers::pi / 16) *
                    std::cos((2 * j + 1) * u * std::numbers::pi / 16);
    }
  }
  std::vector<double> noise_sd(64);
  for (int p = 0; p < 64; ++p) {
    double e = 0.0;
    for (int k = 0; k < c; ++k) e += basis[p][k] * basis[p][k];
    noise_sd[p] = sigma_y * std::sqrt(e);
  }
  auto Phi = [](double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); };
  auto phi = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); };

  const double lo = y.min_val;
  const double range = static_cast<double>(y.max_val) - lo;
  const std::uint32_t bw = (y.width + 7) / 8;
  double total = 0.0;
  for (std::uint32_t py = 0; py < y.height; ++py) {
    for (std::uint32_t px = 0; px < y.width; ++px) {
      const std::size_t block = static_cast<std::size_t>(py / 8) * bw + px / 8;
      const int p = static_cast<int>((py % 8) * 8 + px % 8);
      double r = 0.5;
      for (int k = 0; k < c; ++k) r += basis[p][k] * y.coefficients[block * c + k];
      const double x = range > 0 ? (original.at(px, py) - lo) / range : 0.0;
      const double s = noise_sd[p];
      double e;
      if (s == 0.0) {
        const double rc = std::clamp(r, 0.0, 1.0);
        e = (rc - x) * (rc - x);
      } else {
        const double a = -r / s;
        const double b = (1.0 - r) / s;
        const double d = r - x;
        const double mass = Phi(b) - Phi(a);
        e = x * x * Phi(a) + (1.0 - x) * (1.0 - x) * (1.0 - Phi(b)) + d * d * mass + 2.0 * d * s * (phi(a) - phi(b)) +
            s * s * (mass + a * phi(a) - b * phi(b));
      }
      total += e;
    }
  }
  const double mse = total / (static_cast<double>(y.width) * y.height);
  return 10.0 * std::log10(1.0 / mse);
}

}  // namespace dectk::testing
