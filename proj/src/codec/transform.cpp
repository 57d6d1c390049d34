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

#include <cmath>
#include <numbers>

#include "dectk/codec.hpp"

namespace dectk::codec {
namespace {

std::array<float, kBlockArea> make_dct_matrix() {
  // m[k * 8 + n] = alpha(k) cos((2n + 1) k pi / 16)
  std::array<float, kBlockArea> m{};
  for (int k = 0; k < kBlock; ++k) {
    const double alpha = k == 0 ? std::sqrt(1.0 / kBlock) : std::sqrt(2.0 / kBlock);
    for (int n = 0; n < kBlock; ++n) {
      m[k * kBlock + n] = static_cast<float>(alpha * std::cos((2 * n + 1) * k * std::numbers::pi / (2 * kBlock)));
    }
  }
  return m;
}

const std::array<float, kBlockArea>& dct_matrix() {
  static const auto m = make_dct_matrix();
  return m;
}

std::array<int, kBlockArea> make_zigzag() {
  std::array<int, kBlockArea> order{};
  int i = 0;
  for (int s = 0; s < 2 * kBlock - 1; ++s) {
    if (s % 2 == 0) {
      for (int y = std::min(s, kBlock - 1); y >= 0 && s - y < kBlock; --y) order[i++] = y * kBlock + (s - y);
    } else {
      for (int x = std::min(s, kBlock - 1); x >= 0 && s - x < kBlock; --x) order[i++] = (s - x) * kBlock + x;
    }
  }
  return order;
}

}  // namespace

const std::array<int, kBlockArea>& zigzag_order() {
  static const auto order = make_zigzag();
  return order;
}

void forward_dct(const float* block, float* coeffs) {
  const auto& m = dct_matrix();
  float tmp[kBlockArea];
  // rows: tmp[y][u] = sum_x m[u][x] block[y][x]
  for (int y = 0; y < kBlock; ++y) {
    for (int u = 0; u < kBlock; ++u) {
      float acc = 0.0f;
      for (int x = 0; x < kBlock; ++x) acc += m[u * kBlock + x] * block[y * kBlock + x];
      tmp[y * kBlock + u] = acc;
    }
  }
  for (int v = 0; v < kBlock; ++v) {
    for (int u = 0; u < kBlock; ++u) {
      float acc = 0.0f;
      for (int y = 0; y < kBlock; ++y) acc += m[v * kBlock + y] * tmp[y * kBlock + u];
      coeffs[v * kBlock + u] = acc;
    }
  }
}

void inverse_dct(const float* coeffs, float* block) {
  const auto& m = dct_matrix();
  float tmp[kBlockArea];
  for (int v = 0; v < kBlock; ++v) {
    for (int x = 0; x < kBlock; ++x) {
      float acc = 0.0f;
      for (int u = 0; u < kBlock; ++u) acc += m[u * kBlock + x] * coeffs[v * kBlock + u];
      tmp[v * kBlock + x] = acc;
    }
  }
  for (int y = 0; y < kBlock; ++y) {
    for (int x = 0; x < kBlock; ++x) {
      float acc = 0.0f;
      for (int v = 0; v < kBlock; ++v) acc += m[v * kBlock + y] * tmp[v * kBlock + x];
      block[y * kBlock + x] = acc;
    }
  }
}

SynthesisWeights SynthesisWeights::standard(int decoder_stages) {
  SynthesisWeights w;
  w.basis.resize(kBlockArea * kBlockArea);
  const auto& zz = zigzag_order();
  for (int k = 0; k < kBlockArea; ++k) {
    float unit[kBlockArea] = {};
    unit[zz[k]] = 1.0f;
    float pixels[kBlockArea];
    inverse_dct(unit, pixels);
    for (int p = 0; p < kBlockArea; ++p) w.basis[static_cast<std::size_t>(p * kBlockArea + k)] = pixels[p];
  }
  for (int s = 0; s < decoder_stages; ++s) {
    w.smooth.push_back({0.0625f, 0.875f, 0.0625f});
    w.sharpen.push_back({-0.0625f, 1.125f, -0.0625f});
  }
  return w;
}

}  // namespace dectk::codec
