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
#include <numeric>
#include <string>

#include "dectk/codec.hpp"

namespace dectk::codec {

double erf_as(double x) {
  constexpr double p = 0.3275911;
  constexpr double a1 = 0.254829592;
  constexpr double a2 = -0.284496736;
  constexpr double a3 = 1.421413741;
  constexpr double a4 = -1.453152027;
  constexpr double a5 = 1.061405429;
  const double ax = std::fabs(x);
  const double t = 1.0 / (1.0 + p * ax);
  const double poly = ((((a5 * t + a4) * t + a3) * t + a2) * t + a1) * t;
  const double y = 1.0 - poly * std::exp(-ax * ax);
  return x < 0 ? -y : y;
}

double normal_cdf(double x) { return 0.5 * (1.0 + erf_as(x / std::sqrt(2.0))); }

std::vector<double> bin_probabilities(double scale, double q_step, int bound) {
  if (!(scale > 0) || !(q_step > 0) || bound < 1 || bound > kMaxSymbolBound) {
    throw RangeError("bin model needs scale > 0, q_step > 0 and 1 <= K <= 32767");
  }
  const auto k_count = static_cast<std::size_t>(bound);
  std::vector<double> p(2 * k_count + 1);
  // Masses for k >= 0, mirrored so the table is exactly symmetric.
  // upper[k] = Phi((k + 1/2) q / s) for k = 0..K-1.
  std::vector<double> upper(k_count);
  for (std::size_t k = 0; k < k_count; ++k) upper[k] = normal_cdf((static_cast<double>(k) + 0.5) * q_step / scale);
  p[k_count] = 2.0 * upper[0] - 1.0;
  for (std::size_t k = 1; k < k_count; ++k) {
    const double mass = upper[k] - upper[k - 1];
    p[k_count + k] = mass;
    p[k_count - k] = mass;
  }
  const double tail = 1.0 - upper[k_count - 1];
  p[2 * k_count] = tail;
  p[0] = tail;
  for (auto& v : p) v = std::max(v, 0.0);
  return p;
}

GaussianBinModel::GaussianBinModel(double scale, double q_step, int bound)
    : scale_(scale), q_step_(q_step), bound_(bound) {
  const std::vector<double> p = bin_probabilities(scale, q_step, bound);
  const std::size_t n = p.size();
  const std::size_t center = static_cast<std::size_t>(bound);
  const double total_mass = std::accumulate(p.begin(), p.end(), 0.0);
  // Every symbol gets a floor count of 1; the rest is shared in proportion.
  const std::uint32_t spare = kProbabilityTotal - static_cast<std::uint32_t>(n);
  std::vector<std::uint32_t> freq(n);
  std::vector<double> frac(n);
  std::uint32_t used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double share = p[i] / total_mass * spare;
    const double whole = std::floor(share);
    freq[i] = 1 + static_cast<std::uint32_t>(whole);
    frac[i] = share - whole;
    used += freq[i];
  }
  std::uint32_t left = kProbabilityTotal - used;
  // Largest remainders first, handed out to +k and -k together.
  std::vector<std::size_t> order(center);
  std::iota(order.begin(), order.end(), center + 1);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t i : order) {
    if (left < 2) break;
    ++freq[i];
    ++freq[2 * center - i];
    left -= 2;
  }
  freq[center] += left;
  table_ = FrequencyTable(-bound, freq);
}

std::vector<double> class_scales(const CodecProfile& p) {
  const double lo = p.q_step / 8.0;
  const double hi = 8.0;
  std::vector<double> s(static_cast<std::size_t>(p.c_hyper));
  if (p.c_hyper == 1) {
    s[0] = lo;
    return s;
  }
  const double ratio = std::log(hi / lo) / (p.c_hyper - 1);
  for (int j = 0; j < p.c_hyper; ++j) s[static_cast<std::size_t>(j)] = lo * std::exp(ratio * j);
  return s;
}

int classify_scale(double rms, const std::vector<double>& scales) {
  const int last = static_cast<int>(scales.size()) - 1;
  if (!(rms > scales.front()) || last == 0) return 0;
  if (rms >= scales.back()) return last;
  const double step = std::log(scales[1] / scales[0]);
  const int j = static_cast<int>(std::lround(std::log(rms / scales[0]) / step));
  return std::clamp(j, 0, last);
}

}  // namespace dectk::codec
