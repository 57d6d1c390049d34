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

#include "dectk/bytes.hpp"
#include "dectk/image.hpp"

namespace dectk::metrics {

inline constexpr std::uint32_t kMsSsimMinSize = 176;
inline constexpr int kMsSsimWindow = 11;
inline constexpr double kMsSsimSigma = 1.5;
inline constexpr std::array<double, 5> kMsSsimWeights = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

// When no peak is given, the reference's recorded range is used (1 for a
// constant reference). Non-positive peaks are RangeError; mismatched
// dimensions are ShapeError.
double psnr(const ImagePlane& a, const ImagePlane& b, std::optional<double> peak = std::nullopt);

// Five-scale MS-SSIM, valid-mode 11x11 Gaussian window, 2x2 average pooling
// between scales. Both images are offset by the reference's minimum so the
// samples sit in [0, peak]. Negative per-scale terms are clamped to zero.
// ShapeError if the sizes differ or the smaller side is below 176.
double ms_ssim(const ImagePlane& a, const ImagePlane& b, std::optional<double> peak = std::nullopt);

// bits per pixel; zero pixels is DivisionError.
double bpp(std::uint64_t code_bytes, std::uint32_t width, std::uint32_t height);
// lossy / lossless; zero lossless size is DivisionError.
double p_ratio(std::uint64_t lossy_bytes, std::uint64_t lossless_bytes);
// Fraction of differing bits. Length mismatch is ShapeError; empty inputs give 0.
double ber(ByteView sent, ByteView got);

struct QualityReport {
  double psnr_db = 0.0;
  double ms_ssim = 0.0;
  double bpp = 0.0;
  double p_ratio = 0.0;
  std::optional<double> ber;
};

QualityReport quality_report(const ImagePlane& original, const ImagePlane& decoded, std::uint64_t code_bytes,
                             std::uint64_t lossless_bytes);

}  // namespace dectk::metrics
