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

#include "dectk/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dectk/error.hpp"

namespace dectk {

ImagePlane ImagePlane::from_values(std::uint32_t width, std::uint32_t height, std::vector<float> values) {
  if (values.size() != static_cast<std::size_t>(width) * height) {
    throw RangeError("plane of " + std::to_string(width) + "x" + std::to_string(height) + " given " +
                     std::to_string(values.size()) + " samples");
  }
  ImagePlane img;
  img.width = width;
  img.height = height;
  for (float v : values) {
    if (!std::isfinite(v)) throw RangeError("non-finite pixel value");
  }
  if (!values.empty()) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    img.min_val = *lo;
    img.max_val = *hi;
  }
  img.values = std::move(values);
  return img;
}

std::vector<double> normalize(const ImagePlane& img) {
  std::vector<double> out(img.values.size(), 0.0);
  const double lo = img.min_val;
  const double span = static_cast<double>(img.max_val) - lo;
  if (span <= 0.0) return out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (img.values[i] - lo) / span;
  return out;
}

ImagePlane denormalize(std::span<const double> unit, std::uint32_t width, std::uint32_t height, float min_val,
                       float max_val) {
  ImagePlane img;
  img.width = width;
  img.height = height;
  img.min_val = min_val;
  img.max_val = max_val;
  img.values.resize(unit.size());
  const double lo = min_val;
  const double span = static_cast<double>(max_val) - lo;
  // Below this magnitude a result is rounding noise of the affine map around zero.
  const double resolution = (std::abs(lo) + std::abs(span)) * 0x1.0p-48;
  for (std::size_t i = 0; i < unit.size(); ++i) {
    const double v = lo + unit[i] * span;
    img.values[i] = std::abs(v) < resolution ? 0.0f : static_cast<float>(v);
  }
  return img;
}

}  // namespace dectk
