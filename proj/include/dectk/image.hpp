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

#include <cstdint>
#include <span>
#include <vector>

namespace dectk {

// A single intensity plane. min_val/max_val record the original range so a
// normalized reconstruction can be mapped back.
struct ImagePlane {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<float> values;  // row-major, height x width
  float min_val = 0.0f;
  float max_val = 0.0f;

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  float at(std::uint32_t x, std::uint32_t y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  float range() const { return max_val - min_val; }

  // Builds a plane and records the data's own min/max. Throws RangeError on
  // non-finite samples or a size mismatch.
  static ImagePlane from_values(std::uint32_t width, std::uint32_t height, std::vector<float> values);
};

// Min-max normalization to [0, 1]; a constant plane normalizes to zeros.
std::vector<double> normalize(const ImagePlane& img);
ImagePlane denormalize(std::span<const double> unit, std::uint32_t width, std::uint32_t height, float min_val,
                       float max_val);

}  // namespace dectk
