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
#include <string>
#include <string_view>
#include <vector>

#include "dectk/bytes.hpp"
#include "dectk/container.hpp"
#include "dectk/image.hpp"

namespace dectk::corpus {

enum class PhantomKind { kEllipses, kGradient, kTexture, kNoise, kComposite };
enum class Modality { kCt, kMr };

std::string_view kind_name(PhantomKind k);
PhantomKind parse_kind(std::string_view name);
std::string_view modality_name(Modality m);
Modality parse_modality(std::string_view name);

struct PhantomSpec {
  PhantomKind kind = PhantomKind::kComposite;
  std::uint32_t width = 256;
  std::uint32_t height = 256;
  std::uint64_t seed = 0;
  // CT-like: [-1024, 3071] with a body filling most of the field.
  // MR-like: [0, 4095] with a large zero background.
  Modality modality = Modality::kCt;
};

inline constexpr std::uint32_t kMinPhantomSize = 176;
// Standard deviation of the white acquisition noise added to composite phantoms.
inline constexpr float kCtNoiseSigma = 10.0f;
inline constexpr float kMrNoiseSigma = 20.0f;

struct IntensityRange {
  float lo;
  float hi;
};
IntensityRange modality_range(Modality m);

// Deterministic, integer-valued phantom. Samples lie in the modality range,
// except the noise kind, which is uniform over [lo, lo + 65535].
// Throws RangeError for sizes below 176 (the MS-SSIM minimum).
ImagePlane gen_phantom(const PhantomSpec& spec);

// `count` phantoms with seeds base_seed, base_seed + 1, ...
std::vector<ImagePlane> gen_corpus(PhantomKind kind, Modality modality, std::uint32_t size, std::size_t count,
                                   std::uint64_t base_seed);

enum class WeightStructure { kUniformMantissa, kGridRounded };
std::string_view structure_name(WeightStructure s);
WeightStructure parse_structure(std::string_view name);

inline constexpr double kGridStep = 1e-3;

// Layer-named tensors totalling exactly param_count parameters.
container::Checkpoint gen_clean_checkpoint(std::uint64_t param_count, WeightStructure structure, std::uint64_t seed);

// P5 PGM, maxval up to 65535, 16-bit samples big-endian. The reader records
// the data's own min/max; the writer needs integer samples in [0, maxval].
// maxval 0 means "largest sample" (at least 1).
ImagePlane read_pgm(ByteView data);
Bytes write_pgm(const ImagePlane& img, std::uint16_t maxval = 0);

// Shift applied when storing CT-like planes as unsigned PGM samples.
inline constexpr float kCtStoredOffset = 1024.0f;

// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
double unit_uniform(std::uint64_t bits);

}  // namespace dectk::corpus
