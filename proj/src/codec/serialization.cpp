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
#include <cstring>
#include <limits>

#include <zlib.h>

#include "dectk/codec.hpp"

namespace dectk::codec {
namespace {

constexpr std::uint16_t kVersion = 1;

template <typename T>
void write_header(ByteWriter& w, std::string_view magic, const T& x) {
  w.raw(magic);
  w.u16(kVersion);
  w.u32(x.width);
  w.u32(x.height);
  w.f32(x.min_val);
  w.f32(x.max_val);
  w.u16(static_cast<std::uint16_t>(x.profile.c_latent));
  w.u16(static_cast<std::uint16_t>(x.profile.c_hyper));
  w.u16(static_cast<std::uint16_t>(x.profile.decoder_stages));
  w.u16(static_cast<std::uint16_t>(x.profile.symbol_bound));
  w.f32(x.profile.q_step);
}

template <typename T>
void read_header(ByteReader& r, std::string_view magic, T& x) {
  ByteView m = r.take(4, "magic");
  if (std::memcmp(m.data(), magic.data(), 4) != 0) {
    throw FormatError("bad magic: expected " + std::string(magic));
  }
  if (r.u16("version") != kVersion) throw FormatError("unsupported " + std::string(magic) + " version");
  x.width = r.u32("width");
  x.height = r.u32("height");
  x.min_val = r.f32("min");
  x.max_val = r.f32("max");
  x.profile.c_latent = r.u16("c_latent");
  x.profile.c_hyper = r.u16("c_hyper");
  x.profile.decoder_stages = r.u16("decoder_stages");
  x.profile.symbol_bound = r.u16("symbol bound");
  x.profile.q_step = r.f32("q_step");
  try {
    x.profile.validate();
  } catch (const ProfileError& e) {
    throw FormatError(std::string("invalid profile in header: ") + e.what());
  }
  if (!std::isfinite(x.min_val) || !std::isfinite(x.max_val) || x.max_val < x.min_val) {
    throw FormatError("invalid intensity range in header");
  }
  if (block_count(x.width, x.height) > (std::uint64_t{1} << 32)) throw FormatError("image dimensions too large");
}

}  // namespace

Bytes serialize(const LatentCode& z) {
  Bytes out;
  ByteWriter w(out);
  write_header(w, "DECZ", z);
  w.u64(z.hyper_bytes.size());
  w.raw(z.hyper_bytes);
  w.u64(z.latent_bytes.size());
  w.raw(z.latent_bytes);
  return out;
}

Bytes serialize_header(const DecodedLatent& y) {
  Bytes out;
  ByteWriter w(out);
  write_header(w, "DECY", y);
  return out;
}

Bytes serialize(const DecodedLatent& y) {
  Bytes out = serialize_header(y);
  ByteWriter w(out);
  for (float v : y.coefficients) w.f32(v);
  return out;
}

LatentCode parse_latent_code(ByteView data) {
  ByteReader r(data);
  LatentCode z;
  read_header(r, "DECZ", z);
  ByteView hyper = r.take(r.u64("hyper length"), "hyper stream");
  z.hyper_bytes.assign(hyper.begin(), hyper.end());
  ByteView latent = r.take(r.u64("latent length"), "latent stream");
  z.latent_bytes.assign(latent.begin(), latent.end());
  if (!r.at_end()) throw FormatError("trailing bytes after DECZ record");
  return z;
}

DecodedLatent parse_decoded_header(ByteView data) {
  ByteReader r(data);
  DecodedLatent y;
  read_header(r, "DECY", y);
  if (!r.at_end()) throw FormatError("trailing bytes after DECY header");
  return y;
}

DecodedLatent parse_decoded_latent(ByteView data) {
  ByteReader r(data);
  DecodedLatent y;
  read_header(r, "DECY", y);
  const std::uint64_t count = static_cast<std::uint64_t>(y.block_count()) * y.profile.c_latent;
  if (count > r.remaining() / 4 || r.remaining() != count * 4) {
    throw FormatError("DECY coefficient payload has " + std::to_string(r.remaining()) + " bytes, expected " +
                      std::to_string(count * 4));
  }
  y.coefficients.resize(static_cast<std::size_t>(count));
  for (auto& v : y.coefficients) v = r.f32("coefficient");
  return y;
}

std::uint64_t code_size(const LatentCode& z) {
  return kLatentHeaderSize + z.hyper_bytes.size() + z.latent_bytes.size();
}

std::uint64_t code_size(const DecodedLatent& y) { return kDecodedHeaderSize + 4 * y.coefficients.size(); }

Bytes raw_samples(const ImagePlane& img) {
  Bytes out;
  out.reserve(img.values.size() * 2);
  for (float v : img.values) {
    const auto s = static_cast<std::uint16_t>(static_cast<std::int64_t>(std::lround(v)) & 0xFFFF);
    out.push_back(static_cast<std::uint8_t>(s & 0xFF));
    out.push_back(static_cast<std::uint8_t>(s >> 8));
  }
  return out;
}

Bytes lossless_baseline(const ImagePlane& img) {
  const Bytes raw = raw_samples(img);
  z_stream zs{};
  // Negative window bits: raw RFC 1951 stream, no zlib/gzip wrapper.
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, -15, 9, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error("deflateInit2 failed");
  }
  Bytes out(deflateBound(&zs, static_cast<uLong>(raw.size())));
  zs.next_in = const_cast<Bytef*>(raw.data());
  zs.avail_in = static_cast<uInt>(raw.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error("deflate did not finish");
  out.resize(produced);
  return out;
}

Bytes inflate_raw(ByteView deflated) {
  z_stream zs{};
  if (inflateInit2(&zs, -15) != Z_OK) throw Error("inflateInit2 failed");
  Bytes out;
  Bytes chunk(1 << 16);
  zs.next_in = const_cast<Bytef*>(deflated.data());
  zs.avail_in = static_cast<uInt>(deflated.size());
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = chunk.data();
    zs.avail_out = static_cast<uInt>(chunk.size());
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw DecodeError("invalid DEFLATE stream");
    }
    out.insert(out.end(), chunk.begin(), chunk.end() - zs.avail_out);
    if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      throw DecodeError("truncated DEFLATE stream");
    }
  }
  inflateEnd(&zs);
  return out;
}

}  // namespace dectk::codec
