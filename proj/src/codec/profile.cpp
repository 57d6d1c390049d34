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

#include <charconv>
#include <cmath>
#include <string>

#include "dectk/codec.hpp"

namespace dectk::codec {

void CodecProfile::validate() const {
  if (c_latent < 1 || c_latent > kBlockArea) throw ProfileError("c_latent must be in [1, 64]");
  if (c_hyper < 1 || c_hyper > 256) throw ProfileError("c_hyper must be in [1, 256]");
  if (!(q_step > 0.0f) || !std::isfinite(q_step)) throw ProfileError("q_step must be positive");
  if (decoder_stages < 0 || decoder_stages > 1024) throw ProfileError("decoder_stages must be in [0, 1024]");
  if (symbol_bound < 1 || symbol_bound > kMaxSymbolBound) throw ProfileError("symbol bound must be in [1, 32767]");
}

int symbol_bound_for(float q_step) {
  // DC residuals span [-8, 8] in normalized units.
  const double needed = std::ceil(8.0 / q_step) + 2.0;
  if (needed <= kDefaultSymbolBound) return kDefaultSymbolBound;
  return needed >= kMaxSymbolBound ? kMaxSymbolBound : static_cast<int>(needed);
}

CodecProfile make_profile(int c_latent, int c_hyper, float q_step, int decoder_stages) {
  CodecProfile p;
  p.c_latent = c_latent;
  p.c_hyper = c_hyper;
  p.q_step = q_step;
  p.decoder_stages = decoder_stages;
  if (q_step > 0.0f) p.symbol_bound = symbol_bound_for(q_step);
  p.validate();
  return p;
}

namespace {

int parse_int(std::string_view s, std::string_view whole) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ProfileError("bad profile name '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

CodecProfile parse_profile(std::string_view name, std::optional<float> q_step, std::optional<int> decoder_stages) {
  constexpr float kDefaultStep = 0.04f;
  constexpr float kNearLosslessStep = 2.5e-4f;
  if (name == "near-lossless") {
    return make_profile(64, 80, q_step.value_or(kNearLosslessStep), decoder_stages.value_or(0));
  }
  constexpr std::string_view suffix = "-analog";
  std::string_view core = name;
  if (core.size() > suffix.size() && core.substr(core.size() - suffix.size()) == suffix) {
    core.remove_suffix(suffix.size());
  }
  const auto x = core.find('x');
  if (x == std::string_view::npos) throw ProfileError("bad profile name '" + std::string(name) + "'");
  const int latent = parse_int(core.substr(0, x), name);
  const int hyper = parse_int(core.substr(x + 1), name);
  if (latent < 1 || hyper < 1) throw ProfileError("bad profile name '" + std::string(name) + "'");
  return make_profile(std::min(latent, kBlockArea), hyper, q_step.value_or(kDefaultStep),
                      decoder_stages.value_or(0));
}

std::string profile_name(const CodecProfile& p) {
  return std::to_string(p.c_latent) + "x" + std::to_string(p.c_hyper) + "-analog";
}

}  // namespace dectk::codec
