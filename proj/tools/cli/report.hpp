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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dectk::cli {

struct ProfileRow {
  std::string profile;
  int c_latent = 0;
  int c_hyper = 0;
  double q_step = 0.0;
  std::uint64_t images = 0;
  double bpp = 0.0;  // means over images from here on
  double p_ratio = 0.0;
  double psnr_db = 0.0;
  double ms_ssim = 0.0;
  double y_over_z = 0.0;
};

struct SuccessRow {
  std::string profile;
  double sigma = 0.0;
  std::string channel;
  std::uint64_t trials = 0;
  double success_rate = 0.0;
  double crc_rate = 0.0;
  std::optional<double> mean_psnr_db;
};

struct Report {
  std::vector<ProfileRow> profiles;  // c_latent descending, then P_ratio ascending
  std::vector<SuccessRow> success;   // first-seen order
};

// Accepts the codec.csv, summary.csv and resilience.csv files a sweep writes,
// recognized by their header. FormatError on anything else.
void add_csv(Report& r, std::string_view csv, const std::string& source);
void finish(Report& r);
std::string render(const Report& r);

}  // namespace dectk::cli
