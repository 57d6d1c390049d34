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

#include "cli/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

#include "dectk/error.hpp"

namespace dectk::cli {
namespace {

constexpr std::string_view kCodecHeader =
    "profile,c_latent,c_hyper,q_step,image,z_bytes,y_bytes,lossless_bytes,bpp,p_ratio,psnr_db,ms_ssim,y_over_z";
constexpr std::string_view kSummaryHeader =
    "profile,sigma,channel,trials,extract_rate,crc_rate,mean_psnr_db,mean_ms_ssim";
constexpr std::string_view kResilienceHeader = "profile,image,sigma,channel,trial,extract_ok,crc_ok,psnr_db,ms_ssim";

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

struct Cursor {
  const std::string& source;
  int line;

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError(source + " line " + std::to_string(line) + ": " + what);
  }
  double number(const std::string& field) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) fail("bad number '" + field + "'");
    return v;
  }
  std::optional<double> optional_number(const std::string& field) const {
    if (field.empty()) return std::nullopt;
    return number(field);
  }
};

std::string fmt(double v, int digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) s += "  ";
      s += std::string(width[c] - cells[c].size(), ' ') + cells[c];
    }
    return s + "\n";
  };
  std::string out = line(header);
  for (const auto& r : rows) out += line(r);
  return out;
}

}  // namespace

void add_csv(Report& r, std::string_view csv, const std::string& source) {
  int line_no = 0;
  std::string_view header;
  std::vector<std::string_view> lines;
  while (!csv.empty()) {
    const std::size_t nl = csv.find('\n');
    std::string_view line = csv.substr(0, nl);
    csv = nl == std::string_view::npos ? std::string_view{} : csv.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw FormatError(source + ": empty file");
  header = lines[0];
  const std::size_t columns = split(header).size();

  auto profile_slot = [&](const std::string& name) -> ProfileRow& {
    for (auto& p : r.profiles) {
      if (p.profile == name) return p;
    }
    r.profiles.push_back({});
    r.profiles.back().profile = name;
    return r.profiles.back();
  };
  auto success_slot = [&](const std::string& profile, double sigma, const std::string& channel) -> SuccessRow& {
    for (auto& s : r.success) {
      if (s.profile == profile && s.sigma == sigma && s.channel == channel) return s;
    }
    r.success.push_back({profile, sigma, channel, 0, 0.0, 0.0, std::nullopt});
    return r.success.back();
  };

  std::map<std::pair<std::string, std::string>, std::uint64_t> psnr_counts;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    line_no = static_cast<int>(i) + 1;
    const Cursor cur{source, line_no};
    const auto f = split(lines[i]);
    if (f.size() != columns) cur.fail("expected " + std::to_string(columns) + " fields");
    if (header == kCodecHeader) {
      ProfileRow& p = profile_slot(f[0]);
      p.c_latent = static_cast<int>(cur.number(f[1]));
      p.c_hyper = static_cast<int>(cur.number(f[2]));
      p.q_step = cur.number(f[3]);
      ++p.images;
      p.bpp += cur.number(f[8]);
      p.p_ratio += cur.number(f[9]);
      p.psnr_db += cur.number(f[10]);
      p.ms_ssim += cur.number(f[11]);
      p.y_over_z += cur.number(f[12]);
    } else if (header == kSummaryHeader) {
      SuccessRow& s = success_slot(f[0], cur.number(f[1]), f[2]);
      const auto n = static_cast<std::uint64_t>(cur.number(f[3]));
      const double total = static_cast<double>(s.trials + n);
      s.success_rate = (s.success_rate * static_cast<double>(s.trials) + cur.number(f[4]) * static_cast<double>(n)) / total;
      s.crc_rate = (s.crc_rate * static_cast<double>(s.trials) + cur.number(f[5]) * static_cast<double>(n)) / total;
      if (const auto psnr = cur.optional_number(f[6])) {
        s.mean_psnr_db = s.mean_psnr_db ? (*s.mean_psnr_db * static_cast<double>(s.trials) + *psnr * n) / total : *psnr;
      }
      s.trials += n;
    } else if (header == kResilienceHeader) {
      SuccessRow& s = success_slot(f[0], cur.number(f[2]), f[3]);
      const double extract = cur.number(f[5]);
      const double crc = cur.number(f[6]);
      const double total = static_cast<double>(s.trials + 1);
      s.success_rate = (s.success_rate * static_cast<double>(s.trials) + extract) / total;
      s.crc_rate = (s.crc_rate * static_cast<double>(s.trials) + crc) / total;
      ++s.trials;
      if (const auto psnr = cur.optional_number(f[7])) {
        auto& k = psnr_counts[{f[0], f[2] + "/" + f[3]}];
        s.mean_psnr_db = s.mean_psnr_db ? (*s.mean_psnr_db * static_cast<double>(k) + *psnr) / static_cast<double>(k + 1)
                                        : *psnr;
        ++k;
      }
    } else {
      throw FormatError(source + ": unrecognized CSV header '" + std::string(header) + "'");
    }
  }
}

void finish(Report& r) {
  for (auto& p : r.profiles) {
    if (p.images == 0) continue;
    const double n = static_cast<double>(p.images);
    p.bpp /= n;
    p.p_ratio /= n;
    p.psnr_db /= n;
    p.ms_ssim /= n;
    p.y_over_z /= n;
  }
  std::stable_sort(r.profiles.begin(), r.profiles.end(), [](const ProfileRow& a, const ProfileRow& b) {
    if (a.c_latent != b.c_latent) return a.c_latent > b.c_latent;
    return a.p_ratio < b.p_ratio;
  });
}

std::string render(const Report& r) {
  std::vector<std::vector<std::string>> prows;
  for (const auto& p : r.profiles) {
    char q[32];
    std::snprintf(q, sizeof q, "%g", p.q_step);
    prows.push_back({p.profile, std::to_string(p.c_latent), std::to_string(p.c_hyper), q, std::to_string(p.images),
                     fmt(p.bpp, 4), fmt(p.p_ratio, 4), fmt(p.psnr_db, 2), fmt(p.ms_ssim, 4), fmt(p.y_over_z, 2)});
  }
  std::vector<std::vector<std::string>> srows;
  for (const auto& s : r.success) {
    char sigma[32];
    std::snprintf(sigma, sizeof sigma, "%g", s.sigma);
    srows.push_back({s.profile, sigma, s.channel, std::to_string(s.trials), fmt(s.success_rate, 3),
                     fmt(s.crc_rate, 3), s.mean_psnr_db ? fmt(*s.mean_psnr_db, 2) : "-"});
  }
  return "profiles\n" +
         table({"profile", "c_latent", "c_hyper", "q_step", "images", "bpp", "p_ratio", "psnr_db", "ms_ssim", "y_over_z"},
               prows) +
         "\nrecovery\n" +
         table({"profile", "sigma", "channel", "trials", "success", "crc_ok", "psnr_db"}, srows);
}

}  // namespace dectk::cli
