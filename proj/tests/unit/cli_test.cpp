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

#include "cli/app.hpp"

#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "cli/config.hpp"
#include "cli/manifest.hpp"
#include "cli/report.hpp"
#include "dectk/codec.hpp"
#include "dectk/container.hpp"
#include "dectk/corpus.hpp"
#include "dectk/error.hpp"
#include "dectk/metrics.hpp"

using namespace dectk;
namespace fs = std::filesystem;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result dectk_cmd(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("dectk_cli_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string text_of(const std::string& path) {
  const Bytes b = read_file(path);
  return {b.begin(), b.end()};
}

void write_text(const std::string& path, const std::string& text) { write_file_atomic(path, as_bytes(text)); }

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    rows.push_back(f);
  }
  return rows;
}

const char* kSmallSweep =
    "# two profiles, three channels\n"
    "profiles = [\"50x80-analog\", \"24x80-analog\"]\n"
    "channels = [\"lsb\", \"dict\", \"value\"]\n"
    "sigmas = [0, 0.001, 0.003, 0.01]\n"
    "trials = 2\n"
    "size = 192\n"
    "carrier_params = 60000\n"
    "seed = 11\n";

}  // namespace

TEST_CASE("encode then decode an ellipse phantom") {
  TempDir d;
  REQUIRE(dectk_cmd({"--out", d.path.string(), "--quiet", "gen-corpus", "--kind", "ellipses", "--size", "256", "--count",
                     "1"})
              .status == 0);
  const std::string pgm = d / "phantom_000.pgm";
  REQUIRE(fs::exists(pgm));
  auto r = dectk_cmd({"--out", d.path.string(), "encode", "--in", pgm, "--profile", "50x80-analog", "--output", "a.decz"});
  REQUIRE(r.status == 0);
  CHECK(r.out.find("P_ratio") != std::string::npos);
  r = dectk_cmd({"--out", d.path.string(), "decode", "--in", d / "a.decz", "--output", "a.pgm", "--reference", pgm});
  REQUIRE(r.status == 0);
  const ImagePlane ref = corpus::read_pgm(read_file(pgm));
  const ImagePlane dec = corpus::read_pgm(read_file(d / "a.pgm"));
  CHECK(metrics::psnr(ref, dec) >= 35.0);
}

TEST_CASE("lossless writes a raw deflate stream of the samples") {
  TempDir d;
  REQUIRE(dectk_cmd({"--out", d.path.string(), "--quiet", "gen-corpus", "--size", "176", "--count", "1"}).status == 0);
  REQUIRE(dectk_cmd({"--out", d.path.string(), "--quiet", "lossless", "--in", d / "phantom_000.pgm", "--output", "b.raw"})
              .status == 0);
  const ImagePlane img = corpus::read_pgm(read_file(d / "phantom_000.pgm"));
  CHECK(codec::inflate_raw(read_file(d / "b.raw")) == codec::raw_samples(img));
}

TEST_CASE("embed then extract returns the payload byte for byte") {
  TempDir d;
  REQUIRE(dectk_cmd({"--out", d.path.string(), "--quiet", "gen-ckpt", "--params", "50000", "--output", "m.mtc"}).status == 0);
  Bytes payload(3000);
  std::mt19937_64 rng(1);
  for (auto& b : payload) b = static_cast<std::uint8_t>(rng());
  write_file_atomic(d / "codes.bin", payload);
  for (const std::string channel : {"lsb", "dict"}) {
    CAPTURE(channel);
    auto r = dectk_cmd({"--out", d.path.string(), "--quiet", "embed", "--ckpt", d / "m.mtc", "--channel", channel,
                        "--payload", d / "codes.bin", "--output", channel + ".mtc"});
    REQUIRE(r.status == 0);
    r = dectk_cmd({"--out", d.path.string(), "--quiet", "extract", "--ckpt", d / (channel + ".mtc"), "--channel", channel,
                   "--output", channel + ".bin"});
    REQUIRE(r.status == 0);
    CHECK(read_file(d / (channel + ".bin")) == payload);
  }
  // A clean model carries nothing to extract.
  auto r = dectk_cmd({"--out", d.path.string(), "extract", "--ckpt", d / "m.mtc", "--channel", "lsb", "--output", "x"});
  CHECK(r.status == cli::kExitData);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("internal-training embed carries the synthesis tensors and external does not") {
  TempDir d;
  REQUIRE(dectk_cmd({"--out", d.path.string(), "--quiet", "gen-corpus", "--size", "176", "--count", "1"}).status == 0);
  REQUIRE(dectk_cmd({"--out", d.path.string(), "--quiet", "encode", "--in", d / "phantom_000.pgm", "--stages", "2",
                     "--output", "a.decz", "--y-output", "a.decy"})
              .status == 0);
  REQUIRE(dectk_cmd({"--out", d.path.string(), "--quiet", "gen-ckpt", "--params", "40000", "--output", "m.mtc"}).status == 0);
  for (const std::string scenario : {"ep", "it"}) {
    REQUIRE(dectk_cmd({"--out", d.path.string(), "--quiet", "embed", "--ckpt", d / "m.mtc", "--channel", "dict",
                       "--payload", d / "a.decz", "--scenario", scenario, "--output", scenario + ".mtc"})
                .status == 0);
    const auto ckpt = container::parse(read_file(d / (scenario + ".mtc")));
    CHECK(codec::has_synthesis_tensors(ckpt) == (scenario == "it"));
  }
  // VALUE channel through the internal-training export, decoded with the shipped weights.
  REQUIRE(dectk_cmd({"--out", d.path.string(), "--quiet", "embed", "--ckpt", d / "m.mtc", "--channel", "value",
                     "--payload", d / "a.decy", "--scenario", "it", "--output", "v.mtc"})
              .status == 0);
  REQUIRE(dectk_cmd({"--out", d.path.string(), "--quiet", "extract", "--ckpt", d / "v.mtc", "--channel", "value",
                     "--output", "y.decy"})
              .status == 0);
  CHECK(read_file(d / "y.decy") == read_file(d / "a.decy"));
  REQUIRE(dectk_cmd({"--out", d.path.string(), "--quiet", "decode", "--in", d / "y.decy", "--ckpt", d / "v.mtc",
                     "--output", "v.pgm"})
              .status == 0);
  REQUIRE(dectk_cmd({"--out", d.path.string(), "--quiet", "decode", "--in", d / "a.decz", "--output", "z.pgm"}).status == 0);
  CHECK(read_file(d / "v.pgm") == read_file(d / "z.pgm"));
}

TEST_CASE("every run writes a manifest with output digests") {
  TempDir d;
  REQUIRE(dectk_cmd({"--seed", "5", "--out", d.path.string(), "--quiet", "gen-ckpt", "--params", "1000"}).status == 0);
  const auto m = cli::manifest_from_json(text_of(d / "gen-ckpt.manifest.json"));
  CHECK(m.command == "gen-ckpt");
  CHECK(m.seed == 5);
  REQUIRE(m.outputs.size() == 1);
  CHECK(m.outputs[0].path == "model.mtc");
  CHECK(m.outputs[0].sha256 == cli::sha256_hex(read_file(d / "model.mtc")));
  CHECK(m.outputs[0].bytes == fs::file_size(d / "model.mtc"));
}

TEST_CASE("sha256 of known strings") {
  CHECK(cli::sha256_hex(as_bytes("")) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(cli::sha256_hex(as_bytes("abc")) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("sweep shows the channel dichotomy and replays exactly") {
  TempDir d;
  write_text(d / "sweep.toml", kSmallSweep);
  auto r = dectk_cmd({"--out", d / "run", "--quiet", "sweep", "--config", d / "sweep.toml"});
  REQUIRE(r.status == 0);

  const auto rows = csv_rows(text_of(d / "run/summary.csv"));
  REQUIRE(rows.size() == 2 * 4 * 3);
  std::map<std::string, std::vector<double>> value_psnr;
  for (const auto& row : rows) {
    const double sigma = std::stod(row[1]);
    const std::string& channel = row[2];
    const double rate = std::stod(row[4]);
    if (channel == "LSB" && sigma >= 0.01) CHECK(rate == 0.0);
    if (channel == "LSB" && sigma == 0.0) CHECK(rate == 1.0);
    if (channel == "DICT") CHECK(rate == 1.0);
    if (channel == "VALUE") {
      CHECK(rate == 1.0);
      value_psnr[row[0]].push_back(std::stod(row[6]));
    }
  }
  for (const auto& [profile, series] : value_psnr) {
    CAPTURE(profile);
    for (std::size_t i = 1; i < series.size(); ++i) CHECK(series[i] <= series[i - 1]);
  }

  r = dectk_cmd({"--out", d / "replay", "sweep", "--replay", d / "run/sweep.manifest.json"});
  CHECK(r.status == 0);
  CHECK(r.out.find("replay: 3/3 outputs reproduced") != std::string::npos);
  for (const std::string f : {"codec.csv", "resilience.csv", "summary.csv"}) {
    CHECK(read_file(d / ("run/" + f)) == read_file(d / ("replay/" + f)));
  }

  // A manifest whose recorded digest no longer matches fails the replay.
  std::string tampered = text_of(d / "run/sweep.manifest.json");
  const auto pos = tampered.find("\"sha256\": \"", tampered.find("\"outputs\"")) + 11;
  tampered[pos] = tampered[pos] == '0' ? '1' : '0';
  write_text(d / "tampered.json", tampered);
  r = dectk_cmd({"--out", d / "replay2", "sweep", "--replay", d / "tampered.json"});
  CHECK(r.status == cli::kExitData);
  CHECK(r.out.find("MISMATCH") != std::string::npos);
}

TEST_CASE("report orders profiles and carries the size ratio") {
  TempDir d;
  write_text(d / "sweep.toml",
             "profiles = [\"16x80-analog\", \"50x80-analog\", \"32x80-analog\"]\nsigmas = [0]\ntrials = 1\n"
             "size = 176\ncount = 2\ncarrier_params = 40000\n");
  REQUIRE(dectk_cmd({"--out", d.path.string(), "--quiet", "sweep", "--config", d / "sweep.toml"}).status == 0);
  auto r = dectk_cmd({"--out", d.path.string(), "report", d / "codec.csv", d / "summary.csv", "--output", "report.txt"});
  REQUIRE(r.status == 0);
  const auto p50 = r.out.find("50x80-analog");
  const auto p32 = r.out.find("32x80-analog");
  const auto p16 = r.out.find("16x80-analog");
  CHECK(p50 < p32);
  CHECK(p32 < p16);
  CHECK(text_of(d / "report.txt") == r.out);

  cli::Report rep;
  cli::add_csv(rep, text_of(d / "codec.csv"), "codec.csv");
  cli::finish(rep);
  REQUIRE(rep.profiles.size() == 3);
  for (std::size_t i = 0; i < rep.profiles.size(); ++i) {
    CHECK(rep.profiles[i].images == 2);
    CHECK(rep.profiles[i].y_over_z > 1.0);
    if (i > 0) CHECK(rep.profiles[i].c_latent < rep.profiles[i - 1].c_latent);
  }
}

TEST_CASE("report breaks c_latent ties by P_ratio") {
  const std::string csv =
      "profile,c_latent,c_hyper,q_step,image,z_bytes,y_bytes,lossless_bytes,bpp,p_ratio,psnr_db,ms_ssim,y_over_z\n"
      "a,32,80,0.04,img0,10,400,100,0.1,0.30,40,0.99,40\n"
      "b,32,80,0.08,img0,5,400,100,0.05,0.10,35,0.98,80\n"
      "c,48,80,0.04,img0,20,400,100,0.2,0.50,45,0.995,20\n";
  cli::Report rep;
  cli::add_csv(rep, csv, "x.csv");
  cli::finish(rep);
  REQUIRE(rep.profiles.size() == 3);
  CHECK(rep.profiles[0].profile == "c");
  CHECK(rep.profiles[1].profile == "b");
  CHECK(rep.profiles[2].profile == "a");
}

TEST_CASE("report of an empty sweep is an empty table") {
  TempDir d;
  write_text(d / "codec.csv",
             "profile,c_latent,c_hyper,q_step,image,z_bytes,y_bytes,lossless_bytes,bpp,p_ratio,psnr_db,ms_ssim,y_over_z\n");
  const auto r = dectk_cmd({"--out", d.path.string(), "report", d / "codec.csv"});
  CHECK(r.status == 0);
  cli::Report rep;
  cli::add_csv(rep, text_of(d / "codec.csv"), "codec.csv");
  CHECK(rep.profiles.empty());
  CHECK(rep.success.empty());
}

TEST_CASE("malformed report input is a data error") {
  TempDir d;
  write_text(d / "bad.csv", "what,is,this\n1,2,3\n");
  CHECK(dectk_cmd({"--out", d.path.string(), "report", d / "bad.csv"}).status == cli::kExitData);
  write_text(d / "short.csv", "profile,sigma,channel,trials,extract_rate,crc_rate,mean_psnr_db,mean_ms_ssim\nx,0,LSB\n");
  CHECK(dectk_cmd({"--out", d.path.string(), "report", d / "short.csv"}).status == cli::kExitData);
  cli::Report rep;
  CHECK_THROWS_AS(cli::add_csv(rep, "profile,sigma,channel,trials,extract_rate,crc_rate,mean_psnr_db,mean_ms_ssim\n"
                                    "x,zero,LSB,1,1,1,,\n",
                               "bad"),
                  FormatError);
}

TEST_CASE("defender subcommands signal alerts with status 2") {
  TempDir d;
  const std::string out = d.path.string();
  REQUIRE(dectk_cmd({"--out", out, "--quiet", "gen-ckpt", "--params", "30000", "--structure", "grid"}).status == 0);
  const std::string model = d / "model.mtc";
  const auto size = fs::file_size(model);

  CHECK(dectk_cmd({"--out", out, "size-check", "--ckpt", model, "--limit", std::to_string(size)}).status == 0);
  CHECK(dectk_cmd({"--out", out, "size-check", "--ckpt", model, "--limit", std::to_string(size - 1)}).status ==
        cli::kExitAlert);

  auto r = dectk_cmd({"--out", out, "scan", "--ckpt", model, "--csv", "lsb.csv"});
  CHECK(r.status == 0);
  CHECK(r.out.find("verdict: clean") != std::string::npos);
  CHECK(text_of(d / "lsb.csv").rfind("tensor,chi_square,monobit,serial,score\n", 0) == 0);

  write_text(d / "p.bin", std::string(100, 'x'));
  REQUIRE(dectk_cmd({"--out", out, "--quiet", "embed", "--ckpt", model, "--channel", "dict", "--key", "aux", "--payload",
                     d / "p.bin", "--output", "dict.mtc"})
              .status == 0);
  r = dectk_cmd({"--out", out, "scan", "--ckpt", d / "dict.mtc"});
  CHECK(r.status == cli::kExitAlert);
  CHECK(r.out.find("verdict=payload") != std::string::npos);
  CHECK(dectk_cmd({"--out", out, "scan", "--ckpt", d / "dict.mtc", "--allow", "aux"}).status == 0);

  r = dectk_cmd({"--out", out, "audit", "--before", model, "--after", model});
  CHECK(r.status == cli::kExitAlert);
  CHECK(r.out.find("[manual]") != std::string::npos);
  REQUIRE(dectk_cmd({"--out", out, "--quiet", "--seed", "4", "noise", "--ckpt", model, "--sigma", "1e-4", "--output",
                     "tuned.mtc"})
              .status == 0);
  CHECK(dectk_cmd({"--out", out, "audit", "--before", model, "--after", d / "tuned.mtc"}).status == 0);
}

TEST_CASE("usage and data errors map to 64 and 65") {
  TempDir d;
  const std::string out = d.path.string();
  CHECK(dectk_cmd({}).status == cli::kExitUsage);
  CHECK(dectk_cmd({"frobnicate"}).status == cli::kExitUsage);
  CHECK(dectk_cmd({"--out", out, "encode", "--in", "x.pgm"}).status == cli::kExitUsage);
  CHECK(dectk_cmd({"--out", out, "embed", "--ckpt", "a", "--channel", "smoke", "--payload", "b", "--output", "c"}).status ==
        cli::kExitUsage);
  CHECK(dectk_cmd({"--out", out, "sweep"}).status == cli::kExitUsage);
  CHECK(dectk_cmd({"--help"}).status == 0);
  CHECK(dectk_cmd({"--out", out, "decode", "--in", d / "missing.decz", "--output", "x.pgm"}).status == cli::kExitData);
  write_text(d / "junk.mtc", "not a checkpoint");
  CHECK(dectk_cmd({"--out", out, "scan", "--ckpt", d / "junk.mtc"}).status == cli::kExitData);
  write_text(d / "bad.toml", "sigmas = [0, 0.01\n");
  CHECK(dectk_cmd({"--out", out, "sweep", "--config", d / "bad.toml"}).status == cli::kExitData);
}

TEST_CASE("config subset parser") {
  const auto c = cli::Config::parse(
      "# header\n"
      "name = \"a \\\"b\\\"\"  # trailing comment\n"
      "q = 4e-2\n"
      "n = 12\n"
      "flag = false\n"
      "list = [1, -2.5, +3]\n"
      "names = [\"x\", \"y\"]\n"
      "empty = []\n");
  CHECK(c.get_string("name", "") == "a \"b\"");
  CHECK(c.get_number("q", 0) == 0.04);
  CHECK(c.get_uint("n", 0) == 12);
  CHECK_FALSE(c.get_bool("flag", true));
  CHECK(c.get_numbers("list", {}) == std::vector<double>{1, -2.5, 3});
  CHECK(c.get_strings("names", {}) == std::vector<std::string>{"x", "y"});
  CHECK(c.get_numbers("empty", {1}).empty());
  CHECK(c.get_strings("name", {}) == std::vector<std::string>{"a \"b\""});
  CHECK(c.get_number("absent", 7) == 7);
  CHECK_THROWS_AS(c.get_number("name", 0), FormatError);
  CHECK_THROWS_AS(c.get_uint("list", 0), FormatError);
  CHECK_THROWS_AS(c.get_uint("q", 0), FormatError);
  CHECK_THROWS_AS(c.check_keys({"name"}), PlanError);

  CHECK_THROWS_WITH_AS(cli::Config::parse("a = 1\na = 2\n"), doctest::Contains("line 2"), FormatError);
  CHECK_THROWS_AS(cli::Config::parse("a = \"open\n"), FormatError);
  CHECK_THROWS_AS(cli::Config::parse("a 1\n"), FormatError);
  CHECK_THROWS_AS(cli::Config::parse("a = 1 2\n"), FormatError);
  CHECK_THROWS_AS(cli::Config::parse("[table]\n"), FormatError);
  CHECK_THROWS_AS(cli::Config::parse("a = nan\n"), FormatError);
}
