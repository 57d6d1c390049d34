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

#include "cli/manifest.hpp"

#include <openssl/evp.h>

#include <json.hpp>

#include "dectk/error.hpp"

namespace dectk::cli {

std::string sha256_hex(ByteView data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

namespace {

nlohmann::json digests_json(const std::vector<FileDigest>& files) {
  auto arr = nlohmann::json::array();
  for (const auto& f : files) arr.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  return arr;
}

std::vector<FileDigest> digests_from(const nlohmann::json& arr) {
  std::vector<FileDigest> out;
  for (const auto& f : arr) {
    out.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>(), f.at("bytes").get<std::uint64_t>()});
  }
  return out;
}

}  // namespace

std::string to_json(const Manifest& m) {
  nlohmann::json j;
  j["tool"] = "dectk";
  j["version"] = kToolVersion;
  j["command"] = m.command;
  j["args"] = m.args;
  j["seed"] = m.seed;
  if (!m.config.empty()) j["config"] = m.config;
  j["inputs"] = digests_json(m.inputs);
  j["outputs"] = digests_json(m.outputs);
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Manifest m;
    m.command = j.at("command").get<std::string>();
    m.args = j.at("args").get<std::vector<std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config = j.value("config", std::string());
    m.inputs = digests_from(j.at("inputs"));
    m.outputs = digests_from(j.at("outputs"));
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
}

std::filesystem::path OutputSet::resolve(const std::string& name) const {
  const std::filesystem::path p(name);
  return p.is_absolute() ? p : dir_ / p;
}

void OutputSet::write(const std::string& name, ByteView data) {
  write_file_atomic(resolve(name).string(), data);
  digests_.push_back({name, sha256_hex(data), data.size()});
}

Bytes read_input(const std::string& path, std::vector<FileDigest>& inputs) {
  Bytes data = read_file(path);
  inputs.push_back({path, sha256_hex(data), data.size()});
  return data;
}

}  // namespace dectk::cli
