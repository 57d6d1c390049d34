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
#include <filesystem>
#include <string>
#include <vector>

#include "dectk/bytes.hpp"

namespace dectk::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Lowercase hex SHA-256.
std::string sha256_hex(ByteView data);

struct FileDigest {
  std::string path;  // outputs: relative to the output directory
  std::string sha256;
  std::uint64_t bytes = 0;
};

// Record of one run: what went in, the seed, and a digest of every file written.
struct Manifest {
  std::string command;
  std::vector<std::string> args;
  std::uint64_t seed = 0;
  std::string config;  // sweep config text, verbatim
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;
};

std::string to_json(const Manifest& m);
// FormatError on malformed JSON or missing fields.
Manifest manifest_from_json(std::string_view text);

// Writes files under one output directory atomically and keeps their digests.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  // Relative names land in the output directory; absolute paths are kept.
  std::filesystem::path resolve(const std::string& name) const;
  void write(const std::string& name, ByteView data);
  void write(const std::string& name, std::string_view text) { write(name, as_bytes(text)); }
  const std::vector<FileDigest>& digests() const { return digests_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<FileDigest> digests_;
};

// Reads a file and records its digest.
Bytes read_input(const std::string& path, std::vector<FileDigest>& inputs);

}  // namespace dectk::cli
