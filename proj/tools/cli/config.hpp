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
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// Flat TOML subset used by sweep configs:
//
//   # comment
//   key = "string"
//   key = 0.04            (integers and reals, optional sign and exponent)
//   key = true
//   key = [0, 0.001, "x"] (one line, scalars only)
//
// No tables, no multi-line values, no escapes beyond \" and \\.
namespace dectk::cli {

using Scalar = std::variant<double, std::string, bool>;

struct Value {
  std::vector<Scalar> items;
  bool is_array = false;
};

class Config {
 public:
  // FormatError with the line number on any syntax problem or duplicate key.
  static Config parse(std::string_view text);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_number(const std::string& key, double fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // A scalar is accepted as a one-element list.
  std::vector<std::string> get_strings(const std::string& key, const std::vector<std::string>& fallback) const;
  std::vector<double> get_numbers(const std::string& key, const std::vector<double>& fallback) const;

  // PlanError naming the first key outside `known`.
  void check_keys(const std::vector<std::string>& known) const;

 private:
  const Scalar& scalar(const std::string& key) const;
  std::map<std::string, Value> values_;
};

}  // namespace dectk::cli
