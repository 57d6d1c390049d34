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

#include "cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "dectk/error.hpp"

namespace dectk::cli {
namespace {

class LineParser {
 public:
  LineParser(std::string_view s, int line) : s_(s), line_(line) {}

  void skip_space() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool at_end_or_comment() {
    skip_space();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }
  bool consume(char c) {
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string key() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                s_[pos_] == '-' || s_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ == start) fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }
  Scalar scalar() {
    skip_space();
    if (pos_ >= s_.size()) fail("expected a value");
    if (s_[pos_] == '"') return string();
    if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    return number();
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError("config line " + std::to_string(line_) + ": " + what);
  }

 private:
  std::string string() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\') {
        ++pos_;
        if (pos_ >= s_.size() || (s_[pos_] != '"' && s_[pos_] != '\\')) fail("unsupported escape");
      }
      out += s_[pos_++];
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }
  double number() {
    std::size_t start = pos_;
    if (pos_ < s_.size() && s_[pos_] == '+') start = ++pos_;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + s_.size(), v);
    if (ec != std::errc() || !std::isfinite(v)) fail("malformed value");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
};

}  // namespace

Config Config::parse(std::string_view text) {
  Config c;
  int line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    LineParser p(line, line_no);
    if (p.at_end_or_comment()) continue;
    const std::string key = p.key();
    if (!p.consume('=')) p.fail("expected '=' after '" + key + "'");
    Value v;
    if (p.consume('[')) {
      v.is_array = true;
      if (!p.consume(']')) {
        do {
          v.items.push_back(p.scalar());
        } while (p.consume(','));
        if (!p.consume(']')) p.fail("expected ']'");
      }
    } else {
      v.items.push_back(p.scalar());
    }
    if (!p.at_end_or_comment()) p.fail("trailing characters");
    if (!c.values_.emplace(key, std::move(v)).second) p.fail("duplicate key '" + key + "'");
  }
  return c;
}

const Scalar& Config::scalar(const std::string& key) const {
  const Value& v = values_.at(key);
  if (v.is_array || v.items.size() != 1) throw FormatError("config key '" + key + "' must be a single value");
  return v.items[0];
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  if (!has(key)) return fallback;
  const auto* s = std::get_if<std::string>(&scalar(key));
  if (s == nullptr) throw FormatError("config key '" + key + "' must be a string");
  return *s;
}

double Config::get_number(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  const auto* d = std::get_if<double>(&scalar(key));
  if (d == nullptr) throw FormatError("config key '" + key + "' must be a number");
  return *d;
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const double d = get_number(key, 0.0);
  if (d < 0 || d != std::floor(d) || d > 9.007199254740992e15) {
    throw FormatError("config key '" + key + "' must be a non-negative integer");
  }
  return static_cast<std::uint64_t>(d);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto* b = std::get_if<bool>(&scalar(key));
  if (b == nullptr) throw FormatError("config key '" + key + "' must be true or false");
  return *b;
}

std::vector<std::string> Config::get_strings(const std::string& key, const std::vector<std::string>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<std::string> out;
  for (const auto& item : values_.at(key).items) {
    const auto* s = std::get_if<std::string>(&item);
    if (s == nullptr) throw FormatError("config key '" + key + "' must hold strings");
    out.push_back(*s);
  }
  return out;
}

std::vector<double> Config::get_numbers(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const auto& item : values_.at(key).items) {
    const auto* d = std::get_if<double>(&item);
    if (d == nullptr) throw FormatError("config key '" + key + "' must hold numbers");
    out.push_back(*d);
  }
  return out;
}

void Config::check_keys(const std::vector<std::string>& known) const {
  for (const auto& [key, value] : values_) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw PlanError("unknown config key '" + key + "'");
  }
}

}  // namespace dectk::cli
