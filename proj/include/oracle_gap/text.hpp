// Copyright 2026 The Oracle Gap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ORACLE_GAP_TEXT_HPP_
#define ORACLE_GAP_TEXT_HPP_

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "oracle_gap/error.hpp"

namespace oracle_gap {

// A file split on '\n'. Lines keep any '\r' so that joining reproduces the
// input byte-for-byte.
struct SourceLines {
  std::vector<std::string> lines;
  bool trailing_newline = false;
};

inline SourceLines split_lines(std::string_view text) {
  SourceLines out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      out.lines.emplace_back(text.substr(start));
      return out;
    }
    out.lines.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  out.trailing_newline = true;
  return out;
}

inline std::string join_lines(const SourceLines& src) {
  std::string out;
  for (std::size_t i = 0; i < src.lines.size(); ++i) {
    out += src.lines[i];
    if (i + 1 < src.lines.size() || src.trailing_newline) out += '\n';
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path,
                       std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("short write to " + path.string());
}

// Writes to a sibling temporary and renames over the target, so readers
// never observe a half-written output.
inline void write_file_atomic(const std::filesystem::path& path,
                              std::string_view contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  auto tmp = path;
  tmp += ".tmp";
  write_file(tmp, contents);
  std::filesystem::rename(tmp, path);
}

// Repository-relative, '/'-separated, no leading "./".
inline std::string normalize_path(std::string_view raw,
                                  const std::filesystem::path& root = {}) {
  std::string s(raw);
  for (auto& c : s) {
    if (c == '\\') c = '/';
  }
  std::filesystem::path p(s);
  if (p.is_absolute() && !root.empty()) {
    std::error_code ec;
    auto abs_root = std::filesystem::weakly_canonical(root, ec);
    if (ec) abs_root = std::filesystem::absolute(root);
    auto abs_p = std::filesystem::weakly_canonical(p, ec);
    if (ec) abs_p = p;
    auto rel = abs_p.lexically_relative(abs_root);
    if (!rel.empty() && !starts_with(rel.generic_string(), "..")) p = rel;
  }
  auto out = p.lexically_normal().generic_string();
  while (starts_with(out, "./")) out.erase(0, 2);
  return out;
}

inline std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

}  // namespace oracle_gap

#endif  // ORACLE_GAP_TEXT_HPP_
