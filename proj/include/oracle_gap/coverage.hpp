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

#ifndef ORACLE_GAP_COVERAGE_HPP_
#define ORACLE_GAP_COVERAGE_HPP_

#include <charconv>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "oracle_gap/error.hpp"
#include "oracle_gap/text.hpp"

namespace oracle_gap {

// Per-line hit counts for one source file. A line is instrumented iff it has
// an entry; covered iff its count is > 0.
struct FileCoverage {
  std::map<std::size_t, std::uint64_t> hits;

  std::size_t instrumented_count() const { return hits.size(); }
  std::size_t covered_count() const {
    std::size_t n = 0;
    for (const auto& [line, h] : hits) n += h > 0 ? 1 : 0;
    return n;
  }
  std::set<std::size_t> instrumented() const {
    std::set<std::size_t> out;
    for (const auto& [line, h] : hits) out.insert(line);
    return out;
  }
  std::set<std::size_t> covered() const {
    std::set<std::size_t> out;
    for (const auto& [line, h] : hits) {
      if (h > 0) out.insert(line);
    }
    return out;
  }

  bool operator==(const FileCoverage&) const = default;
};

struct CoverageMap {
  std::map<std::string, FileCoverage> entries;

  bool contains(const std::string& path) const {
    return entries.count(path) != 0;
  }
  bool operator==(const CoverageMap&) const = default;
};

namespace detail {

inline bool parse_uint(std::string_view s, std::uint64_t& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace detail

// Reads an LCOV tracefile. Only SF/DA/end_of_record matter; LF/LH and the
// function/branch records are ignored (totals are recomputed from DA).
// Repeated SF paths merge, repeated DA lines sum their hits.
inline CoverageMap parse_lcov(std::string_view report_text,
                              const std::string& source = "<lcov>",
                              const std::filesystem::path& root = {}) {
  CoverageMap map;
  FileCoverage* current = nullptr;
  std::size_t line_no = 0;
  for (const auto& raw : split_lines(report_text).lines) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty()) continue;
    if (starts_with(line, "SF:")) {
      auto path = normalize_path(trim(line.substr(3)), root);
      if (path.empty()) throw ParseError(source, line_no, "empty SF path");
      current = &map.entries[path];
    } else if (starts_with(line, "DA:")) {
      if (current == nullptr) {
        throw ParseError(source, line_no, "DA record outside of SF record");
      }
      auto body = line.substr(3);
      auto comma = body.find(',');
      if (comma == std::string_view::npos) {
        throw ParseError(source, line_no, "malformed DA record");
      }
      auto rest = body.substr(comma + 1);
      // Optional third field is a checksum.
      if (auto c2 = rest.find(','); c2 != std::string_view::npos) {
        rest = rest.substr(0, c2);
      }
      std::uint64_t ln = 0, hits = 0;
      if (!detail::parse_uint(body.substr(0, comma), ln) || ln == 0 ||
          !detail::parse_uint(rest, hits)) {
        throw ParseError(source, line_no, "malformed DA record");
      }
      current->hits[static_cast<std::size_t>(ln)] += hits;
    } else if (line == "end_of_record") {
      current = nullptr;
    }
  }
  return map;
}

inline CoverageMap read_lcov_file(const std::filesystem::path& path,
                                  const std::filesystem::path& root = {}) {
  return parse_lcov(read_file(path), path.string(), root);
}

// Canonical form: paths sorted, DA lines ascending, LF/LH recomputed.
inline std::string render_lcov(const CoverageMap& map) {
  std::string out;
  for (const auto& [path, fc] : map.entries) {
    out += "SF:" + path + "\n";
    for (const auto& [line, h] : fc.hits) {
      out += "DA:" + std::to_string(line) + "," + std::to_string(h) + "\n";
    }
    out += "LF:" + std::to_string(fc.instrumented_count()) + "\n";
    out += "LH:" + std::to_string(fc.covered_count()) + "\n";
    out += "end_of_record\n";
  }
  return out;
}

inline void merge_into(CoverageMap& into, const CoverageMap& from) {
  for (const auto& [path, fc] : from.entries) {
    auto& dst = into.entries[path];
    for (const auto& [line, h] : fc.hits) dst.hits[line] += h;
  }
}

inline const FileCoverage& require_file(const CoverageMap& cov,
                                        const std::string& path) {
  auto it = cov.entries.find(path);
  if (it == cov.entries.end()) {
    throw NoCoverageDataError("no coverage data for " + path);
  }
  if (it->second.hits.empty()) {
    throw NoCoverageDataError("no instrumented lines for " + path);
  }
  return it->second;
}

// |covered| / |instrumented|. Missing files are an error, never 0%.
inline double file_line_coverage(const CoverageMap& cov,
                                 const std::string& path) {
  const auto& fc = require_file(cov, path);
  return static_cast<double>(fc.covered_count()) /
         static_cast<double>(fc.instrumented_count());
}

inline std::set<std::size_t> covered_lines(const CoverageMap& cov,
                                           const std::string& path) {
  return require_file(cov, path).covered();
}

}  // namespace oracle_gap

#endif  // ORACLE_GAP_COVERAGE_HPP_
