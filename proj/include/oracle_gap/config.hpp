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

#ifndef ORACLE_GAP_CONFIG_HPP_
#define ORACLE_GAP_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "oracle_gap/error.hpp"
#include "oracle_gap/text.hpp"

namespace oracle_gap {

namespace fs = std::filesystem;

// Everything a subcommand may need. Unset optionals fall back to the
// defaults of the module that consumes them.
struct RunConfig {
  fs::path project_root = ".";
  std::string language = "generic";
  fs::path coverage_report;         // LCOV, relative to project_root
  std::string coverage_command;     // regenerates coverage_report (ablate)
  std::string test_command;
  std::string build_command;
  std::uint64_t seed = 0;
  int jobs = 1;
  double timeout_factor = 10.0;
  long long timeout_floor_ms = 2000;
  std::size_t mutant_cap = 100;
  std::size_t files_per_bucket = 25;
  std::size_t file_cap = 100;
  std::vector<std::string> exclude;       // path globs, never analyzed
  bool exclude_logging = true;            // skip lines that only log
  std::vector<std::string> exclude_line;  // extra line regexes
  std::vector<std::string> sources;       // globs for files lacking coverage
  fs::path catalog;                       // empty: built-in operators
  fs::path output_dir = "oracle-gap-out";
  bool timeout_as_kill = true;
  std::vector<std::string> test_files;    // globs; knockout targets
  std::vector<std::string> test_pattern;  // empty: language defaults
  std::vector<std::string> assert_pattern;
  std::size_t ablation_samples = 5;
  double suspect_min_coverage = 0.80;
  double suspect_max_score = 0.20;
  std::string suspect_scope = "raw";
  fs::path workspace_root;

  fs::path output_path(const std::string& name) const { return output_dir / name; }
  fs::path coverage_path() const {
    return coverage_report.is_absolute() ? coverage_report
                                         : project_root / coverage_report;
  }
};

namespace detail {

inline bool parse_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw UsageError(key + ": expected a boolean, got '" + std::string(v) + "'");
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    T out{};
    if constexpr (std::is_same_v<T, double>) {
      out = std::stod(v, &used);
    } else if constexpr (std::is_signed_v<T>) {
      out = static_cast<T>(std::stoll(v, &used));
    } else {
      if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
      out = static_cast<T>(std::stoull(v, &used));
    }
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::logic_error&) {
    throw UsageError(key + ": not a valid number: '" + v + "'");
  }
}

}  // namespace detail

// Applies one key = value pair. Relative paths resolve against `base`.
// List keys append.
inline void apply_setting(RunConfig& c, const std::string& key,
                          const std::string& value, const fs::path& base = {}) {
  auto path = [&](const std::string& v) {
    fs::path p(v);
    return (p.is_absolute() || base.empty()) ? p : base / p;
  };
  if (key == "project_root") c.project_root = path(value);
  else if (key == "language") c.language = value;
  else if (key == "coverage_report") c.coverage_report = value;
  else if (key == "coverage_command") c.coverage_command = value;
  else if (key == "test_command") c.test_command = value;
  else if (key == "build_command") c.build_command = value;
  else if (key == "seed") c.seed = detail::parse_number<std::uint64_t>(key, value);
  else if (key == "jobs") c.jobs = detail::parse_number<int>(key, value);
  else if (key == "timeout_factor") c.timeout_factor = detail::parse_number<double>(key, value);
  else if (key == "timeout_floor_ms") c.timeout_floor_ms = detail::parse_number<long long>(key, value);
  else if (key == "mutant_cap") c.mutant_cap = detail::parse_number<std::size_t>(key, value);
  else if (key == "files_per_bucket") c.files_per_bucket = detail::parse_number<std::size_t>(key, value);
  else if (key == "file_cap") c.file_cap = detail::parse_number<std::size_t>(key, value);
  else if (key == "exclude") c.exclude.push_back(value);
  else if (key == "exclude_logging") c.exclude_logging = detail::parse_bool(key, value);
  else if (key == "exclude_line") c.exclude_line.push_back(value);
  else if (key == "sources") c.sources.push_back(value);
  else if (key == "catalog") c.catalog = path(value);
  else if (key == "output_dir") c.output_dir = path(value);
  else if (key == "timeout_as_kill") c.timeout_as_kill = detail::parse_bool(key, value);
  else if (key == "test_files") c.test_files.push_back(value);
  else if (key == "test_pattern") c.test_pattern.push_back(value);
  else if (key == "assert_pattern") c.assert_pattern.push_back(value);
  else if (key == "ablation_samples") c.ablation_samples = detail::parse_number<std::size_t>(key, value);
  else if (key == "suspect_min_coverage") c.suspect_min_coverage = detail::parse_number<double>(key, value);
  else if (key == "suspect_max_score") c.suspect_max_score = detail::parse_number<double>(key, value);
  else if (key == "suspect_scope") c.suspect_scope = value;
  else if (key == "workspace_root") c.workspace_root = path(value);
  else throw UsageError("unknown configuration key '" + key + "'");
}

// `key = value` lines; '#' starts a comment line; blank lines ignored.
inline void parse_config_text(RunConfig& c, std::string_view text,
                              const std::string& source, const fs::path& base) {
  const auto lines = split_lines(text).lines;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto t = trim(lines[i]);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(source, i + 1, "expected 'key = value'");
    }
    const std::string key(trim(t.substr(0, eq)));
    const std::string value(trim(t.substr(eq + 1)));
    if (key.empty()) throw ParseError(source, i + 1, "empty key");
    try {
      apply_setting(c, key, value, base);
    } catch (const UsageError& e) {
      throw ParseError(source, i + 1, e.what());
    }
  }
}

// Reads a config file. project_root defaults to the file's directory.
inline RunConfig load_config(const fs::path& file) {
  RunConfig c;
  const auto base = fs::absolute(file).parent_path();
  c.project_root = base;
  c.output_dir = base / "oracle-gap-out";
  parse_config_text(c, read_file(file), file.string(), base);
  return c;
}

}  // namespace oracle_gap

#endif  // ORACLE_GAP_CONFIG_HPP_
