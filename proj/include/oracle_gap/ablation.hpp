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

#ifndef ORACLE_GAP_ABLATION_HPP_
#define ORACLE_GAP_ABLATION_HPP_

#include <algorithm>
#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "oracle_gap/coverage.hpp"
#include "oracle_gap/error.hpp"
#include "oracle_gap/executor.hpp"
#include "oracle_gap/metrics.hpp"
#include "oracle_gap/operators.hpp"
#include "oracle_gap/process.hpp"
#include "oracle_gap/rng.hpp"
#include "oracle_gap/text.hpp"

namespace oracle_gap::ablation {

namespace fs = std::filesystem;

enum class SiteKind { kAssert, kTestCase };

// A line that can be knocked out. Test cases span [first_line, last_line]
// (decorators and body included); asserts span their own line.
struct KnockoutSite {
  std::string id;  // path:line
  std::string path;
  std::size_t line = 0;
  std::size_t first_line = 0;
  std::size_t last_line = 0;
  SiteKind kind = SiteKind::kAssert;
  std::string group_id;  // enclosing test case id (a test case's own id)
};

struct KnockoutPatterns {
  std::vector<std::string> test_patterns;
  std::vector<std::string> assert_patterns;
};

inline KnockoutPatterns default_patterns(std::string_view language) {
  if (language == "python") {
    return {{R"(^\s*def\s+test\w*\s*\()"},
            {R"(^\s*assert\b)", R"(^\s*self\.assert\w*\s*\()"}};
  }
  if (language == "java") {
    return {{R"(^\s*@Test\b)"}, {R"(^\s*(Assert\.|Assertions\.)?assert\w*\s*\()"}};
  }
  if (language == "go") {
    return {{R"(^func\s+Test\w*\s*\()"},
            {R"(^\s*(assert|require)\.\w+\s*\()"}};
  }
  // c, cpp, generic: GoogleTest / Catch2 idioms
  return {{R"(^\s*(TEST|TEST_F|TEST_P|TEST_CASE)\s*\()"},
          {R"(^\s*(ASSERT|EXPECT)_\w+\s*\()", R"(^\s*(REQUIRE|CHECK)\w*\s*\()",
           R"(^\s*assert\s*\()"}};
}

inline bool uses_indentation(const std::string& path) {
  return fs::path(path).extension() == ".py";
}

inline std::string comment_prefix_for(const std::string& path) {
  const auto ext = fs::path(path).extension().string();
  if (ext == ".py" || ext == ".rb" || ext == ".sh") return "# ";
  for (auto e : {".java", ".c", ".h", ".cc", ".cpp", ".cxx", ".hpp", ".hh",
                 ".go", ".js", ".ts", ".rs", ".kt", ".cs", ".swift", ".scala"}) {
    if (ext == e) return "// ";
  }
  if (ext == ".lua" || ext == ".sql" || ext == ".hs") return "-- ";
  throw Error("no line-comment prefix known for " + path);
}

namespace detail {

inline std::size_t indent_of(std::string_view line) {
  std::size_t n = 0;
  while (n < line.size() && (line[n] == ' ' || line[n] == '\t')) ++n;
  return n;
}

inline std::size_t indentation_extent(const std::vector<std::string>& lines,
                                      std::size_t anchor) {
  const auto base = indent_of(lines[anchor]);
  std::size_t last = anchor;
  for (std::size_t i = anchor + 1; i < lines.size(); ++i) {
    auto t = trim(lines[i]);
    if (t.empty()) continue;
    if (indent_of(lines[i]) <= base && !starts_with(t, "#")) break;
    if (indent_of(lines[i]) > base) last = i;
  }
  return last;
}

// Index of the next line after `i` holding code, or lines.size().
inline std::size_t next_code_line(const std::vector<std::string>& lines,
                                  std::size_t i) {
  for (++i; i < lines.size(); ++i) {
    const auto t = trim(lines[i]);
    if (!t.empty() && !starts_with(t, "#")) return i;
  }
  return lines.size();
}

// A block header whose whole body was commented out gets an inline `pass`,
// so the file still parses.
inline void close_emptied_blocks(const std::vector<std::string>& before,
                                 std::vector<std::string>& after) {
  for (std::size_t i = 0; i < after.size(); ++i) {
    const auto t = trim(after[i]);
    if (t.empty() || starts_with(t, "#") || t.back() != ':') continue;
    const auto was = next_code_line(before, i);
    const bool had_body =
        was < before.size() && indent_of(before[was]) > indent_of(before[i]);
    const auto now = next_code_line(after, i);
    const bool has_body =
        now < after.size() && indent_of(after[now]) > indent_of(after[i]);
    if (had_body && !has_body) after[i] += " pass";
  }
}

inline std::size_t brace_extent(const std::vector<std::string>& lines,
                                std::size_t anchor) {
  int depth = 0;
  bool opened = false;
  for (std::size_t i = anchor; i < lines.size(); ++i) {
    char quote = 0;
    const auto& l = lines[i];
    for (std::size_t k = 0; k < l.size(); ++k) {
      char c = l[k];
      if (quote) {
        if (c == '\\') ++k;
        else if (c == quote) quote = 0;
        continue;
      }
      if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '/' && k + 1 < l.size() && l[k + 1] == '/') {
        break;
      } else if (c == '{') {
        ++depth;
        opened = true;
      } else if (c == '}') {
        --depth;
      }
    }
    if (opened && depth <= 0) return i;
  }
  return anchor;
}

}  // namespace detail

struct SiteScan {
  std::vector<KnockoutSite> sites;
  std::vector<std::string> warnings;
};

// Test-case anchors and the asserts inside them. An assert outside every
// test case is reported and skipped. `test_files` are project-relative.
inline SiteScan enumerate_knockout_sites(const fs::path& project_root,
                                         const std::vector<std::string>& test_files,
                                         const KnockoutPatterns& patterns) {
  std::vector<std::regex> tests, asserts;
  for (const auto& p : patterns.test_patterns) tests.emplace_back(p);
  for (const auto& p : patterns.assert_patterns) asserts.emplace_back(p);
  auto any = [](const std::vector<std::regex>& rs, const std::string& line) {
    return std::any_of(rs.begin(), rs.end(), [&](const std::regex& r) {
      return std::regex_search(line, r);
    });
  };

  SiteScan scan;
  for (const auto& path : test_files) {
    const auto lines = split_lines(read_file(project_root / path)).lines;
    const KnockoutSite* group = nullptr;
    std::size_t group_end = 0;
    const bool indent = uses_indentation(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto& line = lines[i];
      const auto t = trim(line);
      if (t.empty() || starts_with(t, "#") || starts_with(t, "//")) continue;
      if (any(tests, line)) {
        KnockoutSite s;
        s.path = path;
        s.line = i + 1;
        s.id = path + ":" + std::to_string(s.line);
        s.kind = SiteKind::kTestCase;
        s.group_id = s.id;
        std::size_t first = i;
        if (indent) {
          while (first > 0 &&
                 starts_with(trim(lines[first - 1]), "@") &&
                 detail::indent_of(lines[first - 1]) == detail::indent_of(line)) {
            --first;
          }
        }
        s.first_line = first + 1;
        const auto end = indent ? detail::indentation_extent(lines, i)
                                : detail::brace_extent(lines, i);
        s.last_line = end + 1;
        scan.sites.push_back(s);
        group = &scan.sites.back();
        group_end = s.last_line;
        continue;
      }
      if (any(asserts, line)) {
        const std::size_t ln = i + 1;
        std::string here = path + ":" + std::to_string(ln);
        if (group == nullptr || ln > group_end) {
          scan.warnings.push_back(here + ": assert outside any test case; skipped");
          continue;
        }
        KnockoutSite s;
        s.path = path;
        s.line = s.first_line = s.last_line = ln;
        s.id = here;
        s.kind = SiteKind::kAssert;
        s.group_id = group->id;
        scan.sites.push_back(s);
        // push_back may have moved the anchor
        group = nullptr;
        for (auto it = scan.sites.rbegin(); it != scan.sites.rend(); ++it) {
          if (it->kind == SiteKind::kTestCase) {
            group = &*it;
            break;
          }
        }
      }
    }
  }
  return scan;
}

// ---------------------------------------------------------------------------
// Grid

struct Shape {
  int test_pct;
  int assert_pct;
  bool operator==(const Shape&) const = default;
};

// Row-major traversal (rows = test %, columns = assert %), without the
// shapes that keep asserts while dropping every test.
inline constexpr std::array<Shape, 7> kShapes = {{
    {0, 0}, {50, 0}, {50, 50}, {50, 100}, {100, 0}, {100, 50}, {100, 100}}};

inline std::optional<Shape> previous_shape(Shape s) {
  for (std::size_t i = 1; i < kShapes.size(); ++i) {
    if (kShapes[i] == s) return kShapes[i - 1];
  }
  return std::nullopt;
}

struct SuiteConfiguration {
  int test_pct = 100;
  int assert_pct = 100;
  std::size_t sample_index = 0;
  std::set<std::string> retained;  // site ids

  Shape shape() const { return {test_pct, assert_pct}; }
  std::string label() const {
    return "t" + std::to_string(test_pct) + "_a" + std::to_string(assert_pct) +
           "_s" + std::to_string(sample_index);
  }
};

inline std::size_t portion(std::size_t population, int pct) {
  if (pct >= 100) return population;
  if (pct <= 0) return 0;
  return (population + 1) / 2;  // 50%, half rounded up
}

// Five seeded variants for any shape with a 50% axis, or one when the suite
// averages fewer than 1.5 asserts per test case.
inline std::vector<SuiteConfiguration> generate_grid(
    const std::vector<KnockoutSite>& sites, std::size_t samples,
    std::uint64_t seed) {
  std::map<std::string, std::vector<const KnockoutSite*>> tests_by_file;
  std::map<std::string, std::vector<const KnockoutSite*>> asserts_by_group;
  std::size_t n_tests = 0, n_asserts = 0;
  for (const auto& s : sites) {
    if (s.kind == SiteKind::kTestCase) {
      tests_by_file[s.path].push_back(&s);
      ++n_tests;
    } else {
      asserts_by_group[s.group_id].push_back(&s);
      ++n_asserts;
    }
  }
  if (n_tests == 0) throw Error("ablation needs at least one test case site");
  const bool sparse = static_cast<double>(n_asserts) /
                          static_cast<double>(n_tests) < 1.5;
  const std::size_t stochastic_samples =
      sparse ? 1 : std::max<std::size_t>(samples, 1);

  std::vector<SuiteConfiguration> grid;
  for (const auto& shape : kShapes) {
    const bool stochastic = shape.test_pct == 50 || shape.assert_pct == 50;
    const std::size_t variants = stochastic ? stochastic_samples : 1;
    for (std::size_t k = 0; k < variants; ++k) {
      SuiteConfiguration cfg;
      cfg.test_pct = shape.test_pct;
      cfg.assert_pct = shape.assert_pct;
      cfg.sample_index = k;
      for (const auto& [file, tests] : tests_by_file) {
        Rng rng(derive_seed(seed, cfg.label() + ":" + file));
        for (auto ti : sample_indices(tests.size(),
                                      portion(tests.size(), shape.test_pct), rng)) {
          cfg.retained.insert(tests[ti]->id);
        }
        std::vector<const KnockoutSite*> pool;
        for (const auto* t : tests) {
          if (!cfg.retained.count(t->id)) continue;
          auto it = asserts_by_group.find(t->id);
          if (it != asserts_by_group.end()) {
            pool.insert(pool.end(), it->second.begin(), it->second.end());
          }
        }
        for (auto ai : sample_indices(pool.size(),
                                      portion(pool.size(), shape.assert_pct), rng)) {
          cfg.retained.insert(pool[ai]->id);
        }
      }
      grid.push_back(std::move(cfg));
    }
  }
  return grid;
}

// Comments out every site the configuration does not retain, in place.
// Line counts never change.
inline void materialize_configuration(const fs::path& tree,
                                      const std::vector<KnockoutSite>& sites,
                                      const SuiteConfiguration& config) {
  std::map<std::string, std::set<std::size_t>> doomed;
  for (const auto& s : sites) {
    if (config.retained.count(s.id)) continue;
    auto& lines = doomed[s.path];
    for (auto l = s.first_line; l <= s.last_line; ++l) lines.insert(l);
  }
  for (const auto& [path, lines] : doomed) {
    const auto prefix = comment_prefix_for(path);
    auto src = split_lines(read_file(tree / path));
    for (auto l : lines) {
      if (l == 0 || l > src.lines.size()) continue;
      auto& line = src.lines[l - 1];
      if (trim(line).empty()) continue;
      const auto indent = detail::indent_of(line);
      line = line.substr(0, indent) + prefix + line.substr(indent);
    }
    if (uses_indentation(path)) {
      detail::close_emptied_blocks(split_lines(read_file(tree / path)).lines,
                                   src.lines);
    }
    write_file(tree / path, join_lines(src));
  }
}

// ---------------------------------------------------------------------------
// Running the grid

struct GridOptions {
  CampaignConfig campaign;
  std::string coverage_command;
  std::string coverage_report;  // relative to the configuration tree
  bool timeout_as_kill = true;
};

struct ConfigurationRun {
  SuiteConfiguration config;
  bool failed = false;
  std::string detail;
  CoverageMap coverage;
  std::vector<FileGapReport> reports;  // one per target file

  // Mean covered gap over target files that have one.
  std::optional<double> mean_covered_gap() const {
    double sum = 0;
    std::size_t n = 0;
    for (const auto& r : reports) {
      if (auto g = r.covered_gap()) {
        sum += to_double(*g);
        ++n;
      }
    }
    if (failed || n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }
};

inline ConfigurationRun run_configuration(const fs::path& project_root,
                                          const std::vector<std::string>& target_files,
                                          const std::vector<KnockoutSite>& sites,
                                          const SuiteConfiguration& config,
                                          const std::vector<Mutant>& mutants,
                                          const GridOptions& options) {
  ConfigurationRun run;
  run.config = config;
  try {
    Workspace ws(project_root, options.campaign.workspace_root,
                 options.campaign.copy_excludes);
    materialize_configuration(ws.root(), sites, config);
    if (options.coverage_command.empty()) {
      throw UsageError("ablation needs coverage_command to re-measure coverage");
    }
    auto cov_run = run_shell(options.coverage_command, ws.root(), 0);
    if (cov_run.exit_code != 0) {
      run.failed = true;
      run.detail = "coverage command failed (exit " +
                   std::to_string(cov_run.exit_code) + "): " + cov_run.output_tail;
      return run;
    }
    run.coverage = read_lcov_file(ws.root() / options.coverage_report, ws.root());
    auto result = run_campaign(ws.root(), mutants, options.campaign);
    for (const auto& path : target_files) {
      std::vector<MutantOutcome> outs;
      for (std::size_t i = 0; i < mutants.size(); ++i) {
        if (mutants[i].path == path) outs.push_back(result.outcomes[i]);
      }
      run.reports.push_back(build_file_report(path, run.coverage, mutants, outs,
                                              options.timeout_as_kill));
    }
  } catch (const RedBaselineError& e) {
    run.failed = true;
    run.detail = e.what();
    run.reports.clear();
  }
  return run;
}

inline std::vector<ConfigurationRun> run_ablation_grid(
    const fs::path& project_root, const std::vector<std::string>& target_files,
    const std::vector<KnockoutSite>& sites,
    const std::vector<SuiteConfiguration>& grid,
    const std::vector<Mutant>& mutants, const GridOptions& options,
    const std::function<void(const ConfigurationRun&)>& progress = {}) {
  std::vector<ConfigurationRun> runs;
  for (const auto& cfg : grid) {
    runs.push_back(run_configuration(project_root, target_files, sites, cfg,
                                     mutants, options));
    if (progress) progress(runs.back());
  }
  return runs;
}

// ---------------------------------------------------------------------------
// Delta matrix

struct MatrixCell {
  Shape shape{};
  std::vector<std::optional<double>> samples;  // per-variant mean covered gap
  std::optional<double> mean_covered_gap;
  std::optional<double> delta_vs_full;
  std::optional<double> delta_vs_previous;
};

// Per shape, the mean covered gap over its variants, minus that of the full
// (100,100) suite and of the previous shape in traversal order.
inline std::vector<MatrixCell> gap_delta_matrix(
    const std::vector<ConfigurationRun>& runs) {
  std::vector<MatrixCell> cells;
  auto find = [&](Shape s) -> MatrixCell* {
    for (auto& c : cells) {
      if (c.shape == s) return &c;
    }
    return nullptr;
  };
  for (const auto& shape : kShapes) {
    MatrixCell cell;
    cell.shape = shape;
    double sum = 0;
    std::size_t n = 0;
    bool present = false;
    for (const auto& r : runs) {
      if (!(r.config.shape() == shape)) continue;
      present = true;
      auto g = r.mean_covered_gap();
      cell.samples.push_back(g);
      if (g) {
        sum += *g;
        ++n;
      }
    }
    if (!present) continue;
    if (n > 0) cell.mean_covered_gap = sum / static_cast<double>(n);
    cells.push_back(std::move(cell));
  }
  const auto* full = find({100, 100});
  if (full == nullptr) throw Error("delta matrix needs the (100,100) cell");
  const auto full_gap = full->mean_covered_gap;
  for (auto& c : cells) {
    if (c.mean_covered_gap && full_gap) {
      c.delta_vs_full = *c.mean_covered_gap - *full_gap;
    }
    if (auto prev = previous_shape(c.shape)) {
      const auto* p = find(*prev);
      if (p == nullptr) {
        throw Error("delta matrix is missing the cell before (" +
                    std::to_string(c.shape.test_pct) + "," +
                    std::to_string(c.shape.assert_pct) + ")");
      }
      if (c.mean_covered_gap && p->mean_covered_gap) {
        c.delta_vs_previous = *c.mean_covered_gap - *p->mean_covered_gap;
      }
    }
  }
  return cells;
}

inline nlohmann::ordered_json matrix_json(
    const std::vector<MatrixCell>& cells,
    const std::vector<ConfigurationRun>& runs) {
  auto opt = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    if (!v) return nullptr;
    return *v;
  };
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : cells) {
    auto samples = nlohmann::ordered_json::array();
    for (const auto& r : runs) {
      if (!(r.config.shape() == c.shape)) continue;
      samples.push_back({{"sample_index", r.config.sample_index},
                         {"label", r.config.label()},
                         {"status", r.failed ? "failed" : "ok"},
                         {"detail", r.detail},
                         {"mean_covered_gap", opt(r.mean_covered_gap())},
                         {"retained_sites", r.config.retained.size()}});
    }
    arr.push_back({{"cell", {{"test_pct", c.shape.test_pct},
                             {"assert_pct", c.shape.assert_pct}}},
                   {"samples", samples},
                   {"mean_covered_gap", opt(c.mean_covered_gap)},
                   {"delta_vs_full", opt(c.delta_vs_full)},
                   {"delta_vs_previous", opt(c.delta_vs_previous)}});
  }
  return arr;
}

}  // namespace oracle_gap::ablation

#endif  // ORACLE_GAP_ABLATION_HPP_
