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

#ifndef ORACLE_GAP_FIXTURE_HPP_
#define ORACLE_GAP_FIXTURE_HPP_

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oracle_gap/config.hpp"
#include "oracle_gap/executor.hpp"
#include "oracle_gap/operators.hpp"
#include "oracle_gap/pipeline.hpp"
#include "oracle_gap/text.hpp"

namespace oracle_gap {

namespace fs = std::filesystem;

inline constexpr const char* kFixtureConfig = "oracle-gap.conf";
inline constexpr const char* kExpectedDir = "expected";

struct FixtureVerdict {
  bool passed = false;
  std::string first_difference;  // empty when passed
};

namespace detail {

inline FixtureVerdict differ(std::string what) { return {false, std::move(what)}; }

inline FixtureVerdict compare_mutants(const fs::path& expected, const fs::path& actual) {
  const auto e = read_mutants_jsonl(read_file(expected), expected.string());
  const auto a = read_mutants_jsonl(read_file(actual), actual.string());
  for (std::size_t i = 0; i < std::max(e.size(), a.size()); ++i) {
    if (i >= e.size()) return differ("unexpected mutant " + a[i].id);
    if (i >= a.size()) return differ("missing mutant " + e[i].id);
    nlohmann::ordered_json je = e[i], ja = a[i];
    if (je != ja) {
      return differ("mutant record " + std::to_string(i + 1) + ": expected " +
                    je.dump() + ", got " + ja.dump());
    }
  }
  return {true, {}};
}

// Verdicts only: durations and free-text detail are environment-dependent.
inline FixtureVerdict compare_outcomes(const fs::path& expected, const fs::path& actual) {
  const auto e = read_outcomes_jsonl(read_file(expected), expected.string()).outcomes;
  const auto a = read_outcomes_jsonl(read_file(actual), actual.string()).outcomes;
  for (std::size_t i = 0; i < std::max(e.size(), a.size()); ++i) {
    if (i >= e.size()) return differ("unexpected outcome " + a[i].mutant_id);
    if (i >= a.size()) return differ("missing outcome " + e[i].mutant_id);
    if (e[i].mutant_id != a[i].mutant_id || e[i].verdict != a[i].verdict) {
      return differ("outcome record " + std::to_string(i + 1) + ": expected " +
                    e[i].mutant_id + " " + std::string(to_string(e[i].verdict)) +
                    ", got " + a[i].mutant_id + " " +
                    std::string(to_string(a[i].verdict)));
    }
  }
  return {true, {}};
}

inline FixtureVerdict compare_gap(const fs::path& expected, const fs::path& actual) {
  const auto e = nlohmann::ordered_json::parse(read_file(expected)).at("files");
  const auto a = nlohmann::ordered_json::parse(read_file(actual)).at("files");
  for (std::size_t i = 0; i < std::max(e.size(), a.size()); ++i) {
    if (i >= e.size()) return differ("unexpected gap record for " + a[i].at("path").dump());
    if (i >= a.size()) return differ("missing gap record for " + e[i].at("path").dump());
    for (const auto& [key, value] : e[i].items()) {
      if (!a[i].contains(key) || a[i][key] != value) {
        return differ("gap record " + e[i].at("path").get<std::string>() + " field " +
                      key + ": expected " + value.dump() + ", got " +
                      (a[i].contains(key) ? a[i][key].dump() : std::string("nothing")));
      }
    }
  }
  return {true, {}};
}

}  // namespace detail

// Diffs a pipeline output directory against a fixture's expected tables.
inline FixtureVerdict compare_fixture_outputs(const fs::path& expected_dir,
                                              const fs::path& actual_dir) {
  for (const char* name : {kMutantsFile, kOutcomesFile, kGapJsonFile}) {
    if (!fs::exists(expected_dir / name)) {
      return detail::differ(std::string("expected table missing: ") + name);
    }
    if (!fs::exists(actual_dir / name)) {
      return detail::differ(std::string("pipeline produced no ") + name);
    }
  }
  if (auto v = detail::compare_mutants(expected_dir / kMutantsFile,
                                       actual_dir / kMutantsFile); !v.passed) {
    return v;
  }
  if (auto v = detail::compare_outcomes(expected_dir / kOutcomesFile,
                                        actual_dir / kOutcomesFile); !v.passed) {
    return v;
  }
  return detail::compare_gap(expected_dir / kGapJsonFile, actual_dir / kGapJsonFile);
}

inline RunConfig fixture_config(const fs::path& fixture_dir, const fs::path& output_dir,
                                int jobs = 1) {
  auto cfg = load_config(fixture_dir / kFixtureConfig);
  cfg.output_dir = output_dir;
  cfg.jobs = jobs;
  return cfg;
}

// Runs mutate, run and gap into `output_dir` and diffs the result.
inline FixtureVerdict verify_fixture(const fs::path& fixture_dir, const fs::path& output_dir,
                                     int jobs = 1) {
  const auto cfg = fixture_config(fixture_dir, output_dir, jobs);
  std::ostringstream sink;
  cmd_mutate(cfg, sink);
  cmd_run(cfg, sink);
  write_gap_outputs(cfg.output_dir, compute_gap(cfg), suspect_rule(cfg));
  return compare_fixture_outputs(fixture_dir / kExpectedDir, output_dir);
}

}  // namespace oracle_gap

#endif  // ORACLE_GAP_FIXTURE_HPP_
