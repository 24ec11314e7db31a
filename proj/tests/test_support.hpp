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

#ifndef ORACLE_GAP_TESTS_TEST_SUPPORT_HPP_
#define ORACLE_GAP_TESTS_TEST_SUPPORT_HPP_

#include <filesystem>
#include <map>
#include <string>

#include "oracle_gap.hpp"

namespace og_test {

namespace fs = std::filesystem;

// A scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& stem = "og-test")
      : path_(oracle_gap::make_temp_dir({}, stem)) {}
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

inline void put(const fs::path& file, const std::string& text) {
  fs::create_directories(file.parent_path());
  oracle_gap::write_file(file, text);
}

inline fs::path fixtures_dir() { return ORACLE_GAP_FIXTURES; }
inline fs::path cli_path() { return ORACLE_GAP_CLI; }

// A tiny shell project: lib.sh defines functions, test.sh checks them.
// Mutating lib.sh under the generic catalog gives fast, deterministic
// verdicts. Lines: 1 add, 2 mul, 3 count (loop), 4 unused.
inline void write_shell_project(const fs::path& root, bool strong_tests = true) {
  put(root / "lib.sh",
      "add() { echo $(( $1 + $2 )); }\n"
      "mul() { echo $(( $1 * $2 )); }\n"
      "count() { i=0; while [ $i -lt $1 ]; do i=$(( i + 1 )); done; echo $i; }\n"
      "unused() { echo $(( $1 - 7 )); }\n");
  if (strong_tests) {
    put(root / "test.sh",
        ". ./lib.sh\n"
        "[ \"$(add 2 3)\" = 5 ] || exit 1\n"
        "[ \"$(mul 2 3)\" = 6 ] || exit 1\n"
        "[ \"$(count 3)\" = 3 ] || exit 1\n");
  } else {
    put(root / "test.sh",
        ". ./lib.sh\n"
        "add 2 3 >/dev/null\n"
        "mul 2 3 >/dev/null\n"
        "count 3 >/dev/null\n");
  }
  put(root / "coverage.lcov",
      "SF:lib.sh\nDA:1,1\nDA:2,1\nDA:3,4\nDA:4,0\nend_of_record\n");
}

inline oracle_gap::CampaignConfig shell_campaign(int jobs = 1) {
  oracle_gap::CampaignConfig c;
  c.test_command = "sh test.sh";
  c.timeout_floor_ms = 1000;
  c.timeout_factor = 10;
  c.jobs = jobs;
  return c;
}

inline std::vector<oracle_gap::Mutant> shell_mutants(const fs::path& root) {
  return oracle_gap::generate_mutants(
      oracle_gap::read_file(root / "lib.sh"), "lib.sh",
      oracle_gap::load_operator_catalog("generic"), {}, "generic");
}

// Runs the CLI with `args`, returning its exit code and combined output.
inline oracle_gap::ProcessResult run_cli(const std::string& args,
                                         const fs::path& cwd = fs::current_path(),
                                         long long timeout_ms = 600000) {
  return oracle_gap::run_shell(cli_path().string() + " " + args + " 2>&1", cwd,
                               timeout_ms, {}, 1 << 20);
}

inline std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace og_test

#endif  // ORACLE_GAP_TESTS_TEST_SUPPORT_HPP_
