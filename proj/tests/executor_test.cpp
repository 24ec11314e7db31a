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

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <thread>

#include "test_support.hpp"

namespace og = oracle_gap;
using og_test::put;
using og_test::TempDir;

namespace {

// Independent verdict oracle: rewrite the mutated line by hand in a fresh
// copy and run the suite through std::system under coreutils timeout.
std::string oracle_verdict(const std::filesystem::path& project, const og::Mutant& m) {
  TempDir dir("og-oracle");
  std::filesystem::copy(project, dir.path(), std::filesystem::copy_options::recursive);
  std::ifstream in(dir / m.path);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  in.close();
  if (lines.at(m.line - 1) != m.original) return "INVALID";
  lines[m.line - 1] = m.mutated;
  std::ofstream out(dir / m.path);
  for (const auto& l : lines) out << l << '\n';
  out.close();
  const std::string cmd =
      "cd '" + dir.path().string() + "' && timeout 5 sh test.sh >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  const int code = WEXITSTATUS(status);
  if (code == 124) return "TIMEOUT";
  return code == 0 ? "SURVIVED" : "KILLED";
}

std::vector<std::string> verdicts(const og::CampaignResult& r) {
  std::vector<std::string> out;
  for (const auto& o : r.outcomes) out.emplace_back(og::to_string(o.verdict));
  return out;
}

og::Mutant line_mutant(std::size_t line, std::string original, std::string mutated) {
  return {og::make_mutant_id("lib.sh", line, "HAND", 0, 0), "lib.sh", line,
          std::move(original), std::move(mutated), "HAND"};
}

}  // namespace

TEST(RunShell, ExitCodeOutputAndEnv) {
  TempDir dir;
  auto r = og::run_shell("echo hello; echo \"$OG_X\" >&2; exit 7", dir.path(), 0,
                         {{"OG_X", "fromenv"}});
  EXPECT_EQ(r.exit_code, 7);
  EXPECT_FALSE(r.timed_out);
  EXPECT_EQ(r.output_tail, "hello\nfromenv\n");
  EXPECT_EQ(og::run_shell("pwd", dir.path(), 0).output_tail,
            std::filesystem::canonical(dir.path()).string() + "\n");
}

TEST(RunShell, OutputTailKeepsTheEnd) {
  TempDir dir;
  auto r = og::run_shell("seq 1 10000", dir.path(), 0, {}, 16);
  EXPECT_EQ(r.output_tail.size(), 16u);
  EXPECT_EQ(r.output_tail.substr(r.output_tail.size() - 6), "10000\n");
}

TEST(RunShell, TimeoutKillsTheWholeGroup) {
  TempDir dir;
  const auto marker = dir / "marker";
  auto r = og::run_shell("(sleep 1; touch marker) & sleep 30", dir.path(), 300);
  EXPECT_TRUE(r.timed_out);
  EXPECT_EQ(r.exit_code, -1);
  EXPECT_LT(r.duration_ms, 2000);
  std::this_thread::sleep_for(std::chrono::milliseconds(1500));
  EXPECT_FALSE(std::filesystem::exists(marker));
}

TEST(CampaignConfig, TimeoutIsFloorOrTenTimesBaseline) {
  og::CampaignConfig c;
  c.test_command = "true";
  EXPECT_EQ(c.timeout_for(1), 2000);
  EXPECT_EQ(c.timeout_for(200), 2000);
  EXPECT_EQ(c.timeout_for(201), 2010);
  EXPECT_EQ(c.timeout_for(5000), 50000);
  c.jobs = 0;
  EXPECT_THROW(c.validate(), og::UsageError);
}

TEST(Campaign, VerdictsMatchIndependentOracle) {
  TempDir dir;
  og_test::write_shell_project(dir.path());
  const auto before = og::read_file(dir / "lib.sh");
  auto mutants = og_test::shell_mutants(dir.path());
  ASSERT_GE(mutants.size(), 4u);
  auto result = og::run_campaign(dir.path(), mutants, og_test::shell_campaign(1));
  ASSERT_EQ(result.outcomes.size(), mutants.size());
  std::size_t killed = 0, survived = 0;
  for (std::size_t i = 0; i < mutants.size(); ++i) {
    EXPECT_EQ(result.outcomes[i].mutant_id, mutants[i].id);
    const auto got = std::string(og::to_string(result.outcomes[i].verdict));
    EXPECT_EQ(got, oracle_verdict(dir.path(), mutants[i])) << mutants[i].id;
    killed += got == "KILLED";
    survived += got == "SURVIVED";
  }
  EXPECT_GT(killed, 0u);
  EXPECT_GT(survived, 0u);  // line 4 is never exercised
  EXPECT_EQ(og::read_file(dir / "lib.sh"), before);
  EXPECT_EQ(result.header.mutants_digest, og::mutants_digest(mutants));
  EXPECT_GE(result.header.timeout_ms, 1000);
}

TEST(Campaign, ParallelMatchesSequential) {
  TempDir dir;
  og_test::write_shell_project(dir.path());
  auto mutants = og_test::shell_mutants(dir.path());
  auto one = og::run_campaign(dir.path(), mutants, og_test::shell_campaign(1));
  auto four = og::run_campaign(dir.path(), mutants, og_test::shell_campaign(4));
  EXPECT_EQ(verdicts(one), verdicts(four));
}

TEST(Campaign, WeakTestsKillFewerMutants) {
  auto kills = [](bool strong) {
    TempDir dir;
    og_test::write_shell_project(dir.path(), strong);
    auto r = og::run_campaign(dir.path(), og_test::shell_mutants(dir.path()),
                              og_test::shell_campaign(1));
    std::size_t n = 0;
    for (const auto& o : r.outcomes) n += o.verdict == og::Verdict::kKilled;
    return n;
  };
  EXPECT_LT(kills(false), kills(true));
}

TEST(Campaign, TimeoutStaleAndBuildFailure) {
  TempDir dir;
  og_test::write_shell_project(dir.path());
  const auto loop = og::split_lines(og::read_file(dir / "lib.sh")).lines[2];
  auto endless = loop;
  endless.replace(endless.find("i + 1"), 5, "i + 0");
  std::vector<og::Mutant> ms = {line_mutant(3, loop, endless),
                                line_mutant(1, "not the line", "x")};
  auto r = og::run_campaign(dir.path(), ms, og_test::shell_campaign(1));
  EXPECT_EQ(r.outcomes[0].verdict, og::Verdict::kTimeout);
  EXPECT_LT(r.outcomes[0].duration_ms, 5000);
  EXPECT_EQ(r.outcomes[1].verdict, og::Verdict::kInvalid);
  EXPECT_EQ(r.outcomes[1].detail, "stale");

  auto cfg = og_test::shell_campaign(1);
  cfg.build_command = "grep -q 'i + 0' lib.sh && exit 9 || true";
  auto b = og::run_campaign(dir.path(), {ms[0]}, cfg);
  EXPECT_EQ(b.outcomes[0].verdict, og::Verdict::kInvalid);
  EXPECT_NE(b.outcomes[0].detail.find("build failed (exit 9)"), std::string::npos);
}

TEST(Campaign, RedBaselineAborts) {
  TempDir dir;
  og_test::write_shell_project(dir.path());
  put(dir / "test.sh", "exit 1\n");
  auto mutants = og_test::shell_mutants(dir.path());
  bool evaluated = false;
  og::CampaignHooks hooks;
  hooks.on_outcome = [&](std::size_t, const og::MutantOutcome&) { evaluated = true; };
  EXPECT_THROW(og::run_campaign(dir.path(), mutants, og_test::shell_campaign(1), hooks),
               og::RedBaselineError);
  EXPECT_FALSE(evaluated);
  EXPECT_THROW(og::baseline_check(dir.path(), og_test::shell_campaign(1)),
               og::RedBaselineError);
}

TEST(Campaign, ResumeSkipsCompletedMutants) {
  TempDir dir;
  og_test::write_shell_project(dir.path());
  auto mutants = og_test::shell_mutants(dir.path());
  std::unordered_map<std::string, og::MutantOutcome> done;
  done[mutants[0].id] = {mutants[0].id, og::Verdict::kSurvived, 1, "earlier"};
  done[mutants[1].id] = {mutants[1].id, og::Verdict::kKilled, 1, "earlier"};
  og::CampaignHeader prior;
  prior.timeout_ms = 1234;
  prior.baseline_ms = 5;
  prior.started_at = "2020-01-01T00:00:00Z";
  std::vector<std::size_t> fresh;
  og::CampaignHooks hooks;
  hooks.completed = &done;
  hooks.resume_header = prior;
  hooks.on_outcome = [&](std::size_t i, const og::MutantOutcome&) { fresh.push_back(i); };
  auto r = og::run_campaign(dir.path(), mutants, og_test::shell_campaign(2), hooks);
  EXPECT_EQ(r.outcomes[0].detail, "earlier");
  EXPECT_EQ(r.outcomes[1].detail, "earlier");
  EXPECT_EQ(fresh.size(), mutants.size() - 2);
  for (auto i : fresh) EXPECT_GE(i, 2u);
  EXPECT_EQ(r.header.timeout_ms, 1234);
  EXPECT_EQ(r.header.started_at, prior.started_at);
}

TEST(Outcomes, JsonlRoundTripAndTruncatedTail) {
  og::CampaignResult r;
  r.header.seed = 9;
  r.header.timeout_ms = 2000;
  r.header.mutants_digest = "abc";
  r.outcomes = {{"a:1:X:0:0", og::Verdict::kKilled, 3, "exit 1"},
                {"a:2:X:0:0", og::Verdict::kTimeout, 2000, "timeout"}};
  auto text = og::write_outcomes_jsonl(r);
  auto back = og::read_outcomes_jsonl(text);
  EXPECT_EQ(back.header.seed, 9u);
  EXPECT_EQ(back.header.mutants_digest, "abc");
  ASSERT_EQ(back.outcomes.size(), 2u);
  EXPECT_EQ(back.outcomes[1].verdict, og::Verdict::kTimeout);
  const auto cut = text.substr(0, text.size() - 10);
  EXPECT_THROW(og::read_outcomes_jsonl(cut), og::ParseError);
  EXPECT_EQ(og::read_outcomes_jsonl(cut, "x", true).outcomes.size(), 1u);
  EXPECT_THROW(og::read_outcomes_jsonl("{\"mutant_id\":\"a\",\"verdict\":\"MAYBE\"}\n"),
               og::ParseError);
}

TEST(Workspace, CopiesWithExclusionsAndCleansUp) {
  TempDir dir;
  put(dir / "src/a.txt", "a");
  put(dir / "out/big.txt", "b");
  std::filesystem::path ws_root;
  {
    og::Workspace ws(dir.path(), {}, {dir / "out"});
    ws_root = ws.root();
    EXPECT_EQ(og::read_file(ws.root() / "src/a.txt"), "a");
    EXPECT_FALSE(std::filesystem::exists(ws.root() / "out"));
  }
  EXPECT_FALSE(std::filesystem::exists(ws_root));
}
