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

#include <algorithm>
#include <set>

#include "oracle_gap/report.hpp"
#include "oracle_gap/rng.hpp"

namespace og = oracle_gap;

namespace {

og::FileGapReport tallies(std::string path, std::int64_t lines, std::int64_t covered,
                          std::int64_t valid, std::int64_t killed,
                          std::int64_t on_covered, std::int64_t killed_covered) {
  og::FileGapReport r;
  r.path = std::move(path);
  r.coverage_available = lines > 0;
  r.instrumented_lines = lines;
  r.covered_line_count = covered;
  r.mutants_total = r.mutants_valid = valid;
  r.killed = killed;
  r.survived = valid - killed;
  r.mutants_on_covered_lines = on_covered;
  r.killed_on_covered_lines = killed_covered;
  return r;
}

std::string squeeze(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == ' ' && (out.empty() || out.back() == ' ')) continue;
    out += c;
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

}  // namespace

TEST(ReportRow, ReferenceExampleRow) {
  // 148/150 lines, 197/260 killed, 197/237 killed on covered lines.
  auto r = tallies("src/util/strencodings.cpp", 150, 148, 260, 197, 237, 197);
  EXPECT_EQ(og::format_one_decimal(*r.raw_gap()), "22.9");
  EXPECT_EQ(og::format_one_decimal(*r.covered_gap()), "15.5");
  auto row = og::render_row(r, 28);
  EXPECT_EQ(row.substr(28), "  98.7  75.8  83.1  22.9  15.5");
}

TEST(ReportRow, AbsentValuesRenderAsDash) {
  auto r = tallies("a.py", 0, 0, 4, 1, 0, 0);
  EXPECT_EQ(squeeze(og::render_row(r, 6)), "a.py - 25.0 - - -");
}

TEST(ReportText, EmptyProject) {
  og::ProjectGapSummary empty;
  auto text = og::render_text(empty, {});
  EXPECT_NE(text.find("no analyzable files"), std::string::npos);
  auto doc = og::report_json(empty, {});
  EXPECT_TRUE(doc["files"].empty());
}

TEST(ReportText, ShowsSummaryUninstrumentedAndSuspects) {
  auto s = og::summarize_project({tallies("weak.py", 10, 10, 10, 1, 10, 1),
                                  tallies("ok.py", 10, 5, 10, 8, 6, 5)});
  s.uninstrumented = {"gen.py"};
  auto text = og::render_text(s, {});
  EXPECT_NE(text.find("files: 2 analyzed, 1 uninstrumented"), std::string::npos);
  EXPECT_NE(text.find("coverage 75.0%  mutation score 45.0%"), std::string::npos);
  EXPECT_NE(text.find("  gen.py\n"), std::string::npos);
  EXPECT_NE(text.find("  weak.py  coverage 100.0%  mutation score 10.0%"),
            std::string::npos);
  // Covered-gap ranking: weak.py (90) before ok.py (50 - 83.3 < 0).
  EXPECT_LT(text.find("\nweak.py"), text.find("\nok.py"));
}

TEST(Suspects, StrictThresholds) {
  std::vector<og::FileGapReport> rs = {
      tallies("edge_cov.py", 10, 8, 10, 1, 8, 1),    // coverage exactly 0.8
      tallies("edge_score.py", 10, 9, 10, 2, 9, 2),  // score exactly 0.2
      tallies("hit.py", 10, 9, 10, 1, 9, 1),
      tallies("nocov.py", 0, 0, 10, 0, 0, 0),
  };
  auto s = og::flag_suspects(rs);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].path, "hit.py");
  og::SuspectRule bad;
  bad.min_coverage = 0.2;
  bad.max_mutation_score = 0.5;
  EXPECT_THROW(og::flag_suspects(rs, bad), og::UsageError);
}

TEST(Suspects, CoveredScope) {
  // Raw score is low only because of mutants on uncovered lines.
  auto r = tallies("f.py", 10, 9, 20, 3, 3, 3);
  og::SuspectRule rule;
  EXPECT_EQ(og::flag_suspects({r}, rule).size(), 1u);
  rule.scope = og::ScoreScope::kCovered;
  EXPECT_TRUE(og::flag_suspects({r}, rule).empty());
}

TEST(Ranking, IsAPermutationSortedDescending) {
  og::Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<og::FileGapReport> rs;
    const auto n = 1 + rng.below(30);
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto lines = static_cast<std::int64_t>(rng.below(4) == 0 ? 0 : 1 + rng.below(50));
      const auto covered = lines ? static_cast<std::int64_t>(rng.below(lines + 1)) : 0;
      const auto valid = static_cast<std::int64_t>(rng.below(20));
      const auto killed = valid ? static_cast<std::int64_t>(rng.below(valid + 1)) : 0;
      const auto onc = valid ? static_cast<std::int64_t>(rng.below(valid + 1)) : 0;
      const auto konc = std::min(onc, killed);
      rs.push_back(tallies("f" + std::to_string(rng.below(1000)) + "_" + std::to_string(i),
                           lines, covered, valid, killed, onc, konc));
    }
    for (auto scope : {og::ScoreScope::kRaw, og::ScoreScope::kCovered}) {
      auto ranking = og::rank_by_gap(rs, scope);
      std::multiset<std::string> in, out;
      for (const auto& r : rs) in.insert(r.path);
      for (const auto& r : ranking.ranked) out.insert(r.path);
      for (const auto& r : ranking.unranked) out.insert(r.path);
      EXPECT_EQ(in, out);
      auto gap = [scope](const og::FileGapReport& r) {
        return scope == og::ScoreScope::kRaw ? r.raw_gap() : r.covered_gap();
      };
      for (std::size_t i = 1; i < ranking.ranked.size(); ++i) {
        EXPECT_GE(*gap(ranking.ranked[i - 1]), *gap(ranking.ranked[i]));
      }
      for (const auto& r : ranking.unranked) EXPECT_FALSE(gap(r));
    }
  }
}

TEST(Ranking, TiesBreakByPath) {
  auto a = tallies("b.py", 10, 10, 10, 5, 10, 5);
  auto b = tallies("a.py", 10, 10, 10, 5, 10, 5);
  auto r = og::rank_by_covered_gap({a, b});
  EXPECT_EQ(r.ranked[0].path, "a.py");
}

TEST(ReportFormats, JsonAndCsvRoundTrip) {
  auto s = og::summarize_project({tallies("b.py", 10, 9, 10, 1, 9, 1),
                                  tallies("a.py", 4, 2, 3, 3, 2, 2)});
  auto doc = og::report_json(s, {});
  EXPECT_EQ(doc["files"][0]["path"], "a.py");
  EXPECT_EQ(doc["ranking"][0], "b.py");
  EXPECT_EQ(doc["suspects"].size(), 1u);
  auto back = og::summary_from_json(doc);
  ASSERT_EQ(back.files.size(), 2u);
  EXPECT_EQ(back.files[0], s.files[1]);
  EXPECT_EQ(back.killed, s.killed);
  auto csv = og::render(s, "csv");
  EXPECT_EQ(csv.rfind(og::csv_header(), 0), 0u);
  EXPECT_LT(csv.find("\na.py"), csv.find("\nb.py"));
  EXPECT_THROW(og::render(s, "yaml"), og::UsageError);
}
