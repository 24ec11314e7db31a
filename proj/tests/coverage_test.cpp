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

#include "oracle_gap/coverage.hpp"
#include "test_support.hpp"

namespace og = oracle_gap;

TEST(Lcov, ParsesFilesAndHits) {
  auto map = og::parse_lcov(
      "TN:t\nSF:src/a.c\nFN:1,main\nDA:1,3\nDA:2,0\nDA:5,1,abcd\nLF:3\nLH:2\n"
      "end_of_record\nSF:./src/b.c\nDA:7,0\nend_of_record\n");
  ASSERT_EQ(map.entries.size(), 2u);
  const auto& a = map.entries.at("src/a.c");
  EXPECT_EQ(a.instrumented_count(), 3u);
  EXPECT_EQ(a.covered_count(), 2u);
  EXPECT_EQ(a.covered(), (std::set<std::size_t>{1, 5}));
  EXPECT_EQ(map.entries.at("src/b.c").covered_count(), 0u);
  EXPECT_DOUBLE_EQ(og::file_line_coverage(map, "src/a.c"), 2.0 / 3.0);
}

TEST(Lcov, SumsDuplicateRecordsAcrossTestNames) {
  auto map = og::parse_lcov(
      "SF:a\nDA:1,0\nDA:2,1\nend_of_record\nSF:a\nDA:1,2\nDA:3,0\nend_of_record\n");
  const auto& a = map.entries.at("a");
  EXPECT_EQ(a.hits.at(1), 2u);
  EXPECT_EQ(a.instrumented_count(), 3u);
  EXPECT_EQ(a.covered_count(), 2u);
}

TEST(Lcov, IgnoresSummaryCountsThatDisagree) {
  auto map = og::parse_lcov("SF:a\nDA:1,1\nDA:2,0\nLF:99\nLH:42\nend_of_record\n");
  EXPECT_EQ(map.entries.at("a").instrumented_count(), 2u);
  EXPECT_EQ(map.entries.at("a").covered_count(), 1u);
}

TEST(Lcov, RelativizesAbsolutePathsUnderRoot) {
  auto map = og::parse_lcov("SF:/work/repo/src/x.go\nDA:1,1\nend_of_record\n",
                            "t", "/work/repo");
  EXPECT_TRUE(map.contains("src/x.go"));
}

TEST(Lcov, MalformedDaIsRejectedWithLineNumber) {
  struct Case {
    std::string text;
    std::size_t line;
  };
  for (const auto& c : std::vector<Case>{
           {"SF:a\nDA:1,1\nDA:x,1\nend_of_record\n", 3},
           {"SF:a\nDA:0,1\n", 2},
           {"SF:a\nDA:4\n", 2},
           {"SF:a\nDA:4,-1\n", 2},
           {"TN:\nDA:1,1\n", 2},
           {"SF:a\nDA:1,1\nend_of_record\nSF:b\n\nDA:3,\n", 6},
       }) {
    try {
      og::parse_lcov(c.text, "cov.info");
      ADD_FAILURE() << "accepted: " << c.text;
    } catch (const og::ParseError& e) {
      EXPECT_EQ(e.line(), c.line) << c.text;
      EXPECT_NE(std::string(e.what()).find("cov.info:" + std::to_string(c.line)),
                std::string::npos);
    }
  }
}

TEST(Lcov, RequireFileDistinguishesMissingAndUninstrumented) {
  auto map = og::parse_lcov("SF:a\nend_of_record\nSF:b\nDA:1,1\nend_of_record\n");
  EXPECT_THROW(og::require_file(map, "zzz"), og::NoCoverageDataError);
  EXPECT_THROW(og::require_file(map, "a"), og::NoCoverageDataError);
  EXPECT_NO_THROW(og::require_file(map, "b"));
}

TEST(Lcov, RenderIsCanonicalAndAFixedPoint) {
  const std::string messy =
      "TN:x\nSF:z.c\nDA:3,1\nDA:1,0\nend_of_record\nSF:a.c\nDA:2,5\nend_of_record\n";
  auto once = og::render_lcov(og::parse_lcov(messy));
  EXPECT_EQ(once,
            "SF:a.c\nDA:2,5\nLF:1\nLH:1\nend_of_record\n"
            "SF:z.c\nDA:1,0\nDA:3,1\nLF:2\nLH:1\nend_of_record\n");
  EXPECT_EQ(og::render_lcov(og::parse_lcov(once)), once);
}

TEST(Lcov, FixtureTracefilesRoundTrip) {
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(og_test::fixtures_dir())) {
    const auto file = entry.path() / "coverage.lcov";
    if (!std::filesystem::exists(file)) continue;
    ++seen;
    const auto parsed = og::read_lcov_file(file);
    const auto rendered = og::render_lcov(parsed);
    const auto reparsed = og::parse_lcov(rendered);
    EXPECT_EQ(reparsed.entries.size(), parsed.entries.size()) << file;
    for (const auto& [path, fc] : parsed.entries) {
      EXPECT_EQ(reparsed.entries.at(path).hits, fc.hits) << file << " " << path;
    }
    EXPECT_EQ(og::render_lcov(reparsed), rendered) << file;
  }
  EXPECT_GE(seen, 4u);
}

TEST(Lcov, MergeAddsHits) {
  auto a = og::parse_lcov("SF:f\nDA:1,1\nDA:2,0\nend_of_record\n");
  auto b = og::parse_lcov("SF:f\nDA:2,3\nend_of_record\nSF:g\nDA:9,0\nend_of_record\n");
  og::merge_into(a, b);
  EXPECT_EQ(a.entries.at("f").hits.at(2), 3u);
  EXPECT_TRUE(a.contains("g"));
}
