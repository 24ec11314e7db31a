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

#include <cmath>

#include "oracle_gap/metrics.hpp"
#include "test_support.hpp"

namespace og = oracle_gap;
using og::Fraction;
using og::Verdict;

namespace {

og::MutantOutcome outcome(const std::string& id, Verdict v) {
  og::MutantOutcome o;
  o.mutant_id = id;
  o.verdict = v;
  return o;
}

og::Mutant mutant(const std::string& path, std::size_t line, const std::string& id) {
  og::Mutant m;
  m.id = id;
  m.path = path;
  m.line = line;
  m.original = "x";
  m.mutated = "y";
  m.operator_id = "op";
  return m;
}

}  // namespace

TEST(Gap, ReferenceRawGapExamples) {
  EXPECT_NEAR(og::oracle_gap(0.987, 0.758), 22.9, 0.05);
  EXPECT_NEAR(og::oracle_gap(0.900, 0.997), -9.7, 0.05);
  EXPECT_EQ(og::format_one_decimal(og::oracle_gap(Fraction(987, 1000), Fraction(758, 1000))),
            "22.9");
  EXPECT_EQ(og::format_one_decimal(og::oracle_gap(Fraction(900, 1000), Fraction(997, 1000))),
            "-9.7");
}

TEST(Gap, ReferenceCoveredGapExamples) {
  auto g1 = og::covered_oracle_gap(Fraction(810, 1000), Fraction(780, 1000));
  auto g2 = og::covered_oracle_gap(Fraction(600, 1000), Fraction(764, 1000));
  ASSERT_TRUE(g1 && g2);
  EXPECT_EQ(og::format_one_decimal(*g1), "3.0");
  EXPECT_EQ(og::format_one_decimal(*g2), "-16.4");
  EXPECT_EQ(*g1, Fraction(3));
  EXPECT_EQ(*g2, Fraction(-164, 10));
}

TEST(Gap, TrivialCases) {
  EXPECT_EQ(og::oracle_gap(1.0, 1.0), 0.0);
  EXPECT_EQ(og::oracle_gap(Fraction(0), Fraction(1)), Fraction(-100));
  EXPECT_FALSE(og::covered_oracle_gap(0.5, std::nullopt).has_value());
}

TEST(Format, HalfAwayFromZeroOnExactValues) {
  EXPECT_EQ(og::format_one_decimal(Fraction(1, 20)), "0.1");
  EXPECT_EQ(og::format_one_decimal(Fraction(-1, 20)), "-0.1");
  EXPECT_EQ(og::format_one_decimal(Fraction(449, 20)), "22.5");
  EXPECT_EQ(og::format_one_decimal(Fraction(-449, 20)), "-22.5");
  EXPECT_EQ(og::format_one_decimal(Fraction(-1, 25)), "0.0");
  EXPECT_EQ(og::format_one_decimal(Fraction(0)), "0.0");
  EXPECT_EQ(og::format_one_decimal(Fraction(100)), "100.0");
  EXPECT_EQ(og::format_one_decimal(Fraction(1, 3)), "0.3");
  EXPECT_EQ(og::format_one_decimal(-0.04), "0.0");
  EXPECT_EQ(og::format_one_decimal(2.25), "2.3");
  EXPECT_EQ(og::format_one_decimal(-2.25), "-2.3");
}

TEST(Score, CountsTimeoutAsKillByDefaultAndSkipsInvalid) {
  std::vector<og::MutantOutcome> os = {
      outcome("a", Verdict::kKilled), outcome("b", Verdict::kSurvived),
      outcome("c", Verdict::kTimeout), outcome("d", Verdict::kInvalid)};
  EXPECT_EQ(og::mutation_score_exact(os), Fraction(2, 3));
  EXPECT_EQ(og::mutation_score_exact(os, false), Fraction(1, 3));
}

TEST(Score, NoValidMutantsIsUndefined) {
  EXPECT_THROW(og::mutation_score({}), og::UndefinedScoreError);
  EXPECT_THROW(og::mutation_score({outcome("a", Verdict::kInvalid)}),
               og::UndefinedScoreError);
}

TEST(Score, CoveredScoreOnlyCountsCoveredLines) {
  std::vector<og::Mutant> ms = {mutant("f", 1, "a"), mutant("f", 2, "b"),
                                mutant("f", 3, "c")};
  std::vector<og::MutantOutcome> os = {outcome("a", Verdict::kKilled),
                                       outcome("b", Verdict::kSurvived),
                                       outcome("c", Verdict::kKilled)};
  EXPECT_EQ(og::covered_mutation_score_exact(os, ms, {1, 2}), Fraction(1, 2));
  EXPECT_FALSE(og::covered_mutation_score_exact(os, ms, {7}).has_value());
  EXPECT_THROW(og::covered_mutation_score_exact({outcome("zz", Verdict::kKilled)}, ms, {1}),
               og::IntegrityError);
}

TEST(Report, BuildsFromCoverageAndOutcomes) {
  auto cov = og::parse_lcov("SF:f\nDA:1,1\nDA:2,1\nDA:3,0\nDA:4,0\nend_of_record\n");
  std::vector<og::Mutant> ms = {mutant("f", 1, "a"), mutant("f", 3, "b"),
                                mutant("f", 2, "c"), mutant("f", 2, "d")};
  std::vector<og::MutantOutcome> os = {
      outcome("a", Verdict::kKilled), outcome("b", Verdict::kSurvived),
      outcome("c", Verdict::kTimeout), outcome("d", Verdict::kInvalid)};
  auto r = og::build_file_report("f", cov, ms, os);
  EXPECT_EQ(r.coverage(), Fraction(1, 2));
  EXPECT_EQ(r.mutation_score(), Fraction(2, 3));
  EXPECT_EQ(r.covered_mutation_score(), Fraction(1));
  EXPECT_EQ(r.raw_gap(), Fraction(50, 3) * std::int64_t{-1});
  EXPECT_EQ(r.covered_gap(), Fraction(-50));
  EXPECT_EQ(r.timeouts, 1);
  EXPECT_EQ(r.invalid, 1);
  auto strict = og::build_file_report("f", cov, ms, os, false);
  EXPECT_EQ(strict.mutation_score(), Fraction(1, 3));
}

TEST(Report, UninstrumentedFileHasNoGap) {
  og::CoverageMap cov;
  std::vector<og::Mutant> ms = {mutant("f", 1, "a")};
  auto r = og::build_file_report("f", cov, ms, {outcome("a", Verdict::kKilled)});
  EXPECT_FALSE(r.coverage_available);
  EXPECT_TRUE(r.mutation_score().has_value());
  EXPECT_FALSE(r.raw_gap().has_value());
  EXPECT_FALSE(r.covered_gap().has_value());
}

TEST(Report, IntegrityErrors) {
  auto cov = og::parse_lcov("SF:f\nDA:1,1\nend_of_record\n");
  std::vector<og::Mutant> ms = {mutant("f", 1, "a"), mutant("f", 1, "b")};
  EXPECT_THROW(og::build_file_report("f", cov, ms, {outcome("a", Verdict::kKilled)}),
               og::IntegrityError);
  EXPECT_THROW(og::build_file_report("f", cov, ms,
                                     {outcome("a", Verdict::kKilled),
                                      outcome("a", Verdict::kKilled)}),
               og::IntegrityError);
  EXPECT_THROW(og::build_file_report("f", cov, ms,
                                     {outcome("a", Verdict::kKilled),
                                      outcome("b", Verdict::kKilled),
                                      outcome("q", Verdict::kKilled)}),
               og::IntegrityError);
}

TEST(Report, JsonRoundTripsCounts) {
  og::FileGapReport r;
  r.path = "x";
  r.coverage_available = true;
  r.instrumented_lines = 10;
  r.covered_line_count = 7;
  r.mutants_total = 9;
  r.mutants_valid = 8;
  r.mutants_on_covered_lines = 6;
  r.killed = 5;
  r.killed_on_covered_lines = 4;
  r.survived = 3;
  r.invalid = 1;
  auto j = og::to_json(r);
  EXPECT_EQ(j.begin().key(), "path");
  EXPECT_EQ(og::file_report_from_json(j), r);
  EXPECT_NEAR(j["raw_gap"].get<double>(), 100.0 * (0.7 - 5.0 / 8.0), 1e-9);
}

TEST(Summary, WeightsByLinesAndMutants) {
  og::FileGapReport a, b;
  a.path = "a";
  a.coverage_available = true;
  a.instrumented_lines = 10;
  a.covered_line_count = 10;
  a.mutants_valid = a.mutants_total = 2;
  a.killed = 2;
  b.path = "b";
  b.coverage_available = true;
  b.instrumented_lines = 30;
  b.covered_line_count = 0;
  b.mutants_valid = b.mutants_total = 6;
  auto s = og::summarize_project({a, b});
  EXPECT_EQ(s.coverage(), Fraction(1, 4));
  EXPECT_EQ(s.mutation_score(), Fraction(1, 4));
  EXPECT_EQ(s.raw_gap(), Fraction(0));
  EXPECT_THROW(og::summarize_project({}), og::Error);
}

// Random files checked against counts kept independently by the test.
TEST(MetricsProperty, InvariantsHoldOnRandomFiles) {
  og::Rng rng(20260101);
  int checked_dominance = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t lines = 1 + rng.below(40);
    std::string lcov = "SF:f\n";
    std::set<std::size_t> covered;
    for (std::size_t l = 1; l <= lines; ++l) {
      const bool hit = rng.below(100) < 1 + static_cast<std::uint64_t>(trial % 99);
      if (hit) covered.insert(l);
      lcov += "DA:" + std::to_string(l) + "," + (hit ? "1" : "0") + "\n";
    }
    auto cov = og::parse_lcov(lcov + "end_of_record\n");

    const bool no_uncovered_kills = trial % 2 == 0;
    const std::size_t n = 1 + rng.below(60);
    std::vector<og::Mutant> ms;
    std::vector<og::MutantOutcome> os;
    long valid = 0, killed = 0, cvalid = 0, ckilled = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto line = 1 + rng.below(lines);
      const auto id = "m" + std::to_string(i);
      ms.push_back(mutant("f", line, id));
      auto v = static_cast<Verdict>(rng.below(4));
      const bool on_cov = covered.count(line) != 0;
      if (!on_cov && no_uncovered_kills &&
          (v == Verdict::kKilled || v == Verdict::kTimeout)) {
        v = Verdict::kSurvived;
      }
      os.push_back(outcome(id, v));
      if (v == Verdict::kInvalid) continue;
      ++valid;
      const bool det = v != Verdict::kSurvived;
      killed += det;
      if (on_cov) {
        ++cvalid;
        ckilled += det;
      }
    }
    auto r = og::build_file_report("f", cov, ms, os);
    const Fraction coverage(static_cast<std::int64_t>(covered.size()),
                            static_cast<std::int64_t>(lines));
    ASSERT_EQ(r.coverage(), coverage);
    if (valid == 0) {
      ASSERT_FALSE(r.mutation_score());
      continue;
    }
    const Fraction score(killed, valid);
    ASSERT_EQ(r.mutation_score(), score);
    ASSERT_EQ(*r.raw_gap() + *r.mutation_score() * std::int64_t{100},
              *r.coverage() * std::int64_t{100});
    ASSERT_GE(score, Fraction(0));
    ASSERT_LE(score, Fraction(1));
    ASSERT_GE(*r.raw_gap(), Fraction(-100));
    ASSERT_LE(*r.raw_gap(), Fraction(100));
    if (cvalid == 0) {
      ASSERT_FALSE(r.covered_gap());
      continue;
    }
    ASSERT_EQ(r.covered_mutation_score(), Fraction(ckilled, cvalid));
    ASSERT_GE(*r.covered_gap(), Fraction(-100));
    ASSERT_LE(*r.covered_gap(), Fraction(100));
    if (no_uncovered_kills) {
      ASSERT_LE(*r.covered_gap(), *r.raw_gap()) << "trial " << trial;
      ++checked_dominance;
    }
  }
  EXPECT_GT(checked_dominance, 500);
}
