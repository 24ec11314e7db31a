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

#include "oracle_gap/operators.hpp"
#include "test_support.hpp"

namespace og = oracle_gap;

namespace {

std::vector<og::Mutant> gen(const std::string& src, const std::string& lang,
                            const std::vector<std::string>& excl = {}) {
  return og::generate_mutants(src, "f", og::load_operator_catalog(lang), excl, lang);
}

std::vector<std::string> mutated_lines(const std::vector<og::Mutant>& ms) {
  std::vector<std::string> out;
  for (const auto& m : ms) out.push_back(m.mutated);
  return out;
}

bool has(const std::vector<og::Mutant>& ms, const std::string& mutated) {
  return std::any_of(ms.begin(), ms.end(),
                     [&](const og::Mutant& m) { return m.mutated == mutated; });
}

}  // namespace

TEST(Catalog, BuiltinIsValidAndCoversEveryCategory) {
  auto ops = og::builtin_catalog();
  EXPECT_NO_THROW(og::detail::validate_catalog(ops));
  std::set<og::Category> cats;
  std::set<std::string> ids;
  for (const auto& op : ops) {
    cats.insert(op.category);
    EXPECT_TRUE(ids.insert(op.id).second) << "duplicate id " << op.id;
    EXPECT_FALSE(op.replacements.empty()) << op.id;
  }
  EXPECT_EQ(cats.size(), 6u);
}

TEST(Catalog, EverySupportedLanguageGetsOperators) {
  for (const auto& tag : og::supported_languages()) {
    EXPECT_FALSE(og::load_operator_catalog(tag).empty()) << tag;
  }
}

TEST(Catalog, UnknownLanguageListsSupportedTags) {
  try {
    og::load_operator_catalog("cobol");
    FAIL() << "expected UsageError";
  } catch (const og::UsageError& e) {
    std::string msg = e.what();
    for (const auto& tag : og::supported_languages()) {
      EXPECT_NE(msg.find(tag), std::string::npos) << tag;
    }
  }
}

TEST(Catalog, GenericOperatorsApplyEverywhere) {
  auto py = og::load_operator_catalog("python");
  auto go = og::load_operator_catalog("go");
  auto has_id = [](const auto& ops, const std::string& id) {
    return std::any_of(ops.begin(), ops.end(), [&](const auto& o) { return o.id == id; });
  };
  EXPECT_TRUE(has_id(py, "aor_add"));
  EXPECT_TRUE(has_id(go, "aor_add"));
  EXPECT_TRUE(has_id(py, "sdl_py"));
  EXPECT_FALSE(has_id(py, "sdl"));
  EXPECT_FALSE(has_id(py, "lor_and"));
  EXPECT_TRUE(has_id(go, "lor_and"));
}

TEST(Catalog, UserCatalogFileRoundTripsAndValidates) {
  og_test::TempDir dir;
  nlohmann::ordered_json doc = og::builtin_catalog();
  og_test::put(dir / "cat.json", doc.dump());
  auto back = og::read_catalog_file(dir / "cat.json");
  ASSERT_EQ(back.size(), og::builtin_catalog().size());
  EXPECT_EQ(back.front().id, og::builtin_catalog().front().id);

  og_test::put(dir / "bad.json",
               R"([{"id":"x","match_pattern":"(","replacements":["y"],)"
               R"("languages":["generic"],"category":"arithmetic"}])");
  EXPECT_THROW(og::read_catalog_file(dir / "bad.json"), og::Error);
}

TEST(Generate, ArithmeticOnOneLine) {
  auto ms = gen("x = a + b\n", "generic");
  EXPECT_TRUE(has(ms, "x = a - b"));
  EXPECT_TRUE(has(ms, "x = a * b"));
  for (const auto& m : ms) {
    EXPECT_EQ(m.line, 1u);
    EXPECT_EQ(m.original, "x = a + b");
  }
}

TEST(Generate, NoMatchesYieldsEmpty) {
  EXPECT_TRUE(gen("hello world\n", "generic").empty());
  EXPECT_TRUE(gen("", "generic").empty());
}

TEST(Generate, SkipsCommentOnlyLines) {
  EXPECT_TRUE(gen("// a + b\n", "java").empty());
  EXPECT_TRUE(gen("# a + b\n", "python").empty());
  EXPECT_TRUE(gen("   /* a + b */\n", "c").empty());
}

TEST(Generate, IgnoresStringContentsAndTrailingComments) {
  auto ms = gen("s = \"a + b\"  # c + d\n", "python");
  for (const auto& m : ms) {
    EXPECT_NE(m.operator_id, "aor_add") << m.mutated;
  }
  auto java = gen("int x = y; // y + 1\n", "java");
  for (const auto& m : java) EXPECT_NE(m.operator_id, "aor_add");
}

TEST(Generate, RelationalAndLogical) {
  auto ms = gen("if (a < b && c) {\n", "java");
  EXPECT_TRUE(has(ms, "if (a <= b && c) {"));
  EXPECT_TRUE(has(ms, "if (a > b && c) {"));
  EXPECT_TRUE(has(ms, "if (a < b || c) {"));
  EXPECT_TRUE(has(ms, "if (!(a < b && c)) {"));
  EXPECT_TRUE(has(ms, "if (true) {"));
  EXPECT_TRUE(has(ms, "if (false) {"));
}

TEST(Generate, ConstantsShiftByOne) {
  auto ms = gen("n = 41\n", "generic");
  EXPECT_TRUE(has(ms, "n = 42"));
  EXPECT_TRUE(has(ms, "n = 40"));
}

TEST(Generate, StatementDeletionKeepsLineCount) {
  auto ms = gen("    total = total + 1\n", "python");
  EXPECT_TRUE(has(ms, "    pass  # deleted"));
  auto c = gen("  foo(x);\n", "c");
  EXPECT_TRUE(has(c, "  // deleted"));
}

TEST(Generate, DropsDuplicateRewritesOfOneLine) {
  auto ms = gen("x = 0\n", "generic");
  auto lines = mutated_lines(ms);
  std::set<std::string> unique(lines.begin(), lines.end());
  EXPECT_EQ(unique.size(), lines.size());
  EXPECT_TRUE(has(ms, "x = 1"));   // from crp_zero; crp_int's +1 is the same text
  EXPECT_TRUE(has(ms, "x = -1"));
}

TEST(Generate, OrderAndIdsAreStable) {
  const std::string src = "a = b + c\nif x > 1:\n    y = 2\n";
  auto first = gen(src, "python");
  auto second = gen(src, "python");
  EXPECT_EQ(first, second);
  for (std::size_t i = 1; i < first.size(); ++i) {
    EXPECT_LE(first[i - 1].line, first[i].line);
  }
  std::set<std::string> ids;
  for (const auto& m : first) EXPECT_TRUE(ids.insert(m.id).second) << m.id;
  EXPECT_EQ(first.front().id.rfind("f:1:", 0), 0u);
}

TEST(Generate, LoggingExclusionSkipsLines) {
  const std::string src = "logger.info(a + b)\nz = a + b\n";
  auto ms = gen(src, "generic", og::default_logging_exclusions());
  for (const auto& m : ms) EXPECT_EQ(m.line, 2u);
}

TEST(Generate, PreservesCarriageReturn) {
  auto ms = gen("x = a + b\r\ny = 1\r\n", "generic");
  ASSERT_FALSE(ms.empty());
  EXPECT_EQ(ms.front().original, "x = a + b\r");
  EXPECT_EQ(ms.front().mutated.back(), '\r');
  auto text = og::apply_mutant("x = a + b\r\ny = 1\r\n", ms.front());
  EXPECT_EQ(text, ms.front().mutated + "\ny = 1\r\n");
}

TEST(Apply, ReplacesExactlyOneLine) {
  const std::string src = "a\nx = a + b\nc";
  auto ms = gen(src, "generic");
  ASSERT_FALSE(ms.empty());
  auto out = og::apply_mutant(src, ms.front());
  auto lines = og::split_lines(out);
  ASSERT_EQ(lines.lines.size(), 3u);
  EXPECT_FALSE(lines.trailing_newline);
  EXPECT_EQ(lines.lines[0], "a");
  EXPECT_EQ(lines.lines[1], ms.front().mutated);
  EXPECT_EQ(lines.lines[2], "c");
}

TEST(Apply, StaleMutantIsRejected) {
  auto ms = gen("x = a + b\n", "generic");
  ASSERT_FALSE(ms.empty());
  EXPECT_THROW(og::apply_mutant("x = a - b\n", ms.front()), og::StaleMutantError);
  auto far = ms.front();
  far.line = 9;
  EXPECT_THROW(og::apply_mutant("x = a + b\n", far), og::StaleMutantError);
}

TEST(Apply, EveryGeneratedMutantAppliesAndDiffersOnItsLineOnly) {
  const std::string src =
      "def f(a, b):\n"
      "    if a > b and b != 0:\n"
      "        return a % b\n"
      "    return a * 2 - b\n";
  const auto before = og::split_lines(src);
  for (const auto& m : gen(src, "python")) {
    auto after = og::split_lines(og::apply_mutant(src, m));
    ASSERT_EQ(after.lines.size(), before.lines.size());
    for (std::size_t i = 0; i < before.lines.size(); ++i) {
      if (i + 1 == m.line) {
        EXPECT_NE(after.lines[i], before.lines[i]);
      } else {
        EXPECT_EQ(after.lines[i], before.lines[i]);
      }
    }
  }
}

TEST(Jsonl, RoundTrip) {
  auto ms = gen("x = \"q\" + y\n", "generic");
  auto text = og::write_mutants_jsonl(ms);
  EXPECT_EQ(og::read_mutants_jsonl(text, "m.jsonl"), ms);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'),
            static_cast<long>(ms.size()));
}

TEST(Jsonl, MalformedLineReportsLineNumber) {
  try {
    og::read_mutants_jsonl("{\"id\":\"a\"}\n", "m.jsonl");
    FAIL();
  } catch (const og::ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}
