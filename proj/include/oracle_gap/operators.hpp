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

#ifndef ORACLE_GAP_OPERATORS_HPP_
#define ORACLE_GAP_OPERATORS_HPP_

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "oracle_gap/catalog.hpp"
#include "oracle_gap/error.hpp"
#include "oracle_gap/text.hpp"

namespace oracle_gap {

enum class Category {
  kArithmetic,
  kRelational,
  kLogical,
  kConstant,
  kStatementDeletion,
  kControlFlow,
};

inline std::string_view to_string(Category c) {
  switch (c) {
    case Category::kArithmetic: return "arithmetic";
    case Category::kRelational: return "relational";
    case Category::kLogical: return "logical";
    case Category::kConstant: return "constant";
    case Category::kStatementDeletion: return "statement_deletion";
    case Category::kControlFlow: return "control_flow";
  }
  return "?";
}

inline Category parse_category(std::string_view s) {
  for (auto c : {Category::kArithmetic, Category::kRelational,
                 Category::kLogical, Category::kConstant,
                 Category::kStatementDeletion, Category::kControlFlow}) {
    if (to_string(c) == s) return c;
  }
  throw Error("unknown operator category '" + std::string(s) + "'");
}

inline const std::vector<std::string>& supported_languages() {
  static const std::vector<std::string> kTags = {"java", "c",      "cpp",
                                                 "go",   "python", "generic"};
  return kTags;
}

inline void require_language(std::string_view tag) {
  const auto& tags = supported_languages();
  if (std::find(tags.begin(), tags.end(), tag) != tags.end()) return;
  std::string msg = "unknown language tag '" + std::string(tag) +
                    "'; supported tags:";
  for (const auto& t : tags) msg += " " + t;
  throw UsageError(msg);
}

struct MutationOperator {
  std::string id;
  std::string match_pattern;
  std::vector<std::string> replacements;
  std::vector<std::string> languages;
  Category category = Category::kArithmetic;

  bool applies_to(std::string_view tag) const {
    return std::any_of(languages.begin(), languages.end(),
                       [&](const std::string& l) {
                         return l == tag || l == "generic";
                       });
  }
};

struct Mutant {
  std::string id;
  std::string path;
  std::size_t line = 0;  // 1-based
  std::string original;
  std::string mutated;
  std::string operator_id;

  bool operator==(const Mutant&) const = default;
};

inline std::string make_mutant_id(std::string_view path, std::size_t line,
                                  std::string_view operator_id,
                                  std::size_t occurrence,
                                  std::size_t replacement) {
  std::ostringstream ss;
  ss << path << ':' << line << ':' << operator_id << ':' << occurrence << ':'
     << replacement;
  return ss.str();
}

inline void to_json(nlohmann::ordered_json& j, const Mutant& m) {
  j = nlohmann::ordered_json{{"id", m.id},
                             {"path", m.path},
                             {"line", m.line},
                             {"operator_id", m.operator_id},
                             {"original", m.original},
                             {"mutated", m.mutated}};
}

inline void from_json(const nlohmann::ordered_json& j, Mutant& m) {
  j.at("id").get_to(m.id);
  j.at("path").get_to(m.path);
  j.at("line").get_to(m.line);
  j.at("operator_id").get_to(m.operator_id);
  j.at("original").get_to(m.original);
  j.at("mutated").get_to(m.mutated);
}

inline void to_json(nlohmann::ordered_json& j, const MutationOperator& op) {
  j = nlohmann::ordered_json{{"id", op.id},
                             {"match_pattern", op.match_pattern},
                             {"replacements", op.replacements},
                             {"languages", op.languages},
                             {"category", std::string(to_string(op.category))}};
}

inline void from_json(const nlohmann::ordered_json& j, MutationOperator& op) {
  j.at("id").get_to(op.id);
  j.at("match_pattern").get_to(op.match_pattern);
  j.at("replacements").get_to(op.replacements);
  j.at("languages").get_to(op.languages);
  op.category = parse_category(j.at("category").get<std::string>());
}

namespace detail {

inline std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline void validate_catalog(const std::vector<MutationOperator>& ops) {
  std::set<std::string> seen;
  for (const auto& op : ops) {
    if (op.id.empty()) throw Error("operator with empty id");
    if (!seen.insert(op.id).second) {
      throw Error("duplicate operator id '" + op.id + "'");
    }
    if (op.replacements.empty()) {
      throw Error("operator '" + op.id + "' has no replacements");
    }
    if (op.languages.empty()) {
      throw Error("operator '" + op.id + "' has no languages");
    }
    for (const auto& l : op.languages) require_language(l);
    try {
      std::regex re(op.match_pattern, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      throw Error("operator '" + op.id + "' has an invalid pattern: " +
                  e.what());
    }
  }
}

}  // namespace detail

inline std::vector<MutationOperator> builtin_catalog() {
  std::vector<MutationOperator> ops;
  for (const auto& e : catalog::kBuiltin) {
    MutationOperator op;
    op.id = e.id;
    op.category = parse_category(e.category);
    op.languages = detail::split_words(e.languages);
    op.match_pattern = e.pattern;
    for (auto r : e.replacements) op.replacements.emplace_back(r);
    ops.push_back(std::move(op));
  }
  return ops;
}

// A user catalog is a JSON array of operator objects (same shape as
// MutationOperator).
inline std::vector<MutationOperator> read_catalog_file(
    const std::filesystem::path& path) {
  auto doc = nlohmann::ordered_json::parse(read_file(path));
  if (!doc.is_array()) throw Error(path.string() + ": catalog must be an array");
  auto ops = doc.get<std::vector<MutationOperator>>();
  detail::validate_catalog(ops);
  return ops;
}

inline std::vector<MutationOperator> select_operators(
    const std::vector<MutationOperator>& catalog, std::string_view tag) {
  require_language(tag);
  std::vector<MutationOperator> out;
  for (const auto& op : catalog) {
    if (op.applies_to(tag)) out.push_back(op);
  }
  return out;
}

// Operators applicable to `language_tag`, in catalog order.
inline std::vector<MutationOperator> load_operator_catalog(
    std::string_view language_tag) {
  return select_operators(builtin_catalog(), language_tag);
}

// Lines matching any of these are skipped when --exclude-logging is on.
inline std::vector<std::string> default_logging_exclusions() {
  return {
      R"(\blog(ger)?\.)",          R"(\bLOG(GER)?\b)",
      R"(\b(s|sn|f|v)?printf\s*\()", R"(System\.(out|err)\.print)",
      R"(\bprint\s*\()",           R"(\bfmt\.(Print|Fprint|Sprint))",
      R"(std::(cout|cerr|clog)\b)", R"(\blogging\.)",
  };
}

struct LanguageSyntax {
  std::vector<std::string> skip_prefixes;   // whole-line comments
  std::vector<std::string> trailing_comments;
  std::string quotes;
};

inline LanguageSyntax language_syntax(std::string_view tag) {
  if (tag == "python") return {{"#"}, {"#"}, "\"'"};
  if (tag == "c" || tag == "cpp") return {{"//", "#", "/*"}, {"//"}, "\"'"};
  if (tag == "java") return {{"//", "/*"}, {"//"}, "\"'"};
  if (tag == "go") return {{"//", "/*"}, {"//"}, "\"'`"};
  return {{"//", "#", "--"}, {"//", "#"}, "\"'"};
}

inline bool is_comment_only(std::string_view line, const LanguageSyntax& syn) {
  auto t = trim(line);
  if (t.empty()) return true;
  return std::any_of(syn.skip_prefixes.begin(), syn.skip_prefixes.end(),
                     [&](const std::string& p) { return starts_with(t, p); });
}

namespace detail {

// true for characters that are live code: not inside a string literal
// (delimiters themselves count as code) and not in a trailing comment.
inline std::vector<bool> code_mask(std::string_view line,
                                   const LanguageSyntax& syn) {
  std::vector<bool> mask(line.size(), true);
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quote) {
      if (c == quote) {
        quote = 0;
        continue;
      }
      mask[i] = false;
      if (c == '\\' && quote != '`' && i + 1 < line.size()) mask[++i] = false;
      continue;
    }
    if (syn.quotes.find(c) != std::string::npos) {
      quote = c;
      continue;
    }
    for (const auto& tc : syn.trailing_comments) {
      if (line.substr(i, tc.size()) == tc) {
        std::fill(mask.begin() + static_cast<std::ptrdiff_t>(i), mask.end(),
                  false);
        return mask;
      }
    }
  }
  return mask;
}

// Expands ${+1}/${-1} against capture group 1, then the std::regex format
// escapes. Empty optional when the capture is not an integer.
inline std::optional<std::string> expand_template(const std::smatch& m,
                                                  const std::string& tmpl) {
  std::string t = tmpl;
  for (auto [token, delta] : {std::pair<std::string_view, long long>{"${+1}", 1},
                              {"${-1}", -1}}) {
    auto pos = t.find(token);
    if (pos == std::string::npos) continue;
    if (m.size() < 2 || !m[1].matched) return std::nullopt;
    auto digits = m[1].str();
    long long v = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
      return std::nullopt;
    }
    auto repl = std::to_string(v + delta);
    while (pos != std::string::npos) {
      t.replace(pos, token.size(), repl);
      pos = t.find(token, pos + repl.size());
    }
  }
  return m.format(t);
}

}  // namespace detail

// Every (line, operator, occurrence, replacement) rewrite of `source_text`.
// Ordered by line, then catalog order, occurrence, replacement index. A
// rewrite that reproduces a mutant already emitted for the same line is
// dropped.
inline std::vector<Mutant> generate_mutants(
    std::string_view source_text, std::string_view path,
    const std::vector<MutationOperator>& operators,
    const std::vector<std::string>& exclusions,
    std::string_view language = "generic") {
  require_language(language);
  const auto syn = language_syntax(language);

  std::vector<std::regex> compiled;
  compiled.reserve(operators.size());
  for (const auto& op : operators) {
    compiled.emplace_back(op.match_pattern, std::regex::ECMAScript);
  }
  std::vector<std::regex> excluded;
  for (const auto& e : exclusions) {
    excluded.emplace_back(e, std::regex::ECMAScript);
  }

  std::vector<Mutant> out;
  const auto src = split_lines(source_text);
  for (std::size_t idx = 0; idx < src.lines.size(); ++idx) {
    const std::string& original = src.lines[idx];
    if (is_comment_only(original, syn)) continue;
    if (std::any_of(excluded.begin(), excluded.end(), [&](const std::regex& r) {
          return std::regex_search(original, r);
        })) {
      continue;
    }
    std::string body = original;
    std::string eol;
    if (!body.empty() && body.back() == '\r') {
      body.pop_back();
      eol = "\r";
    }
    const auto mask = detail::code_mask(body, syn);
    std::set<std::string> seen;
    const std::size_t line_no = idx + 1;

    for (std::size_t k = 0; k < operators.size(); ++k) {
      const auto& op = operators[k];
      std::size_t occurrence = 0;
      for (auto it = std::sregex_iterator(body.begin(), body.end(), compiled[k]);
           it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        const auto pos = static_cast<std::size_t>(m.position(0));
        const auto len = static_cast<std::size_t>(m.length(0));
        if (len == 0) continue;
        if (!mask[pos] || !mask[pos + len - 1]) continue;
        const std::size_t occ = occurrence++;
        for (std::size_t r = 0; r < op.replacements.size(); ++r) {
          auto repl = detail::expand_template(m, op.replacements[r]);
          if (!repl) continue;
          std::string mutated =
              body.substr(0, pos) + *repl + body.substr(pos + len) + eol;
          if (mutated == original || !seen.insert(mutated).second) continue;
          Mutant mu;
          mu.path = std::string(path);
          mu.line = line_no;
          mu.original = original;
          mu.mutated = std::move(mutated);
          mu.operator_id = op.id;
          mu.id = make_mutant_id(path, line_no, op.id, occ, r);
          out.push_back(std::move(mu));
        }
      }
    }
  }
  return out;
}

// Replaces line `mutant.line` and nothing else.
inline std::string apply_mutant(std::string_view source_text,
                                const Mutant& mutant) {
  auto src = split_lines(source_text);
  if (mutant.line == 0 || mutant.line > src.lines.size()) {
    throw StaleMutantError("stale mutant " + mutant.id + ": line " +
                           std::to_string(mutant.line) + " out of range");
  }
  auto& line = src.lines[mutant.line - 1];
  if (line != mutant.original) {
    throw StaleMutantError("stale mutant " + mutant.id +
                           ": source line no longer matches");
  }
  line = mutant.mutated;
  return join_lines(src);
}

inline std::string write_mutants_jsonl(const std::vector<Mutant>& mutants) {
  std::string out;
  for (const auto& m : mutants) {
    out += nlohmann::ordered_json(m).dump();
    out += '\n';
  }
  return out;
}

inline std::vector<Mutant> read_mutants_jsonl(std::string_view text,
                                              const std::string& source =
                                                  "mutants.jsonl") {
  std::vector<Mutant> out;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(text).lines) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(nlohmann::ordered_json::parse(line).get<Mutant>());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  return out;
}

}  // namespace oracle_gap

#endif  // ORACLE_GAP_OPERATORS_HPP_
