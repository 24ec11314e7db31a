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

#ifndef ORACLE_GAP_REPORT_HPP_
#define ORACLE_GAP_REPORT_HPP_

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "oracle_gap/error.hpp"
#include "oracle_gap/metrics.hpp"

namespace oracle_gap {

enum class ScoreScope { kRaw, kCovered };

inline ScoreScope parse_score_scope(std::string_view s) {
  if (s == "raw") return ScoreScope::kRaw;
  if (s == "covered") return ScoreScope::kCovered;
  throw UsageError("unknown score scope '" + std::string(s) +
                   "' (expected raw or covered)");
}

inline std::string_view to_string(ScoreScope s) {
  return s == ScoreScope::kRaw ? "raw" : "covered";
}

// High coverage with a low score: the tests run this file but barely check it.
struct SuspectRule {
  double min_coverage = 0.80;
  double max_mutation_score = 0.20;
  ScoreScope scope = ScoreScope::kRaw;

  void validate() const {
    if (!(min_coverage > max_mutation_score)) {
      throw UsageError("suspect rule needs min_coverage > max_mutation_score");
    }
  }
};

struct Suspect {
  std::string path;
  double coverage = 0;
  double mutation_score = 0;
};

inline std::vector<Suspect> flag_suspects(const std::vector<FileGapReport>& reports,
                                          const SuspectRule& rule = {}) {
  rule.validate();
  std::vector<Suspect> out;
  for (const auto& r : reports) {
    auto c = r.coverage();
    auto m = rule.scope == ScoreScope::kRaw ? r.mutation_score()
                                            : r.covered_mutation_score();
    if (!c || !m) continue;
    const double cov = to_double(*c);
    const double score = to_double(*m);
    if (cov > rule.min_coverage && score < rule.max_mutation_score) {
      out.push_back({r.path, cov, score});
    }
  }
  return out;
}

struct Ranking {
  std::vector<FileGapReport> ranked;    // gap defined, descending
  std::vector<FileGapReport> unranked;  // gap absent, by path
};

inline Ranking rank_by_gap(std::vector<FileGapReport> reports,
                           ScoreScope scope) {
  auto key = [scope](const FileGapReport& r) {
    return scope == ScoreScope::kRaw ? r.raw_gap() : r.covered_gap();
  };
  Ranking out;
  for (auto& r : reports) {
    (key(r) ? out.ranked : out.unranked).push_back(std::move(r));
  }
  std::sort(out.ranked.begin(), out.ranked.end(),
            [&](const FileGapReport& a, const FileGapReport& b) {
              auto ga = *key(a), gb = *key(b);
              if (ga != gb) return ga > gb;
              return a.path < b.path;
            });
  std::sort(out.unranked.begin(), out.unranked.end(),
            [](const FileGapReport& a, const FileGapReport& b) {
              return a.path < b.path;
            });
  return out;
}

inline Ranking rank_by_covered_gap(std::vector<FileGapReport> reports) {
  return rank_by_gap(std::move(reports), ScoreScope::kCovered);
}

// ---------------------------------------------------------------------------
// Rendering

enum class ReportFormat { kText, kJson, kCsv };

inline ReportFormat parse_report_format(std::string_view s) {
  if (s == "text") return ReportFormat::kText;
  if (s == "json") return ReportFormat::kJson;
  if (s == "csv") return ReportFormat::kCsv;
  throw UsageError("unknown report format '" + std::string(s) +
                   "' (expected text, json or csv)");
}

namespace detail {

inline constexpr std::string_view kAbsent = "-";
inline constexpr std::size_t kNumWidth = 6;

inline std::string pad_left(std::string_view s, std::size_t display_width,
                            std::size_t width) {
  std::string out;
  if (display_width < width) out.assign(width - display_width, ' ');
  out += s;
  return out;
}

inline std::string cell(const std::optional<Fraction>& pct) {
  if (!pct) return pad_left(kAbsent, 1, kNumWidth);
  auto s = format_one_decimal(*pct);
  return pad_left(s, s.size(), kNumWidth);
}

inline std::optional<Fraction> as_pct(const std::optional<Fraction>& f) {
  if (!f) return std::nullopt;
  return *f * std::int64_t{100};
}

inline std::string pct_text(double fraction) {
  return format_one_decimal(100.0 * fraction) + "%";
}

}  // namespace detail

// path, coverage%, mutation%, covered-mutation%, raw gap, covered gap.
inline std::string render_row(const FileGapReport& r, std::size_t path_width) {
  std::string row = r.path;
  if (row.size() < path_width) row.append(path_width - row.size(), ' ');
  row += detail::cell(detail::as_pct(r.coverage()));
  row += detail::cell(detail::as_pct(r.mutation_score()));
  row += detail::cell(detail::as_pct(r.covered_mutation_score()));
  row += detail::cell(r.raw_gap());
  row += detail::cell(r.covered_gap());
  return row;
}

inline std::string render_table(const Ranking& ranking, ScoreScope key) {
  std::size_t width = 4;
  for (const auto* v : {&ranking.ranked, &ranking.unranked}) {
    for (const auto& r : *v) width = std::max(width, r.path.size());
  }
  width += 2;
  std::string head = "path";
  head.append(width - head.size(), ' ');
  for (auto col : {"cov%", "mut%", "cmut%", "rgap", "cgap"}) {
    head += detail::pad_left(col, std::string_view(col).size(), detail::kNumWidth);
  }
  std::string out = "ranked by " + std::string(to_string(key)) + " gap:\n";
  out += head + "\n";
  for (const auto& r : ranking.ranked) out += render_row(r, width) + "\n";
  if (!ranking.unranked.empty()) {
    out += "\nno " + std::string(to_string(key)) + " gap:\n";
    for (const auto& r : ranking.unranked) out += render_row(r, width) + "\n";
  }
  return out;
}

inline std::string render_text(const ProjectGapSummary& s,
                               const SuspectRule& rule) {
  std::string out = "oracle gap report\n";
  if (s.files.empty()) {
    out += "no analyzable files\n";
    return out;
  }
  out += "files: " + std::to_string(s.files.size()) + " analyzed, " +
         std::to_string(s.uninstrumented.size()) + " uninstrumented\n";
  auto pct = [](const std::optional<Fraction>& f) {
    return f ? format_one_decimal(*f * std::int64_t{100}) + "%"
             : std::string(detail::kAbsent);
  };
  auto pts = [](const std::optional<Fraction>& f) {
    return f ? format_one_decimal(*f) : std::string(detail::kAbsent);
  };
  out += "coverage " + pct(s.coverage()) + "  mutation score " +
         pct(s.mutation_score()) + "  covered mutation score " +
         pct(s.covered_mutation_score()) + "\n";
  out += "raw gap " + pts(s.raw_gap()) + "  covered gap " + pts(s.covered_gap()) +
         "  (" + std::to_string(s.mutants_valid) + " valid of " +
         std::to_string(s.mutants_total) + " mutants; TIMEOUT " +
         (s.timeout_as_kill ? "counts as killed" : "not counted") + ")\n\n";
  out += render_table(rank_by_covered_gap(s.files), ScoreScope::kCovered);

  if (!s.uninstrumented.empty()) {
    out += "\nuninstrumented (no coverage data):\n";
    for (const auto& p : s.uninstrumented) out += "  " + p + "\n";
  }
  out += "\nsuspects (coverage > " + detail::pct_text(rule.min_coverage) + ", " +
         std::string(to_string(rule.scope)) + " mutation score < " +
         detail::pct_text(rule.max_mutation_score) + "):\n";
  auto suspects = flag_suspects(s.files, rule);
  if (suspects.empty()) out += "  none\n";
  for (const auto& sp : suspects) {
    out += "  " + sp.path + "  coverage " + detail::pct_text(sp.coverage) +
           "  mutation score " + detail::pct_text(sp.mutation_score) + "\n";
  }
  return out;
}

inline nlohmann::ordered_json report_json(const ProjectGapSummary& s,
                                          const SuspectRule& rule) {
  nlohmann::ordered_json doc;
  doc["summary"] = summary_json(s);
  auto files = nlohmann::ordered_json::array();
  auto sorted = s.files;
  std::sort(sorted.begin(), sorted.end(),
            [](const FileGapReport& a, const FileGapReport& b) {
              return a.path < b.path;
            });
  for (const auto& r : sorted) files.push_back(to_json(r));
  doc["files"] = files;
  auto ranking = rank_by_covered_gap(s.files);
  auto order = nlohmann::ordered_json::array();
  for (const auto& r : ranking.ranked) order.push_back(r.path);
  for (const auto& r : ranking.unranked) order.push_back(r.path);
  doc["ranking"] = order;
  doc["uninstrumented"] = s.uninstrumented;
  doc["suspect_rule"] = {{"min_coverage", rule.min_coverage},
                         {"max_mutation_score", rule.max_mutation_score},
                         {"scope", std::string(to_string(rule.scope))}};
  auto suspects = nlohmann::ordered_json::array();
  for (const auto& sp : flag_suspects(s.files, rule)) {
    suspects.push_back({{"path", sp.path},
                        {"coverage", sp.coverage},
                        {"mutation_score", sp.mutation_score}});
  }
  doc["suspects"] = suspects;
  return doc;
}

inline ProjectGapSummary summary_from_json(const nlohmann::ordered_json& doc) {
  std::vector<FileGapReport> files;
  for (const auto& f : doc.at("files")) files.push_back(file_report_from_json(f));
  const bool tak = doc.at("summary").value("timeout_as_kill", true);
  ProjectGapSummary s;
  if (!files.empty()) s = summarize_project(std::move(files), tak);
  s.timeout_as_kill = tak;
  if (doc.contains("uninstrumented")) {
    doc.at("uninstrumented").get_to(s.uninstrumented);
  }
  return s;
}

inline std::string render(const ProjectGapSummary& summary, ReportFormat format,
                          const SuspectRule& rule = {}) {
  switch (format) {
    case ReportFormat::kText: return render_text(summary, rule);
    case ReportFormat::kJson: return report_json(summary, rule).dump(2) + "\n";
    case ReportFormat::kCsv: {
      auto sorted = summary.files;
      std::sort(sorted.begin(), sorted.end(),
                [](const FileGapReport& a, const FileGapReport& b) {
                  return a.path < b.path;
                });
      std::string out = csv_header();
      for (const auto& r : sorted) out += csv_row(r);
      return out;
    }
  }
  throw UsageError("unknown report format");
}

inline std::string render(const ProjectGapSummary& summary,
                          std::string_view format,
                          const SuspectRule& rule = {}) {
  return render(summary, parse_report_format(format), rule);
}

}  // namespace oracle_gap

#endif  // ORACLE_GAP_REPORT_HPP_
