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

#ifndef ORACLE_GAP_METRICS_HPP_
#define ORACLE_GAP_METRICS_HPP_

#include <boost/rational.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "oracle_gap/coverage.hpp"
#include "oracle_gap/error.hpp"
#include "oracle_gap/executor.hpp"
#include "oracle_gap/operators.hpp"

namespace oracle_gap {

// Exact ratio of two tallies. Scores stay exact until they are rendered.
using Fraction = boost::rational<std::int64_t>;

inline double to_double(const Fraction& f) {
  return static_cast<double>(f.numerator()) /
         static_cast<double>(f.denominator());
}

inline std::optional<double> to_double(const std::optional<Fraction>& f) {
  if (!f) return std::nullopt;
  return to_double(*f);
}

// One decimal, half away from zero, computed on the exact value.
inline std::string format_one_decimal(const Fraction& value) {
  const Fraction scaled = value * std::int64_t{10};
  const auto n = scaled.numerator();
  const auto d = scaled.denominator();
  const auto mag = (2 * std::llabs(n) + d) / (2 * d);
  const auto tenths = n < 0 ? -mag : mag;
  std::string out = tenths < 0 ? "-" : "";
  const auto a = std::llabs(tenths);
  out += std::to_string(a / 10) + "." + std::to_string(a % 10);
  return out;
}

inline std::string format_one_decimal(double value) {
  const double r = std::round(value * 10.0) / 10.0;
  return format_fixed(r == 0.0 ? 0.0 : r, 1);
}

// ---------------------------------------------------------------------------
// Scores

inline bool is_detected(Verdict v, bool timeout_as_kill) {
  return v == Verdict::kKilled || (timeout_as_kill && v == Verdict::kTimeout);
}

inline Fraction mutation_score_exact(const std::vector<MutantOutcome>& outcomes,
                                     bool timeout_as_kill = true) {
  std::int64_t valid = 0, killed = 0;
  for (const auto& o : outcomes) {
    if (o.verdict == Verdict::kInvalid) continue;
    ++valid;
    if (is_detected(o.verdict, timeout_as_kill)) ++killed;
  }
  if (valid == 0) throw UndefinedScoreError("no valid mutants: score undefined");
  return Fraction(killed, valid);
}

// (KILLED + TIMEOUT if counted) / non-INVALID outcomes.
inline double mutation_score(const std::vector<MutantOutcome>& outcomes,
                             bool timeout_as_kill = true) {
  return to_double(mutation_score_exact(outcomes, timeout_as_kill));
}

// Score over valid mutants whose line is covered; absent if there are none.
inline std::optional<Fraction> covered_mutation_score_exact(
    const std::vector<MutantOutcome>& outcomes,
    const std::vector<Mutant>& mutants,
    const std::set<std::size_t>& covered_lines, bool timeout_as_kill = true) {
  std::unordered_map<std::string, const Mutant*> by_id;
  for (const auto& m : mutants) by_id.emplace(m.id, &m);
  std::int64_t valid = 0, killed = 0;
  for (const auto& o : outcomes) {
    if (o.verdict == Verdict::kInvalid) continue;
    auto it = by_id.find(o.mutant_id);
    if (it == by_id.end()) {
      throw IntegrityError("outcome for unknown mutant " + o.mutant_id);
    }
    if (!covered_lines.count(it->second->line)) continue;
    ++valid;
    if (is_detected(o.verdict, timeout_as_kill)) ++killed;
  }
  if (valid == 0) return std::nullopt;
  return Fraction(killed, valid);
}

inline std::optional<double> covered_mutation_score(
    const std::vector<MutantOutcome>& outcomes,
    const std::vector<Mutant>& mutants,
    const std::set<std::size_t>& covered_lines, bool timeout_as_kill = true) {
  return to_double(covered_mutation_score_exact(outcomes, mutants,
                                                covered_lines, timeout_as_kill));
}

// cov - mut in percentage points.
inline double oracle_gap(double coverage, double mutation_score) {
  return 100.0 * (coverage - mutation_score);
}

inline Fraction oracle_gap(const Fraction& coverage,
                           const Fraction& mutation_score) {
  return (coverage - mutation_score) * std::int64_t{100};
}

inline std::optional<double> covered_oracle_gap(
    double coverage, std::optional<double> covered_score) {
  if (!covered_score) return std::nullopt;
  return oracle_gap(coverage, *covered_score);
}

inline std::optional<Fraction> covered_oracle_gap(
    const std::optional<Fraction>& coverage,
    const std::optional<Fraction>& covered_score) {
  if (!coverage || !covered_score) return std::nullopt;
  return oracle_gap(*coverage, *covered_score);
}

// ---------------------------------------------------------------------------
// Reports

struct FileGapReport {
  std::string path;
  bool coverage_available = false;
  std::int64_t instrumented_lines = 0;
  std::int64_t covered_line_count = 0;
  std::int64_t mutants_total = 0;
  std::int64_t mutants_valid = 0;
  std::int64_t mutants_on_covered_lines = 0;  // valid ones only
  std::int64_t killed = 0;                    // detected, per timeout rule
  std::int64_t killed_on_covered_lines = 0;
  std::int64_t survived = 0;
  std::int64_t timeouts = 0;
  std::int64_t invalid = 0;

  std::optional<Fraction> coverage() const {
    if (!coverage_available || instrumented_lines == 0) return std::nullopt;
    return Fraction(covered_line_count, instrumented_lines);
  }
  std::optional<Fraction> mutation_score() const {
    if (mutants_valid == 0) return std::nullopt;
    return Fraction(killed, mutants_valid);
  }
  std::optional<Fraction> covered_mutation_score() const {
    if (!coverage_available || mutants_on_covered_lines == 0) {
      return std::nullopt;
    }
    return Fraction(killed_on_covered_lines, mutants_on_covered_lines);
  }
  std::optional<Fraction> raw_gap() const {
    auto c = coverage();
    auto m = mutation_score();
    if (!c || !m) return std::nullopt;
    return oracle_gap(*c, *m);
  }
  std::optional<Fraction> covered_gap() const {
    return covered_oracle_gap(coverage(), covered_mutation_score());
  }

  bool operator==(const FileGapReport&) const = default;
};

inline FileGapReport build_file_report(const std::string& path,
                                       const CoverageMap& coverage_map,
                                       const std::vector<Mutant>& mutants,
                                       const std::vector<MutantOutcome>& outcomes,
                                       bool timeout_as_kill = true) {
  FileGapReport r;
  r.path = path;
  std::set<std::size_t> covered;
  auto cit = coverage_map.entries.find(path);
  if (cit != coverage_map.entries.end() && !cit->second.hits.empty()) {
    r.coverage_available = true;
    r.instrumented_lines =
        static_cast<std::int64_t>(cit->second.instrumented_count());
    covered = cit->second.covered();
    r.covered_line_count = static_cast<std::int64_t>(covered.size());
  }

  std::unordered_map<std::string, const Mutant*> by_id;
  for (const auto& m : mutants) {
    if (m.path == path) by_id.emplace(m.id, &m);
  }
  std::set<std::string> seen;
  for (const auto& o : outcomes) {
    auto it = by_id.find(o.mutant_id);
    if (it == by_id.end()) {
      throw IntegrityError("outcome " + o.mutant_id + " is not a mutant of " +
                           path);
    }
    if (!seen.insert(o.mutant_id).second) {
      throw IntegrityError("duplicate outcome for " + o.mutant_id);
    }
    ++r.mutants_total;
    switch (o.verdict) {
      case Verdict::kInvalid: ++r.invalid; continue;
      case Verdict::kSurvived: ++r.survived; break;
      case Verdict::kTimeout: ++r.timeouts; break;
      case Verdict::kKilled: break;
    }
    ++r.mutants_valid;
    const bool on_covered = covered.count(it->second->line) != 0;
    const bool detected = is_detected(o.verdict, timeout_as_kill);
    if (detected) ++r.killed;
    if (on_covered) {
      ++r.mutants_on_covered_lines;
      if (detected) ++r.killed_on_covered_lines;
    }
  }
  if (seen.size() != by_id.size()) {
    throw IntegrityError("missing outcomes for " + path + ": " +
                         std::to_string(by_id.size() - seen.size()) +
                         " mutant(s) never evaluated");
  }
  return r;
}

struct ProjectGapSummary {
  std::vector<FileGapReport> files;
  std::vector<std::string> uninstrumented;
  bool timeout_as_kill = true;

  std::int64_t instrumented_lines = 0;  // over coverage-available files
  std::int64_t covered_line_count = 0;
  std::int64_t mutants_total = 0;
  std::int64_t mutants_valid = 0;
  std::int64_t killed = 0;
  std::int64_t mutants_on_covered_lines = 0;
  std::int64_t killed_on_covered_lines = 0;

  std::optional<Fraction> coverage() const {
    if (instrumented_lines == 0) return std::nullopt;
    return Fraction(covered_line_count, instrumented_lines);
  }
  std::optional<Fraction> mutation_score() const {
    if (mutants_valid == 0) return std::nullopt;
    return Fraction(killed, mutants_valid);
  }
  std::optional<Fraction> covered_mutation_score() const {
    if (mutants_on_covered_lines == 0) return std::nullopt;
    return Fraction(killed_on_covered_lines, mutants_on_covered_lines);
  }
  std::optional<Fraction> raw_gap() const {
    auto c = coverage();
    auto m = mutation_score();
    if (!c || !m) return std::nullopt;
    return oracle_gap(*c, *m);
  }
  std::optional<Fraction> covered_gap() const {
    return covered_oracle_gap(coverage(), covered_mutation_score());
  }
};

// Line-weighted coverage and mutant-weighted scores, summed from raw counts.
inline ProjectGapSummary summarize_project(std::vector<FileGapReport> reports,
                                           bool timeout_as_kill = true) {
  if (reports.empty()) throw Error("cannot summarize an empty project");
  ProjectGapSummary s;
  s.timeout_as_kill = timeout_as_kill;
  for (const auto& r : reports) {
    if (r.coverage_available) {
      s.instrumented_lines += r.instrumented_lines;
      s.covered_line_count += r.covered_line_count;
    }
    s.mutants_total += r.mutants_total;
    s.mutants_valid += r.mutants_valid;
    s.killed += r.killed;
    s.mutants_on_covered_lines += r.mutants_on_covered_lines;
    s.killed_on_covered_lines += r.killed_on_covered_lines;
  }
  s.files = std::move(reports);
  return s;
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline nlohmann::ordered_json opt_json(const std::optional<Fraction>& f) {
  if (!f) return nullptr;
  return to_double(*f);
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const FileGapReport& r) {
  return {
      {"path", r.path},
      {"coverage", detail::opt_json(r.coverage())},
      {"mutants_total", r.mutants_total},
      {"mutants_valid", r.mutants_valid},
      {"mutants_on_covered_lines", r.mutants_on_covered_lines},
      {"killed", r.killed},
      {"killed_on_covered_lines", r.killed_on_covered_lines},
      {"mutation_score", detail::opt_json(r.mutation_score())},
      {"covered_mutation_score", detail::opt_json(r.covered_mutation_score())},
      {"raw_gap", detail::opt_json(r.raw_gap())},
      {"covered_gap", detail::opt_json(r.covered_gap())},
      {"coverage_available", r.coverage_available},
      {"instrumented_lines", r.instrumented_lines},
      {"covered_line_count", r.covered_line_count},
      {"survived", r.survived},
      {"timeouts", r.timeouts},
      {"invalid", r.invalid},
  };
}

// Rebuilds from the raw counts; derived ratios in the document are ignored.
inline FileGapReport file_report_from_json(const nlohmann::ordered_json& j) {
  FileGapReport r;
  j.at("path").get_to(r.path);
  j.at("coverage_available").get_to(r.coverage_available);
  j.at("instrumented_lines").get_to(r.instrumented_lines);
  j.at("covered_line_count").get_to(r.covered_line_count);
  j.at("mutants_total").get_to(r.mutants_total);
  j.at("mutants_valid").get_to(r.mutants_valid);
  j.at("mutants_on_covered_lines").get_to(r.mutants_on_covered_lines);
  j.at("killed").get_to(r.killed);
  j.at("killed_on_covered_lines").get_to(r.killed_on_covered_lines);
  r.survived = j.value("survived", std::int64_t{0});
  r.timeouts = j.value("timeouts", std::int64_t{0});
  r.invalid = j.value("invalid", std::int64_t{0});
  return r;
}

inline nlohmann::ordered_json summary_json(const ProjectGapSummary& s) {
  return {
      {"coverage", detail::opt_json(s.coverage())},
      {"mutation_score", detail::opt_json(s.mutation_score())},
      {"covered_mutation_score", detail::opt_json(s.covered_mutation_score())},
      {"raw_gap", detail::opt_json(s.raw_gap())},
      {"covered_gap", detail::opt_json(s.covered_gap())},
      {"files", s.files.size()},
      {"instrumented_lines", s.instrumented_lines},
      {"covered_line_count", s.covered_line_count},
      {"mutants_total", s.mutants_total},
      {"mutants_valid", s.mutants_valid},
      {"killed", s.killed},
      {"mutants_on_covered_lines", s.mutants_on_covered_lines},
      {"killed_on_covered_lines", s.killed_on_covered_lines},
      {"timeout_as_kill", s.timeout_as_kill},
  };
}

inline std::string csv_header() {
  return "path,coverage,mutants_total,mutants_valid,mutants_on_covered_lines,"
         "killed,killed_on_covered_lines,mutation_score,covered_mutation_score,"
         "raw_gap,covered_gap\n";
}

inline std::string csv_row(const FileGapReport& r) {
  auto num = [](const std::optional<Fraction>& f) {
    if (!f) return std::string();
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", to_double(*f));
    return std::string(buf);
  };
  std::string path = r.path;
  if (path.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : path) {
      if (c == '"') q += '"';
      q += c;
    }
    path = q + "\"";
  }
  return path + "," + num(r.coverage()) + "," + std::to_string(r.mutants_total) +
         "," + std::to_string(r.mutants_valid) + "," +
         std::to_string(r.mutants_on_covered_lines) + "," +
         std::to_string(r.killed) + "," +
         std::to_string(r.killed_on_covered_lines) + "," +
         num(r.mutation_score()) + "," + num(r.covered_mutation_score()) + "," +
         num(r.raw_gap()) + "," + num(r.covered_gap()) + "\n";
}

}  // namespace oracle_gap

#endif  // ORACLE_GAP_METRICS_HPP_
