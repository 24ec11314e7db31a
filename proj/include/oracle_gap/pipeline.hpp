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

#ifndef ORACLE_GAP_PIPELINE_HPP_
#define ORACLE_GAP_PIPELINE_HPP_

#include <fnmatch.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "oracle_gap/ablation.hpp"
#include "oracle_gap/config.hpp"
#include "oracle_gap/coverage.hpp"
#include "oracle_gap/error.hpp"
#include "oracle_gap/executor.hpp"
#include "oracle_gap/metrics.hpp"
#include "oracle_gap/operators.hpp"
#include "oracle_gap/report.hpp"
#include "oracle_gap/sampling.hpp"
#include "oracle_gap/stats.hpp"
#include "oracle_gap/text.hpp"

namespace oracle_gap {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kMutantsFile = "mutants.jsonl";
inline constexpr const char* kOutcomesFile = "outcomes.jsonl";
inline constexpr const char* kPartialSuffix = ".partial";
inline constexpr const char* kGapJsonFile = "gap.json";
inline constexpr const char* kGapCsvFile = "gap.csv";
inline constexpr const char* kStatsFile = "stats.json";
inline constexpr const char* kAblationDir = "ablation";
inline constexpr const char* kMatrixFile = "ablation_matrix.json";

// Shell-style glob over a '/'-separated relative path; '*' crosses '/'.
inline bool glob_match(const std::string& pattern, const std::string& path) {
  return fnmatch(pattern.c_str(), path.c_str(), 0) == 0;
}

inline bool matches_any(const std::vector<std::string>& patterns,
                        const std::string& path) {
  return std::any_of(patterns.begin(), patterns.end(),
                     [&](const std::string& p) { return glob_match(p, path); });
}

// Regular files under `root` matching any pattern, sorted. Skips .git and
// anything in `skip`.
inline std::vector<std::string> expand_globs(const fs::path& root,
                                             const std::vector<std::string>& patterns,
                                             const std::vector<fs::path>& skip = {}) {
  std::vector<std::string> out;
  if (patterns.empty() || !fs::exists(root)) return out;
  std::set<fs::path> skipped;
  for (const auto& s : skip) skipped.insert(fs::weakly_canonical(s));
  for (auto it = fs::recursive_directory_iterator(root);
       it != fs::recursive_directory_iterator(); ++it) {
    if (it->path().filename() == ".git" ||
        skipped.count(fs::weakly_canonical(it->path()))) {
      if (it->is_directory()) it.disable_recursion_pending();
      continue;
    }
    if (!it->is_regular_file()) continue;
    auto rel = fs::relative(it->path(), root).generic_string();
    if (matches_any(patterns, rel)) out.push_back(rel);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<fs::path> copy_excludes_for(const RunConfig& cfg) {
  std::vector<fs::path> out{fs::absolute(cfg.output_dir)};
  if (!cfg.workspace_root.empty()) out.push_back(fs::absolute(cfg.workspace_root));
  return out;
}

inline CampaignConfig campaign_config(const RunConfig& cfg) {
  CampaignConfig c;
  c.test_command = cfg.test_command;
  c.build_command = cfg.build_command;
  c.timeout_factor = cfg.timeout_factor;
  c.timeout_floor_ms = cfg.timeout_floor_ms;
  c.jobs = cfg.jobs;
  c.seed = cfg.seed;
  c.workspace_root = cfg.workspace_root;
  c.copy_excludes = copy_excludes_for(cfg);
  return c;
}

inline BucketPlan bucket_plan(const RunConfig& cfg) {
  BucketPlan p;
  p.per_bucket = cfg.files_per_bucket;
  p.mutant_cap = cfg.mutant_cap;
  p.file_cap = cfg.file_cap;
  p.seed = cfg.seed;
  return p;
}

inline SuspectRule suspect_rule(const RunConfig& cfg) {
  SuspectRule r;
  r.min_coverage = cfg.suspect_min_coverage;
  r.max_mutation_score = cfg.suspect_max_score;
  r.scope = parse_score_scope(cfg.suspect_scope);
  r.validate();
  return r;
}

inline CoverageMap load_coverage(const RunConfig& cfg) {
  if (cfg.coverage_report.empty()) {
    throw NoCoverageDataError(
        "no coverage report configured: set coverage_report to an LCOV "
        "tracefile (e.g. produced by gcov/lcov, coverage.py `coverage lcov`, "
        "JaCoCo-to-LCOV or `go tool cover` converters)");
  }
  const auto path = cfg.coverage_path();
  if (!fs::exists(path)) {
    throw NoCoverageDataError(
        "coverage report " + path.string() +
        " not found: run the test suite under a coverage tool and export an "
        "LCOV tracefile to that path (SF:/DA: records)");
  }
  return read_lcov_file(path, cfg.project_root);
}

inline std::vector<MutationOperator> operators_for(const RunConfig& cfg) {
  require_language(cfg.language);
  if (cfg.catalog.empty()) return load_operator_catalog(cfg.language);
  return select_operators(read_catalog_file(cfg.catalog), cfg.language);
}

inline std::vector<std::string> line_exclusions(const RunConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.exclude_logging) out = default_logging_exclusions();
  out.insert(out.end(), cfg.exclude_line.begin(), cfg.exclude_line.end());
  return out;
}

inline std::vector<Mutant> load_mutants(const RunConfig& cfg) {
  const auto path = cfg.output_path(kMutantsFile);
  if (!fs::exists(path)) {
    throw UsageError(path.string() + " not found: run `oracle-gap mutate` first");
  }
  return read_mutants_jsonl(read_file(path), path.string());
}

inline std::optional<ojson> load_manifest(const RunConfig& cfg) {
  const auto path = cfg.output_path(kManifestFile);
  if (!fs::exists(path)) return std::nullopt;
  try {
    return ojson::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 1, e.what());
  }
}

// Files under analysis: the manifest's selection when present, plus every
// file a mutant points at.
inline std::vector<std::string> analysis_files(const std::vector<Mutant>& mutants,
                                               const std::optional<ojson>& manifest) {
  std::set<std::string> files;
  if (manifest && manifest->contains("files")) {
    for (const auto& f : manifest->at("files")) files.insert(f.at("path").get<std::string>());
  }
  for (const auto& m : mutants) files.insert(m.path);
  return {files.begin(), files.end()};
}

// ---------------------------------------------------------------------------
// mutate

struct MutateOutput {
  ojson manifest;
  std::vector<Mutant> mutants;
};

inline MutateOutput plan_mutants(const RunConfig& cfg) {
  auto coverage = load_coverage(cfg);
  for (auto it = coverage.entries.begin(); it != coverage.entries.end();) {
    it = matches_any(cfg.exclude, it->first) ? coverage.entries.erase(it)
                                             : std::next(it);
  }
  const auto plan = bucket_plan(cfg);
  plan.validate();
  const auto buckets = bucket_files(coverage);
  const auto selection = sample_files(buckets, plan);
  const auto ops = operators_for(cfg);
  const auto exclusions = line_exclusions(cfg);

  MutateOutput out;
  auto files = ojson::array();
  auto selected = selection.ordered;
  std::sort(selected.begin(), selected.end());
  for (const auto& path : selected) {
    const auto text = read_file(cfg.project_root / path);
    const auto generated = generate_mutants(text, path, ops, exclusions, cfg.language);
    const auto sampled = sample_mutants(generated, plan);
    const auto& fc = coverage.entries.at(path);
    files.push_back({{"path", path},
                     {"bucket", kBucketLabels[bucket_index(Fraction(
                                    static_cast<std::int64_t>(fc.covered_count()),
                                    static_cast<std::int64_t>(fc.instrumented_count())))]},
                     {"instrumented_lines", fc.instrumented_count()},
                     {"covered_lines", fc.covered_count()},
                     {"mutants_generated", generated.size()},
                     {"mutants_sampled", sampled.size()}});
    out.mutants.insert(out.mutants.end(), sampled.begin(), sampled.end());
  }

  std::vector<std::string> uninstrumented;
  for (const auto& path : expand_globs(cfg.project_root, cfg.sources,
                                       copy_excludes_for(cfg))) {
    if (matches_any(cfg.exclude, path)) continue;
    auto it = coverage.entries.find(path);
    if (it == coverage.entries.end() || it->second.hits.empty()) {
      uninstrumented.push_back(path);
    }
  }

  auto bucket_doc = ojson::array();
  for (std::size_t b = 0; b < kBucketCount; ++b) {
    bucket_doc.push_back({{"label", kBucketLabels[b]},
                          {"population", buckets[b].size()},
                          {"selected", selection.per_bucket[b]}});
  }
  auto op_ids = ojson::array();
  for (const auto& op : ops) op_ids.push_back(op.id);
  out.manifest = {
      {"seed", cfg.seed},
      {"language", cfg.language},
      {"catalog_version", cfg.catalog.empty() ? std::string(catalog::kCatalogVersion)
                                              : cfg.catalog.filename().string()},
      {"operators", op_ids},
      {"plan", {{"files_per_bucket", plan.per_bucket},
                {"mutant_cap", plan.mutant_cap},
                {"file_cap", plan.file_cap}}},
      {"buckets", bucket_doc},
      {"files", files},
      {"uninstrumented", uninstrumented},
      {"mutants_total", out.mutants.size()},
      {"mutants_digest", mutants_digest(out.mutants)},
  };
  return out;
}

inline int cmd_mutate(const RunConfig& cfg, std::ostream& out) {
  auto result = plan_mutants(cfg);
  fs::create_directories(cfg.output_dir);
  write_file_atomic(cfg.output_path(kManifestFile), result.manifest.dump(2) + "\n");
  write_file_atomic(cfg.output_path(kMutantsFile), write_mutants_jsonl(result.mutants));
  out << "selected " << result.manifest["files"].size() << " file(s), "
      << result.mutants.size() << " mutant(s) -> "
      << cfg.output_path(kMutantsFile).string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// run

inline CampaignResult run_with_checkpoint(const RunConfig& cfg,
                                          const std::vector<Mutant>& mutants,
                                          std::ostream& out) {
  const auto final_path = cfg.output_path(kOutcomesFile);
  const auto partial_path = fs::path(final_path.string() + kPartialSuffix);
  const auto digest = mutants_digest(mutants);

  std::unordered_map<std::string, MutantOutcome> completed;
  CampaignHooks hooks;
  if (fs::exists(partial_path)) {
    auto prior = read_outcomes_jsonl(read_file(partial_path), partial_path.string(),
                                     /*allow_truncated_tail=*/true);
    if (prior.header.mutants_digest == digest) {
      std::set<std::string> ids;
      for (const auto& m : mutants) ids.insert(m.id);
      for (auto& o : prior.outcomes) {
        if (ids.count(o.mutant_id)) completed[o.mutant_id] = o;
      }
      hooks.resume_header = prior.header;
      out << "resuming: " << completed.size() << " of " << mutants.size()
          << " outcome(s) recovered\n";
    } else {
      out << "ignoring " << partial_path.string()
          << ": it belongs to a different mutant set\n";
    }
  }
  hooks.completed = &completed;

  fs::create_directories(cfg.output_dir);
  std::ofstream partial;
  hooks.on_header = [&](const CampaignHeader& h) {
    partial.open(partial_path, std::ios::binary | std::ios::trunc);
    if (!partial) throw Error("cannot write " + partial_path.string());
    partial << header_json(h).dump() << "\n";
    for (const auto& m : mutants) {
      auto it = completed.find(m.id);
      if (it != completed.end()) partial << outcome_json(it->second).dump() << "\n";
    }
    partial.flush();
  };
  hooks.on_outcome = [&](std::size_t, const MutantOutcome& o) {
    partial << outcome_json(o).dump() << "\n";
    partial.flush();
  };

  auto result = run_campaign(cfg.project_root, mutants, campaign_config(cfg), hooks);
  if (mutants.empty()) hooks.on_header(result.header);
  partial.close();
  write_file_atomic(final_path, write_outcomes_jsonl(result));
  std::error_code ec;
  fs::remove(partial_path, ec);
  return result;
}

inline int cmd_run(const RunConfig& cfg, std::ostream& out) {
  const auto mutants = load_mutants(cfg);
  auto result = run_with_checkpoint(cfg, mutants, out);
  std::map<Verdict, std::size_t> tally;
  for (const auto& o : result.outcomes) ++tally[o.verdict];
  out << mutants.size() << " mutant(s): ";
  bool first = true;
  for (auto v : {Verdict::kKilled, Verdict::kSurvived, Verdict::kTimeout,
                 Verdict::kInvalid}) {
    out << (first ? "" : ", ") << tally[v] << " " << to_string(v);
    first = false;
  }
  out << " (timeout " << result.header.timeout_ms << " ms)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// gap

inline CampaignResult load_outcomes(const RunConfig& cfg) {
  const auto path = cfg.output_path(kOutcomesFile);
  if (!fs::exists(path)) {
    throw UsageError(path.string() + " not found: run `oracle-gap run` first");
  }
  return read_outcomes_jsonl(read_file(path), path.string());
}

// Per-file reports from a mutant set, its outcomes and a coverage map.
inline std::vector<FileGapReport> build_reports(const std::vector<std::string>& files,
                                                const CoverageMap& coverage,
                                                const std::vector<Mutant>& mutants,
                                                const std::vector<MutantOutcome>& outcomes,
                                                bool timeout_as_kill) {
  std::unordered_map<std::string, std::string> path_of;
  for (const auto& m : mutants) path_of.emplace(m.id, m.path);
  std::map<std::string, std::vector<MutantOutcome>> by_file;
  for (const auto& f : files) by_file[f];
  for (const auto& o : outcomes) {
    auto it = path_of.find(o.mutant_id);
    if (it == path_of.end()) {
      throw IntegrityError("outcome for unknown mutant " + o.mutant_id);
    }
    by_file[it->second].push_back(o);
  }
  std::vector<FileGapReport> reports;
  for (const auto& [path, outs] : by_file) {
    reports.push_back(build_file_report(path, coverage, mutants, outs, timeout_as_kill));
  }
  return reports;
}

inline ProjectGapSummary make_summary(std::vector<FileGapReport> reports,
                                      bool timeout_as_kill) {
  if (reports.empty()) {
    ProjectGapSummary s;
    s.timeout_as_kill = timeout_as_kill;
    return s;
  }
  return summarize_project(std::move(reports), timeout_as_kill);
}

inline ProjectGapSummary compute_gap(const RunConfig& cfg) {
  const auto mutants = load_mutants(cfg);
  const auto outcomes = load_outcomes(cfg);
  if (outcomes.header.mutants_digest != mutants_digest(mutants)) {
    throw IntegrityError("outcomes were produced for a different mutant set "
                         "(digest " + outcomes.header.mutants_digest + " vs " +
                         mutants_digest(mutants) + "); re-run `oracle-gap run`");
  }
  const auto manifest = load_manifest(cfg);
  const auto coverage = load_coverage(cfg);
  auto s = make_summary(build_reports(analysis_files(mutants, manifest), coverage,
                                      mutants, outcomes.outcomes, cfg.timeout_as_kill),
                        cfg.timeout_as_kill);
  if (manifest && manifest->contains("uninstrumented")) {
    s.uninstrumented = manifest->at("uninstrumented").get<std::vector<std::string>>();
  }
  return s;
}

inline void write_gap_outputs(const fs::path& dir, const ProjectGapSummary& s,
                              const SuspectRule& rule) {
  fs::create_directories(dir);
  write_file_atomic(dir / kGapJsonFile, report_json(s, rule).dump(2) + "\n");
  auto rows = s.files;
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.path < b.path; });
  std::string csv = csv_header();
  for (const auto& r : rows) csv += csv_row(r);
  write_file_atomic(dir / kGapCsvFile, csv);
}

struct GapOptions {
  std::string format = "text";
  bool fail_on_suspect = false;
};

inline int cmd_gap(const RunConfig& cfg, const GapOptions& opts, std::ostream& out) {
  const auto rule = suspect_rule(cfg);
  const auto format = parse_report_format(opts.format);
  const auto s = compute_gap(cfg);
  write_gap_outputs(cfg.output_dir, s, rule);
  out << render(s, format, rule);
  if (opts.fail_on_suspect && !flag_suspects(s.files, rule).empty()) return 2;
  return 0;
}

// ---------------------------------------------------------------------------
// rank

inline ProjectGapSummary load_gap_report(const fs::path& path) {
  if (!fs::exists(path)) {
    throw UsageError(path.string() + " not found: run `oracle-gap gap` first");
  }
  try {
    return summary_from_json(ojson::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 1, e.what());
  }
}

inline int cmd_rank(const RunConfig& cfg, const std::string& by,
                    const std::string& format, std::ostream& out) {
  const auto scope = parse_score_scope(by);
  const auto fmt = parse_report_format(format);
  const auto s = load_gap_report(cfg.output_path(kGapJsonFile));
  const auto ranking = rank_by_gap(s.files, scope);
  if (fmt == ReportFormat::kText) {
    out << render_table(ranking, scope);
    return 0;
  }
  if (fmt == ReportFormat::kJson) {
    auto arr = ojson::array();
    std::size_t pos = 0;
    for (const auto& r : ranking.ranked) {
      auto g = scope == ScoreScope::kRaw ? r.raw_gap() : r.covered_gap();
      arr.push_back({{"rank", ++pos}, {"path", r.path}, {"gap", to_double(*g)}});
    }
    for (const auto& r : ranking.unranked) {
      arr.push_back({{"rank", nullptr}, {"path", r.path}, {"gap", nullptr}});
    }
    out << ojson{{"by", by}, {"ranking", arr}}.dump(2) << "\n";
    return 0;
  }
  out << csv_header();
  for (const auto& v : {&ranking.ranked, &ranking.unranked}) {
    for (const auto& r : *v) out << csv_row(r);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// stats

struct StatsInput {
  std::string project;  // label, usually the report's directory
  std::vector<FileGapReport> files;
};

namespace detail {

template <typename F>
ojson guarded(F&& f) {
  try {
    return f();
  } catch (const DegenerateInputError& e) {
    return {{"absent", e.what()}};
  }
}

inline ojson opt_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

}  // namespace detail

struct StatsDocument {
  ojson doc;
  std::string points_csv;
};

// Percent-scale series over every file with coverage and a score. Raw series
// pair coverage with mutation score; covered series with covered score.
inline StatsDocument compute_stats(const std::vector<StatsInput>& inputs) {
  struct Point {
    std::string project, path;
    double cov, score;
    std::optional<double> cscore, raw_gap, covered_gap;
  };
  std::vector<Point> pts;
  for (const auto& in : inputs) {
    for (const auto& r : in.files) {
      auto c = r.coverage();
      auto m = r.mutation_score();
      if (!c || !m) continue;
      pts.push_back({in.project, r.path, 100 * to_double(*c), 100 * to_double(*m),
                     r.covered_mutation_score()
                         ? std::optional<double>(100 * to_double(*r.covered_mutation_score()))
                         : std::nullopt,
                     to_double(r.raw_gap()), to_double(r.covered_gap())});
    }
  }
  if (pts.size() < 2) {
    throw DegenerateInputError("stats need at least two file reports with "
                               "coverage and a mutation score; got " +
                               std::to_string(pts.size()));
  }
  std::vector<double> cov, score, ccov, cscore, raw, covered;
  for (const auto& p : pts) {
    cov.push_back(p.cov);
    score.push_back(p.score);
    raw.push_back(*p.raw_gap);
    if (p.cscore) {
      ccov.push_back(p.cov);
      cscore.push_back(*p.cscore);
      covered.push_back(*p.covered_gap);
    }
  }

  auto regression = [](const std::vector<double>& x, const std::vector<double>& y) {
    return detail::guarded([&]() -> ojson {
      auto fit = stats::linear_regression(x, y);
      return {{"n", x.size()},
              {"slope", fit.slope},
              {"intercept", fit.intercept},
              {"r", detail::opt_number(std::isnan(fit.r) ? std::nullopt
                                                         : std::optional<double>(fit.r))},
              {"r_squared", detail::opt_number(std::isnan(fit.r_squared)
                                                   ? std::nullopt
                                                   : std::optional<double>(fit.r_squared))}};
    });
  };
  auto corr = [](auto fn, const std::vector<double>& x, const std::vector<double>& y) {
    return detail::guarded([&]() -> ojson { return fn(x, y); });
  };
  auto pearson = [](std::span<const double> a, std::span<const double> b) {
    return stats::pearson(a, b);
  };
  auto spearman = [](std::span<const double> a, std::span<const double> b) {
    return stats::spearman(a, b);
  };
  auto variance = [](const std::vector<FileGapReport>& all, stats::GapKind kind) {
    auto bv = stats::bucket_variance(all, kind);
    auto per = ojson::array();
    for (std::size_t b = 0; b < kBucketCount; ++b) {
      per.push_back({{"bucket", kBucketLabels[b]},
                     {"n", bv.counts[b]},
                     {"variance", detail::opt_number(bv.per_bucket[b])}});
    }
    return ojson{{"overall", detail::opt_number(bv.overall)}, {"buckets", per}};
  };

  std::vector<FileGapReport> all;
  std::vector<std::vector<FileGapReport>> projects;
  for (const auto& in : inputs) {
    all.insert(all.end(), in.files.begin(), in.files.end());
    projects.push_back(in.files);
  }

  ojson doc;
  doc["files"] = pts.size();
  doc["projects"] = inputs.size();
  doc["regression"] = {{"raw", regression(cov, score)},
                       {"covered", regression(ccov, cscore)}};
  doc["pearson"] = {{"coverage_vs_mutation_score", corr(pearson, cov, score)},
                    {"coverage_vs_covered_mutation_score", corr(pearson, ccov, cscore)}};
  doc["spearman"] = {{"coverage_vs_mutation_score", corr(spearman, cov, score)},
                     {"coverage_vs_covered_mutation_score", corr(spearman, ccov, cscore)},
                     {"coverage_vs_raw_gap", corr(spearman, cov, raw)},
                     {"coverage_vs_covered_gap", corr(spearman, ccov, covered)}};
  doc["variance"] = {{"raw_gap", variance(all, stats::GapKind::kRaw)},
                     {"covered_gap", variance(all, stats::GapKind::kCovered)}};
  auto grouped = [&](stats::GapKind kind) {
    return detail::guarded([&]() -> ojson {
      auto g = stats::grouped_variance(projects, kind);
      return {{"mean_within_project", g.mean_within},
              {"pooled", g.overall},
              {"projects_used", g.groups_used}};
    });
  };
  doc["variance_by_project"] = {{"raw_gap", grouped(stats::GapKind::kRaw)},
                                {"covered_gap", grouped(stats::GapKind::kCovered)}};

  // Residuals of each file against the fitted lines, for plotting.
  std::optional<stats::RegressionFit> raw_fit, cov_fit;
  try { raw_fit = stats::linear_regression(cov, score); } catch (const DegenerateInputError&) {}
  try { cov_fit = stats::linear_regression(ccov, cscore); } catch (const DegenerateInputError&) {}
  auto num = [](std::optional<double> v) {
    return v ? format_fixed(*v, 6) : std::string();
  };
  std::string csv =
      "project,path,coverage,mutation_score,covered_mutation_score,raw_gap,"
      "covered_gap,raw_residual,covered_residual\n";
  for (const auto& p : pts) {
    std::optional<double> rr, cr;
    if (raw_fit) rr = p.score - (raw_fit->intercept + raw_fit->slope * p.cov);
    if (cov_fit && p.cscore) cr = *p.cscore - (cov_fit->intercept + cov_fit->slope * p.cov);
    csv += p.project + "," + p.path + "," + num(p.cov) + "," + num(p.score) + "," +
           num(p.cscore) + "," + num(p.raw_gap) + "," + num(p.covered_gap) + "," +
           num(rr) + "," + num(cr) + "\n";
  }
  return {doc, csv};
}

inline std::string render_stats_text(const ojson& doc) {
  auto show = [](const ojson& v) -> std::string {
    if (v.is_number()) return format_fixed(v.get<double>(), 3);
    if (v.is_object() && v.contains("absent")) return "absent";
    return "-";
  };
  std::string out = "files: " + std::to_string(doc["files"].get<std::size_t>()) +
                    ", projects: " + std::to_string(doc["projects"].get<std::size_t>()) +
                    "\n";
  for (const char* k : {"raw", "covered"}) {
    const auto& r = doc["regression"][k];
    out += std::string("regression (") + k + "): ";
    if (r.contains("absent")) {
      out += "absent (" + r["absent"].get<std::string>() + ")\n";
      continue;
    }
    out += "slope " + show(r["slope"]) + ", intercept " + show(r["intercept"]) +
           ", r " + show(r["r"]) + ", r^2 " + show(r["r_squared"]) + "\n";
  }
  for (const char* k : {"pearson", "spearman"}) {
    for (const auto& [name, v] : doc[k].items()) {
      out += std::string(k) + " " + name + ": " + show(v) + "\n";
    }
  }
  for (const char* k : {"raw_gap", "covered_gap"}) {
    out += std::string("variance ") + k + ": " +
           show(doc["variance"][k]["overall"]) + "\n";
  }
  return out;
}

struct StatsOptions {
  std::vector<fs::path> reports;  // gap.json files; empty: <output_dir>/gap.json
  fs::path points_csv;
  std::string format = "text";
};

inline int cmd_stats(const RunConfig& cfg, const StatsOptions& opts, std::ostream& out) {
  auto paths = opts.reports;
  if (paths.empty()) paths.push_back(cfg.output_path(kGapJsonFile));
  std::vector<StatsInput> inputs;
  for (const auto& p : paths) {
    auto label = fs::absolute(p).parent_path().filename().string();
    inputs.push_back({label, load_gap_report(p).files});
  }
  auto result = compute_stats(inputs);
  fs::create_directories(cfg.output_dir);
  write_file_atomic(cfg.output_path(kStatsFile), result.doc.dump(2) + "\n");
  if (!opts.points_csv.empty()) write_file_atomic(opts.points_csv, result.points_csv);
  if (opts.format == "json") {
    out << result.doc.dump(2) << "\n";
  } else if (opts.format == "text") {
    out << render_stats_text(result.doc);
  } else {
    throw UsageError("stats format must be text or json");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// ablate

struct AblationOutput {
  std::vector<ablation::ConfigurationRun> runs;
  std::vector<ablation::MatrixCell> cells;
  ojson matrix;
};

inline AblationOutput run_ablation(const RunConfig& cfg, std::ostream& out) {
  if (cfg.test_files.empty()) {
    throw UsageError("ablation needs test_files globs naming the test sources");
  }
  if (cfg.coverage_command.empty()) {
    throw UsageError("ablation needs coverage_command to re-measure coverage");
  }
  if (cfg.coverage_report.empty()) throw UsageError("coverage_report is required");
  const auto mutants = load_mutants(cfg);
  const auto targets = analysis_files(mutants, load_manifest(cfg));
  const auto tests = expand_globs(cfg.project_root, cfg.test_files, copy_excludes_for(cfg));
  if (tests.empty()) throw UsageError("test_files matched no files");

  auto patterns = ablation::default_patterns(cfg.language);
  if (!cfg.test_pattern.empty()) patterns.test_patterns = cfg.test_pattern;
  if (!cfg.assert_pattern.empty()) patterns.assert_patterns = cfg.assert_pattern;
  const auto scan = ablation::enumerate_knockout_sites(cfg.project_root, tests, patterns);
  for (const auto& w : scan.warnings) out << "warning: " << w << "\n";

  const auto grid = ablation::generate_grid(scan.sites, cfg.ablation_samples, cfg.seed);
  auto cc = campaign_config(cfg);
  baseline_check(cfg.project_root, cc);

  ablation::GridOptions go;
  go.campaign = cc;
  go.coverage_command = cfg.coverage_command;
  go.coverage_report = cfg.coverage_report.generic_string();
  go.timeout_as_kill = cfg.timeout_as_kill;

  AblationOutput result;
  const auto rule = suspect_rule(cfg);
  const auto dir = cfg.output_dir / kAblationDir;
  fs::create_directories(dir);
  result.runs = ablation::run_ablation_grid(
      cfg.project_root, targets, scan.sites, grid, mutants, go,
      [&](const ablation::ConfigurationRun& run) {
        const auto sub = dir / run.config.label();
        fs::create_directories(sub);
        if (run.failed) {
          write_file_atomic(sub / kGapJsonFile,
                            ojson{{"status", "failed"}, {"detail", run.detail}}.dump(2) + "\n");
          out << run.config.label() << ": failed (" << run.detail << ")\n";
          return;
        }
        write_gap_outputs(sub, make_summary(run.reports, cfg.timeout_as_kill), rule);
        auto g = run.mean_covered_gap();
        out << run.config.label() << ": mean covered gap "
            << (g ? format_one_decimal(*g) : std::string("-")) << "\n";
      });
  result.cells = ablation::gap_delta_matrix(result.runs);

  std::size_t n_tests = 0, n_asserts = 0;
  for (const auto& s : scan.sites) {
    (s.kind == ablation::SiteKind::kTestCase ? n_tests : n_asserts) += 1;
  }
  result.matrix = {
      {"seed", cfg.seed},
      {"samples", cfg.ablation_samples},
      {"test_cases", n_tests},
      {"asserts", n_asserts},
      {"warnings", scan.warnings},
      {"cells", ablation::matrix_json(result.cells, result.runs)},
  };
  write_file_atomic(cfg.output_dir / kMatrixFile, result.matrix.dump(2) + "\n");
  return result;
}

inline std::string render_matrix(const std::vector<ablation::MatrixCell>& cells) {
  auto show = [](const std::optional<double>& v) {
    return detail::pad_left(v ? format_one_decimal(*v) : std::string("-"),
                                   v ? format_one_decimal(*v).size() : 1, 8);
  };
  std::string out = "  tests  asserts    cgap  vs full  vs prev\n";
  for (const auto& c : cells) {
    char head[32];
    std::snprintf(head, sizeof(head), "%6d%%  %6d%%", c.shape.test_pct,
                  c.shape.assert_pct);
    out += head + show(c.mean_covered_gap) + " " + show(c.delta_vs_full) + " " +
           show(c.delta_vs_previous) + "\n";
  }
  return out;
}

inline int cmd_ablate(const RunConfig& cfg, std::ostream& out) {
  auto result = run_ablation(cfg, out);
  out << render_matrix(result.cells);
  return 0;
}

}  // namespace oracle_gap

#endif  // ORACLE_GAP_PIPELINE_HPP_
