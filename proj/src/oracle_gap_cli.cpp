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

// oracle-gap: coverage minus mutation score, per file.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracle_gap.hpp"

namespace og = oracle_gap;

namespace {

struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string output_dir;
  std::vector<std::string> settings;  // key=value
};

// Values given on the command line; unset ones leave the config alone.
struct Overrides {
  std::string project_root, language, coverage, test_command, build_command,
      coverage_command, catalog;
  std::optional<double> timeout_factor, min_coverage, max_score;
  std::optional<long long> timeout_floor_ms;
  std::optional<std::size_t> mutant_cap, files_per_bucket, file_cap, samples;
  std::vector<std::string> exclude, test_files;
  std::string scope;
  bool no_exclude_logging = false;
  bool timeouts_survive = false;
};

og::RunConfig resolve(const GlobalFlags& g, const Overrides& o) {
  og::RunConfig cfg;
  if (!g.config.empty()) cfg = og::load_config(g.config);
  for (const auto& kv : g.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw og::UsageError("--set expects key=value, got " + kv);
    og::apply_setting(cfg, std::string(og::trim(kv.substr(0, eq))),
                      std::string(og::trim(kv.substr(eq + 1))));
  }
  if (g.seed) cfg.seed = *g.seed;
  if (g.jobs) cfg.jobs = *g.jobs;
  if (!g.output_dir.empty()) cfg.output_dir = g.output_dir;
  if (!o.project_root.empty()) cfg.project_root = o.project_root;
  if (!o.language.empty()) cfg.language = o.language;
  if (!o.coverage.empty()) cfg.coverage_report = o.coverage;
  if (!o.test_command.empty()) cfg.test_command = o.test_command;
  if (!o.build_command.empty()) cfg.build_command = o.build_command;
  if (!o.coverage_command.empty()) cfg.coverage_command = o.coverage_command;
  if (!o.catalog.empty()) cfg.catalog = o.catalog;
  if (o.timeout_factor) cfg.timeout_factor = *o.timeout_factor;
  if (o.timeout_floor_ms) cfg.timeout_floor_ms = *o.timeout_floor_ms;
  if (o.mutant_cap) cfg.mutant_cap = *o.mutant_cap;
  if (o.files_per_bucket) cfg.files_per_bucket = *o.files_per_bucket;
  if (o.file_cap) cfg.file_cap = *o.file_cap;
  if (o.samples) cfg.ablation_samples = *o.samples;
  if (o.min_coverage) cfg.suspect_min_coverage = *o.min_coverage;
  if (o.max_score) cfg.suspect_max_score = *o.max_score;
  if (!o.scope.empty()) cfg.suspect_scope = o.scope;
  cfg.exclude.insert(cfg.exclude.end(), o.exclude.begin(), o.exclude.end());
  cfg.test_files.insert(cfg.test_files.end(), o.test_files.begin(), o.test_files.end());
  if (o.no_exclude_logging) cfg.exclude_logging = false;
  if (o.timeouts_survive) cfg.timeout_as_kill = false;
  return cfg;
}

// Mutant commands run in their own process groups; take them down with us.
extern "C" void on_terminate(int sig) {
  og::kill_live_process_groups();
  signal(sig, SIG_DFL);
  raise(sig);
}

}  // namespace

int main(int argc, char** argv) {
  for (int sig : {SIGTERM, SIGINT, SIGHUP}) signal(sig, on_terminate);

  CLI::App app{"Measure the oracle gap (line coverage minus mutation score) of a project"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  Overrides o;
  app.add_option("--config", g.config, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "seed for every random choice");
  app.add_option("--jobs", g.jobs, "parallel mutant evaluations")->check(CLI::PositiveNumber);
  app.add_option("--output-dir", g.output_dir, "where artifacts are written");
  app.add_option("--set", g.settings, "override any configuration key (key=value)");

  auto* mutate = app.add_subcommand("mutate", "select files and generate the mutant sample");
  mutate->add_option("--project-root", o.project_root);
  mutate->add_option("--language", o.language, "java, c, cpp, go, python or generic");
  mutate->add_option("--coverage", o.coverage, "LCOV tracefile");
  mutate->add_option("--catalog", o.catalog, "JSON operator catalog");
  mutate->add_option("--mutant-cap", o.mutant_cap);
  mutate->add_option("--files-per-bucket", o.files_per_bucket);
  mutate->add_option("--file-cap", o.file_cap);
  mutate->add_option("--exclude", o.exclude, "path glob to skip");
  mutate->add_flag("--no-exclude-logging", o.no_exclude_logging, "mutate logging lines too");

  auto* run = app.add_subcommand("run", "evaluate every mutant against the test suite");
  run->add_option("--project-root", o.project_root);
  run->add_option("--test-command", o.test_command);
  run->add_option("--build-command", o.build_command);
  run->add_option("--timeout-factor", o.timeout_factor);
  run->add_option("--timeout-floor-ms", o.timeout_floor_ms);

  og::GapOptions gap_opts;
  auto* gap = app.add_subcommand("gap", "compute per-file gaps and flag suspects");
  gap->add_option("--coverage", o.coverage, "LCOV tracefile");
  gap->add_option("--format", gap_opts.format, "text, json or csv");
  gap->add_flag("--fail-on-suspect", gap_opts.fail_on_suspect, "exit 2 when a file is flagged");
  gap->add_option("--min-coverage", o.min_coverage, "suspect when coverage is above this");
  gap->add_option("--max-score", o.max_score, "suspect when the score is below this");
  gap->add_option("--scope", o.scope, "score used for suspects: raw or covered");
  gap->add_flag("--timeouts-survive", o.timeouts_survive, "do not count TIMEOUT as killed");

  std::string rank_by = "covered", rank_format = "text";
  auto* rank = app.add_subcommand("rank", "rank files of an existing gap report");
  rank->add_option("--by", rank_by, "raw or covered")->check(CLI::IsMember({"raw", "covered"}));
  rank->add_option("--format", rank_format, "text, json or csv");

  og::StatsOptions stats_opts;
  std::vector<std::string> stats_reports;
  auto* stats = app.add_subcommand("stats", "correlation, regression and variance over gap reports");
  stats->add_option("reports", stats_reports, "gap.json files, one per project");
  stats->add_option("--points-csv", stats_opts.points_csv, "write per-file points and residuals");
  stats->add_option("--format", stats_opts.format, "text or json");

  auto* ablate = app.add_subcommand("ablate", "knock out tests and asserts, re-measure the gap");
  ablate->add_option("--project-root", o.project_root);
  ablate->add_option("--samples", o.samples, "variants per shape with a 50% axis");
  ablate->add_option("--test-files", o.test_files, "glob naming test sources");
  ablate->add_option("--coverage-command", o.coverage_command);
  ablate->add_option("--test-command", o.test_command);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    const auto cfg = resolve(g, o);
    if (*mutate) return og::cmd_mutate(cfg, std::cout);
    if (*run) return og::cmd_run(cfg, std::cout);
    if (*gap) return og::cmd_gap(cfg, gap_opts, std::cout);
    if (*rank) return og::cmd_rank(cfg, rank_by, rank_format, std::cout);
    if (*stats) {
      for (const auto& r : stats_reports) stats_opts.reports.emplace_back(r);
      return og::cmd_stats(cfg, stats_opts, std::cout);
    }
    if (*ablate) return og::cmd_ablate(cfg, std::cout);
  } catch (const og::RedBaselineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
