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

#ifndef ORACLE_GAP_EXECUTOR_HPP_
#define ORACLE_GAP_EXECUTOR_HPP_

#include <stdlib.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "oracle_gap/error.hpp"
#include "oracle_gap/operators.hpp"
#include "oracle_gap/process.hpp"
#include "oracle_gap/rng.hpp"
#include "oracle_gap/text.hpp"

namespace oracle_gap {

namespace fs = std::filesystem;

enum class Verdict { kKilled, kSurvived, kTimeout, kInvalid };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kKilled: return "KILLED";
    case Verdict::kSurvived: return "SURVIVED";
    case Verdict::kTimeout: return "TIMEOUT";
    case Verdict::kInvalid: return "INVALID";
  }
  return "?";
}

inline Verdict parse_verdict(std::string_view s) {
  for (auto v : {Verdict::kKilled, Verdict::kSurvived, Verdict::kTimeout,
                 Verdict::kInvalid}) {
    if (to_string(v) == s) return v;
  }
  throw Error("unknown verdict '" + std::string(s) + "'");
}

struct MutantOutcome {
  std::string mutant_id;
  Verdict verdict = Verdict::kInvalid;
  long long duration_ms = 0;
  std::string detail;
};

struct CampaignConfig {
  std::string test_command;
  std::string build_command;  // empty: no build step
  double timeout_factor = 10.0;
  long long timeout_floor_ms = 2000;
  int jobs = 1;
  std::uint64_t seed = 0;
  fs::path workspace_root;  // empty: system temp directory
  std::vector<fs::path> copy_excludes;

  void validate() const {
    if (test_command.empty()) throw UsageError("test_command is required");
    if (!(timeout_factor > 0)) throw UsageError("timeout_factor must be > 0");
    if (jobs < 1) throw UsageError("jobs must be >= 1");
  }

  long long timeout_for(long long baseline_ms) const {
    auto scaled = static_cast<long long>(timeout_factor *
                                         static_cast<double>(baseline_ms));
    return std::max(timeout_floor_ms, scaled);
  }
};

struct CampaignHeader {
  std::uint64_t seed = 0;
  long long timeout_ms = 0;
  long long baseline_ms = 0;
  std::string test_command;
  std::string build_command;
  std::string started_at;
  std::string mutants_digest;
};

struct CampaignResult {
  CampaignHeader header;
  std::vector<MutantOutcome> outcomes;  // same order as the input mutants
};

inline std::string utc_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string mutants_digest(const std::vector<Mutant>& mutants) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(
                    fnv1a64(write_mutants_jsonl(mutants))));
  return buf;
}

// ---------------------------------------------------------------------------
// Workspaces

inline void copy_tree(const fs::path& from, const fs::path& to,
                      const std::vector<fs::path>& excludes = {}) {
  std::vector<fs::path> abs_excludes;
  for (const auto& e : excludes) {
    std::error_code ec;
    auto c = fs::weakly_canonical(e, ec);
    abs_excludes.push_back(ec ? fs::absolute(e) : c);
  }
  fs::create_directories(to);
  for (auto it = fs::recursive_directory_iterator(from);
       it != fs::recursive_directory_iterator(); ++it) {
    const auto& entry = *it;
    const auto name = entry.path().filename().string();
    std::error_code ec;
    auto canon = fs::weakly_canonical(entry.path(), ec);
    bool skip = name == ".git" ||
                std::find(abs_excludes.begin(), abs_excludes.end(), canon) !=
                    abs_excludes.end();
    if (skip) {
      if (entry.is_directory()) it.disable_recursion_pending();
      continue;
    }
    auto target = to / fs::relative(entry.path(), from);
    if (entry.is_symlink()) {
      fs::copy_symlink(entry.path(), target);
    } else if (entry.is_directory()) {
      fs::create_directories(target);
    } else {
      fs::copy_file(entry.path(), target, fs::copy_options::overwrite_existing);
    }
  }
}

inline fs::path make_temp_dir(const fs::path& parent, const std::string& stem) {
  auto base = parent.empty() ? fs::temp_directory_path() : parent;
  fs::create_directories(base);
  std::string tmpl = (base / (stem + "-XXXXXX")).string();
  if (mkdtemp(tmpl.data()) == nullptr) {
    throw Error("cannot create workspace under " + base.string());
  }
  return tmpl;
}

// A private copy of a project tree, deleted on destruction.
class Workspace {
 public:
  Workspace(const fs::path& project_root, const fs::path& parent,
            const std::vector<fs::path>& excludes = {})
      : dir_(make_temp_dir(parent, "oracle-gap-ws")) {
    try {
      copy_tree(project_root, dir_ / "tree", excludes);
    } catch (...) {
      std::error_code ec;
      fs::remove_all(dir_, ec);
      throw;
    }
  }
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;
  ~Workspace() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }

  fs::path root() const { return dir_ / "tree"; }

 private:
  fs::path dir_;
};

// ---------------------------------------------------------------------------
// Evaluation

// Wall-clock duration of one clean build+test run in `tree`. Throws
// RedBaselineError if either step fails.
inline long long baseline_in_place(const fs::path& tree,
                                   const CampaignConfig& config) {
  long long total = 0;
  if (!config.build_command.empty()) {
    auto b = run_shell(config.build_command, tree, 0);
    if (b.exit_code != 0) {
      throw RedBaselineError("red baseline: build command failed (exit " +
                             std::to_string(b.exit_code) + "): " +
                             b.output_tail);
    }
    total += b.duration_ms;
  }
  auto t = run_shell(config.test_command, tree, 0);
  if (t.exit_code != 0) {
    throw RedBaselineError("red baseline: test command failed (exit " +
                           std::to_string(t.exit_code) + "): " + t.output_tail);
  }
  total += t.duration_ms;
  return std::max<long long>(total, 1);
}

// As above, but in a scratch copy so the project tree is never touched.
inline long long baseline_check(const fs::path& project_root,
                                const CampaignConfig& config) {
  config.validate();
  Workspace ws(project_root, config.workspace_root, config.copy_excludes);
  return baseline_in_place(ws.root(), config);
}

// Applies `mutant` inside `workspace`, runs build and tests, and puts the
// original file back before returning.
inline MutantOutcome evaluate_mutant(const fs::path& workspace,
                                     const Mutant& mutant,
                                     const CampaignConfig& config,
                                     long long timeout_ms) {
  MutantOutcome out;
  out.mutant_id = mutant.id;
  const auto file = workspace / mutant.path;

  std::string pristine;
  std::string mutated;
  try {
    pristine = read_file(file);
    mutated = apply_mutant(pristine, mutant);
  } catch (const StaleMutantError&) {
    out.verdict = Verdict::kInvalid;
    out.detail = "stale";
    return out;
  } catch (const Error& e) {
    out.verdict = Verdict::kInvalid;
    out.detail = std::string("stale: ") + e.what();
    return out;
  }

  struct Restore {
    const fs::path& file;
    const std::string& text;
    ~Restore() {
      try {
        write_file(file, text);
      } catch (...) {
      }
    }
  } restore{file, pristine};
  write_file(file, mutated);

  const std::map<std::string, std::string> env = {
      {"ORACLE_GAP_MUTANT_ID", mutant.id}};
  auto last_line = [](const std::string& s) {
    auto t = std::string(trim(s));
    auto nl = t.rfind('\n');
    return nl == std::string::npos ? t : t.substr(nl + 1);
  };

  if (!config.build_command.empty()) {
    auto b = run_shell(config.build_command, workspace, timeout_ms, env);
    if (b.timed_out) {
      out.verdict = Verdict::kInvalid;
      out.duration_ms = b.duration_ms;
      out.detail = "build timeout";
      return out;
    }
    if (b.exit_code != 0) {
      out.verdict = Verdict::kInvalid;
      out.duration_ms = b.duration_ms;
      out.detail = "build failed (exit " + std::to_string(b.exit_code) +
                   "): " + last_line(b.output_tail);
      return out;
    }
  }

  auto t = run_shell(config.test_command, workspace, timeout_ms, env);
  if (t.timed_out) {
    out.verdict = Verdict::kTimeout;
    out.duration_ms = t.duration_ms;
    out.detail = "timeout after " + std::to_string(timeout_ms) + " ms";
    return out;
  }
  out.duration_ms = std::min(t.duration_ms, timeout_ms);
  if (t.exit_code == 0) {
    out.verdict = Verdict::kSurvived;
    out.detail = "exit 0";
  } else {
    out.verdict = Verdict::kKilled;
    out.detail = t.exit_code < 0 ? std::string("signal")
                                 : "exit " + std::to_string(t.exit_code);
  }
  return out;
}

struct CampaignHooks {
  // Called once per freshly evaluated mutant, serialized under a lock.
  std::function<void(std::size_t index, const MutantOutcome&)> on_outcome;
  // Outcomes recovered from an interrupted run, keyed by mutant id.
  const std::unordered_map<std::string, MutantOutcome>* completed = nullptr;
  // Header of the interrupted run; its timeout is reused so resumed verdicts
  // are judged by the same budget.
  std::optional<CampaignHeader> resume_header;
  // Called after the baseline passes, before any mutant runs.
  std::function<void(const CampaignHeader&)> on_header;
};

inline CampaignResult run_campaign(const fs::path& project_root,
                                   const std::vector<Mutant>& mutants,
                                   const CampaignConfig& config,
                                   const CampaignHooks& hooks = {}) {
  config.validate();
  CampaignResult result;
  result.header.seed = config.seed;
  result.header.test_command = config.test_command;
  result.header.build_command = config.build_command;
  result.header.started_at = utc_timestamp();
  result.header.mutants_digest = mutants_digest(mutants);
  if (mutants.empty()) return result;

  std::vector<std::size_t> pending;
  result.outcomes.resize(mutants.size());
  for (std::size_t i = 0; i < mutants.size(); ++i) {
    if (hooks.completed) {
      auto it = hooks.completed->find(mutants[i].id);
      if (it != hooks.completed->end()) {
        result.outcomes[i] = it->second;
        continue;
      }
    }
    pending.push_back(i);
  }

  const auto n_workers = static_cast<std::size_t>(
      std::max<std::size_t>(1, std::min<std::size_t>(
                                   static_cast<std::size_t>(config.jobs),
                                   std::max<std::size_t>(pending.size(), 1))));
  std::vector<std::unique_ptr<Workspace>> workspaces;
  for (std::size_t w = 0; w < n_workers; ++w) {
    workspaces.push_back(std::make_unique<Workspace>(
        project_root, config.workspace_root, config.copy_excludes));
  }

  result.header.baseline_ms = baseline_in_place(workspaces[0]->root(), config);
  result.header.timeout_ms = config.timeout_for(result.header.baseline_ms);
  if (hooks.resume_header) {
    result.header.baseline_ms = hooks.resume_header->baseline_ms;
    result.header.timeout_ms = hooks.resume_header->timeout_ms;
    result.header.started_at = hooks.resume_header->started_at;
  }
  if (hooks.on_header) hooks.on_header(result.header);

  std::atomic<std::size_t> next{0};
  std::mutex mu;
  auto worker = [&](std::size_t w) {
    const auto root = workspaces[w]->root();
    for (;;) {
      const auto k = next.fetch_add(1);
      if (k >= pending.size()) return;
      const auto i = pending[k];
      MutantOutcome o;
      try {
        o = evaluate_mutant(root, mutants[i], config, result.header.timeout_ms);
      } catch (const std::exception& e) {
        o.mutant_id = mutants[i].id;
        o.verdict = Verdict::kInvalid;
        o.detail = std::string("error: ") + e.what();
      }
      std::lock_guard<std::mutex> lock(mu);
      result.outcomes[i] = o;
      if (hooks.on_outcome) hooks.on_outcome(i, o);
    }
  };
  if (n_workers == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < n_workers; ++w) threads.emplace_back(worker, w);
    for (auto& t : threads) t.join();
  }
  return result;
}

// ---------------------------------------------------------------------------
// Persistence

inline nlohmann::ordered_json header_json(const CampaignHeader& h) {
  return {{"record", "header"},          {"seed", h.seed},
          {"timeout_ms", h.timeout_ms},  {"baseline_ms", h.baseline_ms},
          {"test_command", h.test_command},
          {"build_command", h.build_command},
          {"started_at", h.started_at},  {"mutants_digest", h.mutants_digest}};
}

inline nlohmann::ordered_json outcome_json(const MutantOutcome& o) {
  return {{"mutant_id", o.mutant_id},
          {"verdict", std::string(to_string(o.verdict))},
          {"duration_ms", o.duration_ms},
          {"detail", o.detail}};
}

inline std::string write_outcomes_jsonl(const CampaignResult& r) {
  std::string out = header_json(r.header).dump() + "\n";
  for (const auto& o : r.outcomes) out += outcome_json(o).dump() + "\n";
  return out;
}

// Tolerates a truncated final line (an interrupted writer); any other
// malformed record is an error.
inline CampaignResult read_outcomes_jsonl(std::string_view text,
                                          const std::string& source =
                                              "outcomes.jsonl",
                                          bool allow_truncated_tail = false) {
  CampaignResult r;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.lines.size(); ++i) {
    const auto& line = lines.lines[i];
    if (trim(line).empty()) continue;
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      const bool last = i + 1 == lines.lines.size() && !lines.trailing_newline;
      if (allow_truncated_tail && last) break;
      throw ParseError(source, i + 1, e.what());
    }
    try {
      if (j.contains("record") && j["record"] == "header") {
        auto& h = r.header;
        h.seed = j.value("seed", std::uint64_t{0});
        h.timeout_ms = j.value("timeout_ms", 0LL);
        h.baseline_ms = j.value("baseline_ms", 0LL);
        h.test_command = j.value("test_command", std::string());
        h.build_command = j.value("build_command", std::string());
        h.started_at = j.value("started_at", std::string());
        h.mutants_digest = j.value("mutants_digest", std::string());
        continue;
      }
      MutantOutcome o;
      j.at("mutant_id").get_to(o.mutant_id);
      o.verdict = parse_verdict(j.at("verdict").get<std::string>());
      o.duration_ms = j.value("duration_ms", 0LL);
      o.detail = j.value("detail", std::string());
      r.outcomes.push_back(std::move(o));
    } catch (const std::exception& e) {
      throw ParseError(source, i + 1, e.what());
    }
  }
  return r;
}

}  // namespace oracle_gap

#endif  // ORACLE_GAP_EXECUTOR_HPP_
