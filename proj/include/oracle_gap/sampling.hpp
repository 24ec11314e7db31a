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

#ifndef ORACLE_GAP_SAMPLING_HPP_
#define ORACLE_GAP_SAMPLING_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "oracle_gap/coverage.hpp"
#include "oracle_gap/error.hpp"
#include "oracle_gap/metrics.hpp"
#include "oracle_gap/operators.hpp"
#include "oracle_gap/rng.hpp"

namespace oracle_gap {

inline constexpr std::size_t kBucketCount = 4;

// Half-open coverage intervals except the last: [0,25) [25,50) [50,75)
// [75,100]. A boundary value belongs to the higher bucket.
inline constexpr std::array<std::string_view, kBucketCount> kBucketLabels = {
    "[0,25)", "[25,50)", "[50,75)", "[75,100]"};

struct BucketPlan {
  std::size_t per_bucket = 25;
  std::size_t mutant_cap = 100;
  std::size_t file_cap = 100;
  std::uint64_t seed = 0;

  void validate() const {
    if (per_bucket < 1 || mutant_cap < 1 || file_cap < 1) {
      throw UsageError("sampling caps must be >= 1");
    }
  }
};

inline std::size_t bucket_index(const Fraction& coverage) {
  const Fraction pct = coverage * std::int64_t{100};
  if (pct < 25) return 0;
  if (pct < 50) return 1;
  if (pct < 75) return 2;
  return 3;
}

inline std::size_t bucket_index_percent(double pct) {
  if (pct < 25.0) return 0;
  if (pct < 50.0) return 1;
  if (pct < 75.0) return 2;
  return 3;
}

using Buckets = std::array<std::vector<std::string>, kBucketCount>;

// Every file with at least one instrumented line, by coverage bucket. Paths
// within a bucket are in lexicographic order.
inline Buckets bucket_files(const CoverageMap& coverage_map) {
  Buckets out;
  for (const auto& [path, fc] : coverage_map.entries) {
    if (fc.hits.empty()) continue;
    Fraction cov(static_cast<std::int64_t>(fc.covered_count()),
                 static_cast<std::int64_t>(fc.instrumented_count()));
    out[bucket_index(cov)].push_back(path);
  }
  return out;
}

struct FileSelection {
  Buckets per_bucket;
  std::vector<std::string> ordered;
};

// min(per_bucket, |bucket|) files from each bucket, seeded, without
// replacement. If the total exceeds file_cap the buckets are interleaved
// round-robin before truncating.
inline FileSelection sample_files(const Buckets& buckets,
                                  const BucketPlan& plan) {
  plan.validate();
  FileSelection sel;
  for (std::size_t b = 0; b < kBucketCount; ++b) {
    Rng rng(derive_seed(plan.seed, "bucket:" + std::to_string(b)));
    for (auto i : sample_indices(buckets[b].size(), plan.per_bucket, rng)) {
      sel.per_bucket[b].push_back(buckets[b][i]);
    }
  }
  std::size_t total = 0;
  for (const auto& b : sel.per_bucket) total += b.size();
  if (total <= plan.file_cap) {
    for (const auto& b : sel.per_bucket) {
      sel.ordered.insert(sel.ordered.end(), b.begin(), b.end());
    }
    return sel;
  }
  Buckets kept;
  std::size_t taken = 0;
  for (std::size_t round = 0; taken < plan.file_cap; ++round) {
    for (std::size_t b = 0; b < kBucketCount && taken < plan.file_cap; ++b) {
      if (round < sel.per_bucket[b].size()) {
        kept[b].push_back(sel.per_bucket[b][round]);
        ++taken;
      }
    }
  }
  sel.per_bucket = kept;
  for (const auto& b : sel.per_bucket) {
    sel.ordered.insert(sel.ordered.end(), b.begin(), b.end());
  }
  return sel;
}

// min(mutant_cap, |mutants|) mutants in their original order. The draw is
// keyed on the file path, so one file's sample never depends on another's.
inline std::vector<Mutant> sample_mutants(const std::vector<Mutant>& mutants,
                                          const BucketPlan& plan) {
  plan.validate();
  if (mutants.empty()) return {};
  Rng rng(derive_seed(plan.seed, "mutants:" + mutants.front().path));
  std::vector<Mutant> out;
  for (auto i : sample_indices(mutants.size(), plan.mutant_cap, rng)) {
    out.push_back(mutants[i]);
  }
  return out;
}

}  // namespace oracle_gap

#endif  // ORACLE_GAP_SAMPLING_HPP_
