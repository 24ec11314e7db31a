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

#ifndef ORACLE_GAP_STATS_HPP_
#define ORACLE_GAP_STATS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "oracle_gap/error.hpp"
#include "oracle_gap/metrics.hpp"
#include "oracle_gap/sampling.hpp"

namespace oracle_gap::stats {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw DegenerateInputError("mean of an empty series");
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

// Population variance (divides by n), two-pass.
inline double population_variance(std::span<const double> xs) {
  const double m = mean(xs);
  if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs[0]; })) {
    return 0.0;
  }
  CompensatedSum s;
  for (double x : xs) s.add((x - m) * (x - m));
  return s.value() / static_cast<double>(xs.size());
}

struct Moments {
  double mean_x = 0, mean_y = 0;
  double sxx = 0, syy = 0, sxy = 0;
};

inline Moments moments(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw DegenerateInputError("series lengths differ");
  }
  if (xs.size() < 2) throw DegenerateInputError("need at least two points");
  Moments m;
  m.mean_x = mean(xs);
  m.mean_y = mean(ys);
  CompensatedSum sxx, syy, sxy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - m.mean_x;
    const double dy = ys[i] - m.mean_y;
    sxx.add(dx * dx);
    syy.add(dy * dy);
    sxy.add(dx * dy);
  }
  m.sxx = sxx.value();
  m.syy = syy.value();
  m.sxy = sxy.value();
  // A constant series has no spread even when its mean rounds off c.
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
  };
  if (constant(xs)) m.sxx = m.sxy = 0.0;
  if (constant(ys)) m.syy = m.sxy = 0.0;
  return m;
}

struct RegressionFit {
  double slope = 0;
  double intercept = 0;
  double r = 0;          // NaN when ys is constant
  double r_squared = 0;  // NaN when ys is constant
  std::vector<double> residuals;
};

// Ordinary least squares y = slope*x + intercept, files weighted equally.
inline RegressionFit linear_regression(std::span<const double> xs,
                                       std::span<const double> ys) {
  const auto m = moments(xs, ys);
  if (m.sxx == 0.0) throw DegenerateInputError("all x values are equal");
  RegressionFit fit;
  fit.slope = m.sxy / m.sxx;
  fit.intercept = m.mean_y - fit.slope * m.mean_x;
  if (m.syy == 0.0) {
    fit.r = fit.r_squared = std::numeric_limits<double>::quiet_NaN();
  } else {
    fit.r = std::clamp(m.sxy / std::sqrt(m.sxx * m.syy), -1.0, 1.0);
    fit.r_squared = fit.r * fit.r;
  }
  fit.residuals.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fit.residuals.push_back(ys[i] - (fit.slope * xs[i] + fit.intercept));
  }
  return fit;
}

inline double pearson(std::span<const double> xs, std::span<const double> ys) {
  const auto m = moments(xs, ys);
  if (m.sxx == 0.0 || m.syy == 0.0) {
    throw DegenerateInputError("zero variance series: correlation undefined");
  }
  return std::clamp(m.sxy / std::sqrt(m.sxx * m.syy), -1.0, 1.0);
}

// 1-based ranks; tied values share the mean of the ranks they span.
inline std::vector<double> fractional_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

inline double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw DegenerateInputError("series lengths differ");
  }
  const auto rx = fractional_ranks(xs);
  const auto ry = fractional_ranks(ys);
  return pearson(rx, ry);
}

enum class GapKind { kRaw, kCovered };

inline std::string_view to_string(GapKind k) {
  return k == GapKind::kRaw ? "raw" : "covered";
}

inline std::optional<double> gap_of(const FileGapReport& r, GapKind kind) {
  return to_double(kind == GapKind::kRaw ? r.raw_gap() : r.covered_gap());
}

struct BucketVariance {
  std::array<std::size_t, kBucketCount> counts{};
  std::array<std::optional<double>, kBucketCount> per_bucket;  // <2 points: absent
  std::optional<double> overall;
};

// Population variance of gap values (percentage points) per coverage bucket.
// `coverage_pct` selects the bucket of each gap.
inline BucketVariance bucket_variance(std::span<const double> coverage_pct,
                                      std::span<const double> gaps) {
  if (coverage_pct.size() != gaps.size()) {
    throw DegenerateInputError("series lengths differ");
  }
  std::array<std::vector<double>, kBucketCount> split;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    split[bucket_index_percent(coverage_pct[i])].push_back(gaps[i]);
  }
  BucketVariance out;
  for (std::size_t b = 0; b < kBucketCount; ++b) {
    out.counts[b] = split[b].size();
    if (split[b].size() >= 2) out.per_bucket[b] = population_variance(split[b]);
  }
  if (gaps.size() >= 2) out.overall = population_variance(gaps);
  return out;
}

inline BucketVariance bucket_variance(const std::vector<FileGapReport>& reports,
                                      GapKind kind) {
  std::vector<double> cov, gaps;
  for (const auto& r : reports) {
    auto c = r.coverage();
    auto g = gap_of(r, kind);
    if (!c || !g) continue;
    cov.push_back(100.0 * to_double(*c));
    gaps.push_back(*g);
  }
  return bucket_variance(cov, gaps);
}

struct GroupedVariance {
  double mean_within = 0;  // mean of per-group population variances
  double overall = 0;      // population variance of all values pooled
  std::size_t groups_used = 0;
};

// Groups with fewer than two values carry no within-group spread and are
// left out of the mean; they still count toward the pooled variance.
inline GroupedVariance grouped_variance(
    const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw DegenerateInputError("need at least two groups");
  GroupedVariance out;
  std::vector<double> pooled, within;
  for (const auto& g : groups) {
    pooled.insert(pooled.end(), g.begin(), g.end());
    if (g.size() >= 2) within.push_back(population_variance(g));
  }
  if (within.empty()) {
    throw DegenerateInputError("every group has fewer than two values");
  }
  out.mean_within = mean(within);
  out.overall = population_variance(pooled);
  out.groups_used = within.size();
  return out;
}

inline GroupedVariance grouped_variance(
    const std::vector<std::vector<FileGapReport>>& projects, GapKind kind) {
  std::vector<std::vector<double>> groups;
  for (const auto& p : projects) {
    auto& g = groups.emplace_back();
    for (const auto& r : p) {
      if (auto v = gap_of(r, kind)) g.push_back(*v);
    }
  }
  return grouped_variance(groups);
}

}  // namespace oracle_gap::stats

#endif  // ORACLE_GAP_STATS_HPP_
