// Copyright 2026 The anonbench Authors.
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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "anonbench/analysis.hpp"
#include "anonbench/error.hpp"

namespace anonbench::analysis {

namespace {

std::int64_t tie_pairs(std::int64_t run) { return run * (run - 1) / 2; }

// Sorts `v` in place, returning the number of inversions.
std::int64_t merge_count(std::vector<double>& v, std::vector<double>& buffer, std::size_t lo,
                         std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = merge_count(v, buffer, lo, mid) + merge_count(v, buffer, mid, hi);
  std::size_t i = lo;
  std::size_t j = mid;
  std::size_t k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      buffer[k++] = v[j++];
    } else {
      buffer[k++] = v[i++];
    }
  }
  while (i < mid) buffer[k++] = v[i++];
  while (j < hi) buffer[k++] = v[j++];
  std::copy(buffer.begin() + static_cast<std::ptrdiff_t>(lo),
            buffer.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

double kendall_tau(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw ArgumentError("kendall_tau: lengths differ (" + std::to_string(xs.size()) + " vs " +
                        std::to_string(ys.size()) + ")");
  }
  const std::size_t n = xs.size();
  if (n < 2) throw ArgumentError("kendall_tau: need at least two values");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw ArgumentError("kendall_tau: non-finite value at index " + std::to_string(i));
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return xs[a] != xs[b] ? xs[a] < xs[b] : ys[a] < ys[b];
  });

  std::int64_t x_ties = 0;
  std::int64_t joint_ties = 0;
  std::int64_t x_run = 1;
  std::int64_t joint_run = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    const bool same_x = i < n && xs[order[i]] == xs[order[i - 1]];
    const bool same_joint = same_x && ys[order[i]] == ys[order[i - 1]];
    if (same_x) {
      ++x_run;
    } else {
      x_ties += tie_pairs(x_run);
      x_run = 1;
    }
    if (same_joint) {
      ++joint_run;
    } else {
      joint_ties += tie_pairs(joint_run);
      joint_run = 1;
    }
  }

  std::vector<double> y_sorted(n);
  for (std::size_t i = 0; i < n; ++i) y_sorted[i] = ys[order[i]];
  std::vector<double> buffer(n);
  const std::int64_t swaps = merge_count(y_sorted, buffer, 0, n);

  std::int64_t y_ties = 0;
  std::int64_t y_run = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && y_sorted[i] == y_sorted[i - 1]) {
      ++y_run;
    } else {
      y_ties += tie_pairs(y_run);
      y_run = 1;
    }
  }

  const std::int64_t n0 = tie_pairs(static_cast<std::int64_t>(n));
  if (n0 == x_ties || n0 == y_ties) {
    throw DegenerateInputError("kendall_tau: one side is entirely tied");
  }
  const std::int64_t numerator = n0 - x_ties - y_ties + joint_ties - 2 * swaps;
  const double denominator =
      std::sqrt(static_cast<double>(n0 - x_ties) * static_cast<double>(n0 - y_ties));
  return std::clamp(static_cast<double>(numerator) / denominator, -1.0, 1.0);
}

}  // namespace anonbench::analysis
