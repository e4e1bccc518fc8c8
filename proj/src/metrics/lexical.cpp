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
#include <map>
#include <string>
#include <vector>

#include "anonbench/error.hpp"
#include "anonbench/metrics.hpp"
#include "anonbench/utf8.hpp"

namespace anonbench::metrics {

namespace {

ScoreMap prf(double precision, double recall) {
  const double f1 =
      precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
  return {{"precision", precision}, {"recall", recall}, {"f1", f1}};
}

ScoreMap all_ones() { return prf(1.0, 1.0); }
ScoreMap all_zeros() { return prf(0.0, 0.0); }

std::map<std::vector<std::string>, std::size_t> ngram_counts(
    const std::vector<std::string>& tokens, std::size_t n) {
  std::map<std::vector<std::string>, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  const std::u32string cps = utf8::decode(text);
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && utf8::is_space(cps[i])) ++i;
    std::size_t j = i;
    while (j < cps.size() && !utf8::is_space(cps[j])) ++j;
    std::size_t b = i;
    std::size_t e = j;
    while (b < e && utf8::is_punct(cps[b])) ++b;
    while (e > b && utf8::is_punct(cps[e - 1])) --e;
    if (b < e) {
      std::u32string token = cps.substr(b, e - b);
      for (char32_t& c : token) c = utf8::ascii_lower(c);
      tokens.push_back(utf8::encode(token));
    }
    i = j;
  }
  return tokens;
}

ScoreMap rouge_n(std::string_view candidate, std::string_view reference, int n) {
  if (n < 1) throw ArgumentError("rouge_n: n must be at least 1, got " + std::to_string(n));
  const auto cand = ngram_counts(tokenize(candidate), static_cast<std::size_t>(n));
  const auto ref = ngram_counts(tokenize(reference), static_cast<std::size_t>(n));
  if (cand.empty() && ref.empty()) return all_ones();
  if (cand.empty() || ref.empty()) return all_zeros();

  std::size_t cand_total = 0;
  std::size_t overlap = 0;
  for (const auto& [gram, count] : cand) {
    cand_total += count;
    if (auto it = ref.find(gram); it != ref.end()) overlap += std::min(count, it->second);
  }
  std::size_t ref_total = 0;
  for (const auto& [gram, count] : ref) ref_total += count;
  return prf(static_cast<double>(overlap) / static_cast<double>(cand_total),
             static_cast<double>(overlap) / static_cast<double>(ref_total));
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

ScoreMap rouge_l(std::string_view candidate, std::string_view reference) {
  const auto cand = tokenize(candidate);
  const auto ref = tokenize(reference);
  if (cand.empty() && ref.empty()) return all_ones();
  if (cand.empty() || ref.empty()) return all_zeros();
  const double lcs = static_cast<double>(lcs_length(cand, ref));
  return prf(lcs / static_cast<double>(cand.size()), lcs / static_cast<double>(ref.size()));
}

double meteor(std::string_view candidate, std::string_view reference) {
  const auto cand = tokenize(candidate);
  const auto ref = tokenize(reference);
  if (cand.empty() && ref.empty()) return 1.0;
  if (cand.empty() || ref.empty()) return 0.0;

  // Greedy alignment in candidate order: continue the running chunk when the
  // next reference token matches, else take the earliest unused match.
  std::vector<bool> used(ref.size(), false);
  std::size_t matches = 0;
  std::size_t chunks = 0;
  bool prev_matched = false;
  std::size_t prev_ref = 0;
  for (const std::string& token : cand) {
    std::size_t target = ref.size();
    if (prev_matched && prev_ref + 1 < ref.size() && !used[prev_ref + 1] &&
        ref[prev_ref + 1] == token) {
      target = prev_ref + 1;
    } else {
      for (std::size_t j = 0; j < ref.size(); ++j) {
        if (!used[j] && ref[j] == token) {
          target = j;
          break;
        }
      }
    }
    if (target == ref.size()) {
      prev_matched = false;
      continue;
    }
    if (!(prev_matched && target == prev_ref + 1)) ++chunks;
    used[target] = true;
    ++matches;
    prev_matched = true;
    prev_ref = target;
  }
  if (matches == 0) return 0.0;

  const double m = static_cast<double>(matches);
  const double precision = m / static_cast<double>(cand.size());
  const double recall = m / static_cast<double>(ref.size());
  const double fmean = 10 * precision * recall / (recall + 9 * precision);
  const double frag = static_cast<double>(chunks) / m;
  const double penalty = 0.5 * frag * frag * frag;
  return fmean * (1 - penalty);
}

}  // namespace anonbench::metrics
