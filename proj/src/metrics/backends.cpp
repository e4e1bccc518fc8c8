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
#include <set>
#include <string>
#include <vector>

#include "anonbench/error.hpp"
#include "anonbench/hash.hpp"
#include "anonbench/metrics.hpp"
#include "anonbench/utf8.hpp"

namespace anonbench::metrics {

namespace {

constexpr char32_t kBoundary = 0x02;

std::u32string lower_code_points(std::string_view text) {
  std::u32string cps = utf8::decode(text);
  for (char32_t& c : cps) c = utf8::ascii_lower(c);
  return cps;
}

}  // namespace

HashedNgramEmbedding::HashedNgramEmbedding(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ArgumentError("hashed_ngram: dimension must be positive");
}

std::vector<std::vector<double>> HashedNgramEmbedding::embed(
    std::span<const std::string> texts) const {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const std::string& text : texts) {
    std::vector<double> v(dim_, 0.0);
    if (!text.empty()) {
      const std::u32string padded = U" " + lower_code_points(text) + U" ";
      for (std::size_t n = 3; n <= 5; ++n) {
        for (std::size_t i = 0; i + n <= padded.size(); ++i) {
          const std::string gram = utf8::encode(std::u32string_view(padded).substr(i, n));
          v[fnv1a64(gram) % dim_] += 1.0;
        }
      }
      double norm = 0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      if (norm > 0) {
        for (double& x : v) x /= norm;
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

CharTrigramScorer::CharTrigramScorer(std::span<const std::string> reference_corpus) {
  std::set<char32_t> vocabulary;
  for (const std::string& text : reference_corpus) {
    const std::u32string cps = std::u32string(2, kBoundary) + utf8::decode(text);
    for (std::size_t i = 2; i < cps.size(); ++i) {
      vocabulary.insert(cps[i]);
      ++trigram_counts_[cps.substr(i - 2, 3)];
      ++context_counts_[cps.substr(i - 2, 2)];
    }
  }
  // One extra slot for characters never seen while fitting.
  vocabulary_size_ = static_cast<double>(vocabulary.size() + 1);
}

std::vector<double> CharTrigramScorer::score(std::span<const std::string> texts) const {
  std::vector<double> out;
  out.reserve(texts.size());
  for (const std::string& text : texts) {
    const std::u32string cps = std::u32string(2, kBoundary) + utf8::decode(text);
    if (cps.size() == 2) {
      out.push_back(0.0);
      continue;
    }
    double nll = 0;
    for (std::size_t i = 2; i < cps.size(); ++i) {
      const auto tri = trigram_counts_.find(cps.substr(i - 2, 3));
      const auto ctx = context_counts_.find(cps.substr(i - 2, 2));
      const double num = 1.0 + (tri == trigram_counts_.end() ? 0.0 : double(tri->second));
      const double den =
          vocabulary_size_ + (ctx == context_counts_.end() ? 0.0 : double(ctx->second));
      nll -= std::log(num / den);
    }
    out.push_back(nll / static_cast<double>(cps.size() - 2));
  }
  return out;
}

double embedding_similarity(std::string_view candidate, std::string_view reference,
                            const EmbeddingBackend& backend) {
  std::vector<std::vector<double>> vectors;
  try {
    const std::vector<std::string> texts = {std::string(candidate), std::string(reference)};
    vectors = backend.embed(texts);
  } catch (const std::exception& e) {
    throw Error("embedding backend " + backend.name() + ": " + e.what());
  }
  if (vectors.size() != 2 || vectors[0].size() != backend.dim() ||
      vectors[1].size() != backend.dim()) {
    throw Error("embedding backend " + backend.name() + ": wrong output shape");
  }
  double dot = 0;
  double na = 0;
  double nb = 0;
  for (std::size_t i = 0; i < backend.dim(); ++i) {
    dot += vectors[0][i] * vectors[1][i];
    na += vectors[0][i] * vectors[0][i];
    nb += vectors[1][i] * vectors[1][i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

std::vector<double> referenceless_score(std::span<const std::string> texts,
                                        const ScoringBackend& backend) {
  if (texts.empty()) return {};
  std::vector<double> scores;
  try {
    scores = backend.score(texts);
  } catch (const std::exception& e) {
    throw Error("scoring backend " + backend.name() + ": " + e.what());
  }
  if (scores.size() != texts.size()) {
    throw Error("scoring backend " + backend.name() + ": returned " +
                std::to_string(scores.size()) + " scores for " +
                std::to_string(texts.size()) + " texts");
  }
  return scores;
}

}  // namespace anonbench::metrics
