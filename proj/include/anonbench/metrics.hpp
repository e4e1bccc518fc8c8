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

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace anonbench::metrics {

using ScoreMap = std::map<std::string, double>;

/// ASCII-lowercases, splits on Unicode whitespace, strips leading and
/// trailing punctuation from each token and drops empty tokens.
std::vector<std::string> tokenize(std::string_view text);

/// Clipped n-gram overlap; keys precision, recall, f1. Throws ArgumentError
/// for n < 1.
ScoreMap rouge_n(std::string_view candidate, std::string_view reference, int n);

/// Longest-common-subsequence variant; keys precision, recall, f1.
ScoreMap rouge_l(std::string_view candidate, std::string_view reference);

std::size_t lcs_length(std::span<const std::string> a,
                       std::span<const std::string> b);

/// METEOR with the exact-match stage only ("meteor-exact").
double meteor(std::string_view candidate, std::string_view reference);

// ---------------------------------------------------------------------------
// Backends

class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  virtual const std::string& name() const = 0;
  virtual std::size_t dim() const = 0;
  virtual std::vector<std::vector<double>> embed(
      std::span<const std::string> texts) const = 0;
  virtual bool concurrent_safe() const { return true; }
};

/// Hashed character 3-5-gram counts, L2-normalized. Texts are ASCII-lowercased
/// and padded with one space on each side before n-gram extraction.
class HashedNgramEmbedding final : public EmbeddingBackend {
 public:
  static constexpr std::size_t kDefaultDim = std::size_t{1} << 15;

  explicit HashedNgramEmbedding(std::size_t dim = kDefaultDim);

  const std::string& name() const override { return name_; }
  std::size_t dim() const override { return dim_; }
  std::vector<std::vector<double>> embed(
      std::span<const std::string> texts) const override;

 private:
  std::string name_ = "hashed_ngram";
  std::size_t dim_;
};

enum class Direction { kHigherBetter, kLowerBetter };

class ScoringBackend {
 public:
  virtual ~ScoringBackend() = default;
  virtual const std::string& name() const = 0;
  virtual Direction direction() const = 0;
  virtual std::vector<double> score(std::span<const std::string> texts) const = 0;
  virtual bool concurrent_safe() const { return true; }
};

/// Character trigram language model with add-one smoothing. Scores are the
/// per-character negative log-likelihood (lower is better); the empty text
/// scores 0.
class CharTrigramScorer final : public ScoringBackend {
 public:
  explicit CharTrigramScorer(std::span<const std::string> reference_corpus);

  const std::string& name() const override { return name_; }
  Direction direction() const override { return Direction::kLowerBetter; }
  std::vector<double> score(std::span<const std::string> texts) const override;

 private:
  std::string name_ = "char_trigram";
  std::map<std::u32string, std::size_t> trigram_counts_;
  std::map<std::u32string, std::size_t> context_counts_;
  double vocabulary_size_ = 1;
};

/// Cosine similarity of the two embeddings; 0 if either vector is zero.
/// Backend failures are rethrown as Error prefixed with the backend name.
double embedding_similarity(std::string_view candidate,
                            std::string_view reference,
                            const EmbeddingBackend& backend);

std::vector<double> referenceless_score(std::span<const std::string> texts,
                                        const ScoringBackend& backend);

// ---------------------------------------------------------------------------
// Metric plumbing

/// A named scoring function over one text (the anonymized one) or a pair.
/// Pair metrics receive (candidate = anonymized, reference = original).
struct Metric {
  using Unary = std::function<ScoreMap(std::string_view text)>;
  using Binary = std::function<ScoreMap(std::string_view candidate,
                                        std::string_view reference)>;

  std::string name;
  Unary unary;
  Binary binary;
  /// Key reported as the metric's headline value.
  std::string primary_key = "score";
  bool concurrent_safe = true;

  static Metric from_unary(std::string name, Unary fn,
                           std::string primary_key = "score");
  static Metric from_binary(std::string name, Binary fn,
                            std::string primary_key = "score");

  /// Scores one (original, anonymized) pair.
  ScoreMap operator()(std::string_view original,
                      std::string_view anonymized) const;
};

struct MetricReport {
  std::string metric_name;
  std::vector<ScoreMap> per_pair;
  ScoreMap aggregate;
};

using TextPair = std::pair<std::string, std::string>;

/// Scores every (original, anonymized) pair and averages each score name.
/// Throws ArgumentError on an empty pair list and ValidationError when pairs
/// disagree on score names. Runs on up to `workers` threads when the metric
/// is concurrent-safe.
MetricReport aggregate_fidelity(std::span<const TextPair> pairs,
                                const Metric& metric, std::size_t workers = 1);

/// Inputs available when a metric is built by name.
struct MetricContext {
  /// Backend selection, e.g. {"embedding": {"name": "hashed_ngram"},
  /// "referenceless": {"name": "char_trigram"}}.
  nlohmann::json backends = nlohmann::json::object();
  /// Fitting corpus for reference-less scorers.
  std::vector<std::string> reference_corpus;
};

using MetricFactory = std::function<Metric(const MetricContext&)>;
using EmbeddingFactory =
    std::function<std::shared_ptr<const EmbeddingBackend>(const nlohmann::json&)>;
using ScoringFactory = std::function<std::shared_ptr<const ScoringBackend>(
    const nlohmann::json&, std::span<const std::string> reference_corpus)>;

void register_metric(const std::string& name, MetricFactory factory);
void register_embedding_backend(const std::string& name, EmbeddingFactory factory);
void register_scoring_backend(const std::string& name, ScoringFactory factory);

/// Builds a registered metric. Built-ins: rouge1, rouge2, rougeL, meteor,
/// embed_sim, referenceless. Throws ConfigError for unknown names.
Metric make_metric(const std::string& name, const MetricContext& context = {});

bool is_registered_metric(const std::string& name);

}  // namespace anonbench::metrics
