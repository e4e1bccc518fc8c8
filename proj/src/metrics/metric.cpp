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

#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "anonbench/error.hpp"
#include "anonbench/metrics.hpp"
#include "anonbench/parallel.hpp"

namespace anonbench::metrics {

namespace {

template <typename Factory>
struct Registry {
  std::mutex mutex;
  std::map<std::string, Factory> entries;

  void put(const std::string& name, Factory f) {
    std::lock_guard lock(mutex);
    entries[name] = std::move(f);
  }
  std::optional<Factory> get(const std::string& name) {
    std::lock_guard lock(mutex);
    auto it = entries.find(name);
    if (it == entries.end()) return std::nullopt;
    return it->second;
  }
};

std::string backend_name(const nlohmann::json& backends, const char* slot,
                         const char* fallback) {
  if (!backends.contains(slot)) return fallback;
  const auto& entry = backends.at(slot);
  if (!entry.is_object()) throw ConfigError(std::string("backends.") + slot + " must be an object");
  return entry.value("name", std::string(fallback));
}

nlohmann::json backend_config(const nlohmann::json& backends, const char* slot) {
  return backends.contains(slot) ? backends.at(slot) : nlohmann::json::object();
}

Registry<EmbeddingFactory>& embedding_registry() {
  static Registry<EmbeddingFactory> r;
  static std::once_flag once;
  std::call_once(once, [] {
    r.put("hashed_ngram", [](const nlohmann::json& config) {
      const auto dim = config.value("dim", HashedNgramEmbedding::kDefaultDim);
      return std::make_shared<const HashedNgramEmbedding>(dim);
    });
  });
  return r;
}

Registry<ScoringFactory>& scoring_registry() {
  static Registry<ScoringFactory> r;
  static std::once_flag once;
  std::call_once(once, [] {
    r.put("char_trigram", [](const nlohmann::json&, std::span<const std::string> corpus) {
      return std::make_shared<const CharTrigramScorer>(corpus);
    });
  });
  return r;
}

Metric rouge_metric(std::string name, int n) {
  return Metric::from_binary(
      std::move(name),
      [n](std::string_view c, std::string_view r) { return rouge_n(c, r, n); }, "f1");
}

Registry<MetricFactory>& metric_registry() {
  static Registry<MetricFactory> r;
  static std::once_flag once;
  std::call_once(once, [] {
    r.put("rouge1", [](const MetricContext&) { return rouge_metric("rouge1", 1); });
    r.put("rouge2", [](const MetricContext&) { return rouge_metric("rouge2", 2); });
    r.put("rougeL", [](const MetricContext&) {
      return Metric::from_binary("rougeL", rouge_l, "f1");
    });
    r.put("meteor", [](const MetricContext&) {
      return Metric::from_binary("meteor", [](std::string_view c, std::string_view r) {
        return ScoreMap{{"score", meteor(c, r)}};
      });
    });
    r.put("embed_sim", [](const MetricContext& ctx) {
      const std::string backend = backend_name(ctx.backends, "embedding", "hashed_ngram");
      const auto factory = embedding_registry().get(backend);
      if (!factory) throw ConfigError("unknown embedding backend: " + backend);
      std::shared_ptr<const EmbeddingBackend> impl =
          (*factory)(backend_config(ctx.backends, "embedding"));
      Metric m = Metric::from_binary(
          "embed_sim", [impl](std::string_view c, std::string_view r) {
            return ScoreMap{{"score", embedding_similarity(c, r, *impl)}};
          });
      m.concurrent_safe = impl->concurrent_safe();
      return m;
    });
    r.put("referenceless", [](const MetricContext& ctx) {
      const std::string backend =
          backend_name(ctx.backends, "referenceless", "char_trigram");
      const auto factory = scoring_registry().get(backend);
      if (!factory) throw ConfigError("unknown scoring backend: " + backend);
      std::shared_ptr<const ScoringBackend> impl =
          (*factory)(backend_config(ctx.backends, "referenceless"), ctx.reference_corpus);
      Metric m = Metric::from_unary("referenceless", [impl](std::string_view text) {
        const std::vector<std::string> one = {std::string(text)};
        return ScoreMap{{"score", referenceless_score(one, *impl).at(0)}};
      });
      m.concurrent_safe = impl->concurrent_safe();
      return m;
    });
  });
  return r;
}

}  // namespace

Metric Metric::from_unary(std::string name, Unary fn, std::string primary_key) {
  Metric m;
  m.name = std::move(name);
  m.unary = std::move(fn);
  m.primary_key = std::move(primary_key);
  return m;
}

Metric Metric::from_binary(std::string name, Binary fn, std::string primary_key) {
  Metric m;
  m.name = std::move(name);
  m.binary = std::move(fn);
  m.primary_key = std::move(primary_key);
  return m;
}

ScoreMap Metric::operator()(std::string_view original, std::string_view anonymized) const {
  if (binary) return binary(anonymized, original);
  if (unary) return unary(anonymized);
  throw ConfigError("metric " + name + " has no scoring function");
}

MetricReport aggregate_fidelity(std::span<const TextPair> pairs, const Metric& metric,
                                std::size_t workers) {
  if (pairs.empty()) throw ArgumentError("aggregate_fidelity: no pairs");
  MetricReport report;
  report.metric_name = metric.name;
  report.per_pair.resize(pairs.size());
  parallel_for_each_index(pairs.size(), metric.concurrent_safe ? workers : 1,
                          [&](std::size_t i) {
                            report.per_pair[i] = metric(pairs[i].first, pairs[i].second);
                          });
  const ScoreMap& first = report.per_pair.front();
  for (std::size_t i = 0; i < report.per_pair.size(); ++i) {
    const ScoreMap& scores = report.per_pair[i];
    bool same_keys = scores.size() == first.size();
    for (auto a = scores.begin(), b = first.begin(); same_keys && a != scores.end(); ++a, ++b) {
      same_keys = a->first == b->first;
    }
    if (!same_keys) {
      throw ValidationError("metric " + metric.name + ": pair " + std::to_string(i) +
                            " reports different score names than pair 0");
    }
    for (const auto& [key, value] : scores) report.aggregate[key] += value;
  }
  for (auto& [key, total] : report.aggregate) total /= static_cast<double>(pairs.size());
  return report;
}

void register_metric(const std::string& name, MetricFactory factory) {
  metric_registry().put(name, std::move(factory));
}

void register_embedding_backend(const std::string& name, EmbeddingFactory factory) {
  embedding_registry().put(name, std::move(factory));
}

void register_scoring_backend(const std::string& name, ScoringFactory factory) {
  scoring_registry().put(name, std::move(factory));
}

Metric make_metric(const std::string& name, const MetricContext& context) {
  const auto factory = metric_registry().get(name);
  if (!factory) throw ConfigError("unknown metric: " + name);
  Metric m = (*factory)(context);
  if (m.name.empty()) m.name = name;
  return m;
}

bool is_registered_metric(const std::string& name) {
  return metric_registry().get(name).has_value();
}

}  // namespace anonbench::metrics
