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

#include "anonbench/error.hpp"
#include "anonbench/rng.hpp"
#include "anonbench/tasks.hpp"
#include "anonbench/utf8.hpp"

namespace anonbench::tasks {

namespace {

std::vector<std::string> original_texts(const corpus::Dataset& d) {
  std::vector<std::string> out;
  out.reserve(d.size());
  for (const auto& r : d.records()) out.push_back(r.text);
  return out;
}

double primary_score(const metrics::ScoreMap& scores, const std::string& key,
                     const TaskSpec& spec) {
  auto it = scores.find(key);
  if (it == scores.end()) {
    throw ValidationError("task " + spec.name + ": custom evaluation lacks score " + key);
  }
  return it->second;
}

}  // namespace

double masked_entity_recall(const corpus::Dataset& test,
                            std::span<const std::string> anonymized_texts) {
  if (anonymized_texts.size() != test.size()) {
    throw ValidationError("masked_entity_recall: " + std::to_string(anonymized_texts.size()) +
                          " anonymized texts for " + std::to_string(test.size()) + " records");
  }
  std::size_t total = 0;
  std::size_t masked = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto& spans = test[i].gold_spans;
    if (!spans) {
      throw ValidationError("masked_entity_recall: record " + test[i].id + " has no gold spans");
    }
    const std::string haystack = utf8::ascii_lower(anonymized_texts[i]);
    for (const auto& span : *spans) {
      ++total;
      masked += haystack.find(utf8::ascii_lower(span.surface)) == std::string::npos;
    }
  }
  return total == 0 ? 1.0 : static_cast<double>(masked) / static_cast<double>(total);
}

AnonymizedSplit anonymize_split(anonymize::Anonymizer& anonymizer,
                                const corpus::Dataset& data) {
  AnonymizedSplit out;
  out.text = anonymizer.anonymize_batch(original_texts(data));
  if (data.sentence_pair()) {
    std::vector<std::string> second;
    second.reserve(data.size());
    for (const auto& r : data.records()) second.push_back(r.text2.value_or(""));
    out.text2 = anonymizer.anonymize_batch(second);
  }
  return out;
}

SplitAnonymizer direct_split_anonymizer(const anonymize::AnonymizerSpec& spec) {
  std::shared_ptr<anonymize::Anonymizer> anonymizer = anonymize::make_anonymizer(spec);
  return [anonymizer](const corpus::Dataset& d) { return anonymize_split(*anonymizer, d); };
}

TaskResult run_task(const TaskSpec& spec, const std::string& model_name,
                    const SplitAnonymizer& anonymizer, const RunOptions& options,
                    const ClassifierModel* pretrained) {
  validate(spec);
  const corpus::Dataset& test = *spec.test;
  switch (spec.kind) {
    case TaskKind::kClassification:
    case TaskKind::kAuthorship: {
      std::optional<ClassifierModel> own;
      const bool generations =
          spec.kind == TaskKind::kClassification && options.train_with_generations;
      if (generations) {
        const AnonymizedSplit train = anonymizer(*spec.train);
        own = train_classifier(labeled_inputs(*spec.train, spec, &train),
                               options.classifier_seed, options.train, options.features);
      } else if (!pretrained) {
        own = train_classifier(*spec.train, spec, options.classifier_seed, options.train,
                               options.features);
      }
      const ClassifierModel& model = own ? *own : *pretrained;
      const AnonymizedSplit anonymized = anonymizer(test);
      const double u_orig = evaluate_classifier(model, labeled_inputs(test, spec), spec.metric,
                                                spec.positive_class);
      const double u_priv = evaluate_classifier(model, labeled_inputs(test, spec, &anonymized),
                                                spec.metric, spec.positive_class);
      return make_task_result(spec.name, model_name, std::string(to_string(spec.metric)),
                              u_orig, u_priv, test.size());
    }
    case TaskKind::kDeidentification: {
      const AnonymizedSplit anonymized = anonymizer(test);
      const std::vector<std::string> originals = original_texts(test);
      return make_task_result(spec.name, model_name, "masked_entity_recall",
                              masked_entity_recall(test, originals),
                              masked_entity_recall(test, anonymized.text), test.size());
    }
    case TaskKind::kCustom: {
      const auto task = make_custom_task(spec);
      const std::string key = task->primary_key();
      const AnonymizedSplit anonymized = anonymizer(test);
      const double u_orig = primary_score(task->evaluate(original_texts(test)), key, spec);
      const double u_priv = primary_score(task->evaluate(anonymized.text), key, spec);
      return make_task_result(spec.name, model_name, key, u_orig, u_priv, test.size());
    }
  }
  throw ArgumentError("unhandled task kind");
}

TaskResult run_utility_task(const TaskSpec& spec, const anonymize::AnonymizerSpec& anonymizer,
                            const RunOptions& options) {
  if (spec.kind != TaskKind::kClassification && spec.kind != TaskKind::kCustom) {
    throw ArgumentError("task " + spec.name + " is not a utility task");
  }
  return run_task(spec, anonymizer.name, direct_split_anonymizer(anonymizer), options);
}

TaskResult run_privacy_task(const TaskSpec& spec, const anonymize::AnonymizerSpec& anonymizer,
                            const RunOptions& options) {
  if (!spec.is_privacy()) {
    throw ArgumentError("task " + spec.name + " is not a privacy task");
  }
  return run_task(spec, anonymizer.name, direct_split_anonymizer(anonymizer), options);
}

double random_baseline(std::span<const std::string> labels, TaskMetric metric,
                       std::uint64_t seed, std::optional<std::string> positive_class,
                       std::size_t rounds) {
  if (labels.empty()) throw ValidationError("random_baseline: no labels");
  std::map<std::string, std::size_t> counts;
  for (const auto& l : labels) ++counts[l];
  const std::size_t n = labels.size();
  if (metric == TaskMetric::kAccuracy) {
    std::size_t squares = 0;
    for (const auto& [label, c] : counts) squares += c * c;
    return static_cast<double>(squares) / (static_cast<double>(n) * static_cast<double>(n));
  }
  const std::string positive = positive_class.value_or(counts.rbegin()->first);
  if (rounds == 0) throw ArgumentError("random_baseline: rounds must be positive");
  Rng rng(mix_seed(seed, 0xba5e));
  double total = 0;
  for (std::size_t round = 0; round < rounds; ++round) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool pred = labels[uniform_index(rng, n)] == positive;
      const bool gold = labels[i] == positive;
      tp += pred && gold;
      fp += pred && !gold;
      fn += !pred && gold;
    }
    const double p = tp + fp ? double(tp) / double(tp + fp) : 0.0;
    const double r = tp + fn ? double(tp) / double(tp + fn) : 0.0;
    total += p + r > 0 ? 2 * p * r / (p + r) : 0.0;
  }
  return total / static_cast<double>(rounds);
}

double random_baseline(const corpus::Dataset& test, const TaskSpec& spec, std::uint64_t seed,
                       std::size_t rounds) {
  std::vector<std::string> labels;
  labels.reserve(test.size());
  for (const auto& r : test.records()) {
    auto t = target_of(r, spec.kind);
    if (!t) throw ValidationError("random_baseline: record " + r.id + " has no label");
    labels.push_back(*t);
  }
  return random_baseline(labels, spec.metric, seed, spec.positive_class, rounds);
}

double simulate_random_accuracy(std::span<const std::string> labels, std::uint64_t seed,
                                std::size_t draws) {
  if (labels.empty()) throw ValidationError("simulate_random_accuracy: no labels");
  if (draws == 0) throw ArgumentError("simulate_random_accuracy: draws must be positive");
  Rng rng(mix_seed(seed, 0x51a1));
  std::size_t hits = 0;
  for (std::size_t d = 0; d < draws; ++d) {
    const std::string& gold = labels[uniform_index(rng, labels.size())];
    const std::string& pred = labels[uniform_index(rng, labels.size())];
    hits += gold == pred;
  }
  return static_cast<double>(hits) / static_cast<double>(draws);
}

}  // namespace anonbench::tasks
