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

#include <spdlog/spdlog.h>

#include <atomic>
#include <map>
#include <mutex>

#include "anonbench/error.hpp"
#include "anonbench/experiment.hpp"
#include "anonbench/fsutil.hpp"
#include "anonbench/parallel.hpp"

namespace anonbench::experiment {

namespace {

using json = nlohmann::json;

// Shared per-anonymizer state. The instance is built on the first cache miss
// and calls into it are serialized; the instance may still fan out
// internally (e.g. the external adapter's in-flight limit).
struct AnonymizerSlot {
  const anonymize::AnonymizerSpec* spec = nullptr;
  std::string hash;
  std::mutex mutex;
  std::unique_ptr<anonymize::Anonymizer> instance;
};

struct Shared {
  const ExperimentConfig& config;
  const RunHooks& hooks;
  std::unique_ptr<AnonymizationCache> cache;
  std::atomic<std::size_t> invocations{0};
  std::atomic<std::size_t> hits{0};
  std::atomic<std::size_t> misses{0};
};

std::vector<std::string> run_anonymizer(Shared& shared, AnonymizerSlot& slot,
                                        const std::vector<std::string>& texts) {
  std::lock_guard lock(slot.mutex);
  if (!slot.instance) {
    slot.instance = shared.hooks.anonymizer_factory ? shared.hooks.anonymizer_factory(*slot.spec)
                                                    : anonymize::make_anonymizer(*slot.spec);
    if (!slot.instance) throw ConfigError("anonymizer factory returned null for " + slot.spec->name);
  }
  shared.invocations += texts.size();
  auto out = slot.instance->anonymize_batch(texts);
  if (out.size() != texts.size()) {
    throw ProtocolError("anonymizer " + slot.spec->name + " returned " +
                        std::to_string(out.size()) + " texts for " +
                        std::to_string(texts.size()));
  }
  return out;
}

// Anonymizes one split through the cache. Entry keys are record ids, with
// "#text2" appended for the second text of a pair.
tasks::AnonymizedSplit anonymize_cached(Shared& shared, AnonymizerSlot& slot,
                                        const corpus::Dataset& data) {
  const bool pair = data.sentence_pair();
  std::vector<std::string> keys;
  std::vector<const std::string*> sources;
  for (const auto& r : data.records()) {
    keys.push_back(r.id);
    sources.push_back(&r.text);
  }
  if (pair) {
    for (const auto& r : data.records()) {
      keys.push_back(r.id + "#text2");
      sources.push_back(&*r.text2);
    }
  }

  std::vector<std::string> out(keys.size());
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    std::optional<std::string> hit;
    if (shared.cache) hit = shared.cache->lookup(*slot.spec, data.fingerprint(), keys[i]);
    if (hit) {
      out[i] = std::move(*hit);
      ++shared.hits;
    } else {
      missing.push_back(i);
    }
  }
  shared.misses += missing.size();
  if (!missing.empty()) {
    std::vector<std::string> inputs;
    inputs.reserve(missing.size());
    for (std::size_t i : missing) inputs.push_back(*sources[i]);
    std::vector<std::string> produced = run_anonymizer(shared, slot, inputs);
    std::map<std::string, std::string> fresh;
    for (std::size_t k = 0; k < missing.size(); ++k) {
      out[missing[k]] = produced[k];
      fresh.emplace(keys[missing[k]], std::move(produced[k]));
    }
    if (shared.cache) shared.cache->store(*slot.spec, data.fingerprint(), fresh);
  }

  tasks::AnonymizedSplit split;
  const std::size_t n = data.size();
  split.text.assign(std::make_move_iterator(out.begin()),
                    std::make_move_iterator(out.begin() + static_cast<std::ptrdiff_t>(n)));
  if (pair) {
    split.text2.assign(std::make_move_iterator(out.begin() + static_cast<std::ptrdiff_t>(n)),
                       std::make_move_iterator(out.end()));
  }
  return split;
}

struct TaskPrep {
  std::optional<tasks::ClassifierModel> model;
  std::optional<std::string> train_error;
  std::vector<std::optional<metrics::Metric>> metrics;
  std::vector<std::optional<std::string>> metric_errors;
};

std::vector<std::string> texts_of(const corpus::Dataset& d) {
  std::vector<std::string> out;
  out.reserve(d.size());
  for (const auto& r : d.records()) out.push_back(r.text);
  return out;
}

TaskPrep prepare_task(const ExperimentConfig& config, const tasks::TaskSpec& spec,
                      const tasks::RunOptions& options) {
  TaskPrep prep;
  const bool needs_pretrained =
      config.train_task_models && spec.trains_classifier() &&
      !(spec.kind == tasks::TaskKind::kClassification && config.train_with_generations);
  if (needs_pretrained) {
    try {
      prep.model = tasks::train_classifier(*spec.train, spec, options.classifier_seed,
                                           options.train, options.features);
    } catch (const std::exception& e) {
      prep.train_error = std::string("training failed: ") + e.what();
    }
  }
  metrics::MetricContext context;
  context.backends = config.backends;
  if (config.reference_corpus) {
    context.reference_corpus = *config.reference_corpus;
  } else {
    context.reference_corpus = texts_of(spec.train ? *spec.train : *spec.test);
  }
  for (const auto& name : config.metrics) {
    try {
      prep.metrics.emplace_back(metrics::make_metric(name, context));
      prep.metric_errors.emplace_back();
    } catch (const std::exception& e) {
      prep.metrics.emplace_back();
      prep.metric_errors.emplace_back(std::string("metric setup failed: ") + e.what());
    }
  }
  return prep;
}

struct CellOutput {
  TaskCell task_cell;
  std::vector<MetricCell> metric_cells;
};

void write_samples(const ExperimentConfig& config, const std::string& anonymizer,
                   const tasks::TaskSpec& spec, const tasks::AnonymizedSplit& split) {
  const corpus::Dataset& test = *spec.test;
  const std::size_t n = std::min(config.sample_store_count, test.size());
  std::string body;
  for (std::size_t i = 0; i < n; ++i) {
    json line = {{"id", test[i].id}, {"original", test[i].text}, {"anonymized", split.text[i]}};
    if (!split.text2.empty()) {
      line["original2"] = test[i].text2.value_or("");
      line["anonymized2"] = split.text2[i];
    }
    body += line.dump() + "\n";
  }
  write_file_atomic(sample_path(config.output_dir, anonymizer, spec.name), body);
}

CellOutput run_cell(Shared& shared, AnonymizerSlot& slot, const tasks::TaskSpec& spec,
                    const TaskPrep& prep, const tasks::RunOptions& options) {
  const ExperimentConfig& config = shared.config;
  const std::string& name = slot.spec->name;
  CellOutput out;
  out.task_cell.anonymizer = name;
  out.task_cell.task = spec.name;
  for (std::size_t m = 0; m < config.metrics.size(); ++m) {
    MetricCell cell;
    cell.anonymizer = name;
    cell.task = spec.name;
    cell.metric = config.metrics[m];
    if (prep.metrics[m]) cell.primary_key = prep.metrics[m]->primary_key;
    out.metric_cells.push_back(std::move(cell));
  }

  std::map<const corpus::Dataset*, tasks::AnonymizedSplit> memo;
  const tasks::SplitAnonymizer anonymizer = [&](const corpus::Dataset& d) {
    auto it = memo.find(&d);
    if (it == memo.end()) it = memo.emplace(&d, anonymize_cached(shared, slot, d)).first;
    return it->second;
  };

  std::optional<tasks::AnonymizedSplit> test_split;
  std::optional<std::string> anonymize_error;
  try {
    test_split = anonymizer(*spec.test);
  } catch (const std::exception& e) {
    anonymize_error = std::string("anonymization failed: ") + e.what();
    spdlog::warn("cell {}/{}: {}", name, spec.name, *anonymize_error);
  }

  // Metric cells.
  for (std::size_t m = 0; m < config.metrics.size(); ++m) {
    MetricCell& cell = out.metric_cells[m];
    if (anonymize_error || prep.metric_errors[m]) {
      cell.status = CellStatus::kError;
      cell.error = anonymize_error ? *anonymize_error : *prep.metric_errors[m];
      continue;
    }
    try {
      std::vector<metrics::TextPair> pairs;
      const corpus::Dataset& test = *spec.test;
      for (std::size_t i = 0; i < test.size(); ++i) {
        pairs.emplace_back(test[i].text, test_split->text[i]);
      }
      for (std::size_t i = 0; i < test_split->text2.size(); ++i) {
        pairs.emplace_back(test[i].text2.value_or(""), test_split->text2[i]);
      }
      metrics::MetricReport report = metrics::aggregate_fidelity(pairs, *prep.metrics[m]);
      cell.n_pairs = pairs.size();
      cell.aggregate = std::move(report.aggregate);
    } catch (const std::exception& e) {
      cell.status = CellStatus::kError;
      cell.error = e.what();
    }
  }

  // Task cell.
  TaskCell& tc = out.task_cell;
  if (anonymize_error) {
    tc.status = CellStatus::kError;
    tc.error = *anonymize_error;
  } else if (spec.trains_classifier() && !config.train_task_models) {
    tc.status = CellStatus::kSkipped;
  } else if (prep.train_error) {
    tc.status = CellStatus::kError;
    tc.error = *prep.train_error;
  } else {
    try {
      tc.result = tasks::run_task(spec, name, anonymizer, options,
                                  prep.model ? &*prep.model : nullptr);
    } catch (const std::exception& e) {
      tc.status = CellStatus::kError;
      tc.error = e.what();
    }
  }

  if (test_split && !config.output_dir.empty() && config.sample_store_count > 0) {
    try {
      write_samples(config, name, spec, *test_split);
    } catch (const std::exception& e) {
      spdlog::warn("cell {}/{}: could not write samples: {}", name, spec.name, e.what());
    }
  }
  spdlog::info("cell {}/{}: {}", name, spec.name, to_string(tc.status));
  return out;
}

}  // namespace

std::filesystem::path sample_path(const std::filesystem::path& output_dir,
                                  const std::string& anonymizer, const std::string& task) {
  return output_dir / "samples" / anonymizer / (task + ".jsonl");
}

RunOutcome run_experiment(const ExperimentConfig& config, const RunHooks& hooks) {
  validate(config);
  Shared shared{config, hooks, nullptr};
  if (!config.cache_dir.empty()) {
    shared.cache = std::make_unique<AnonymizationCache>(config.cache_dir);
  }

  ExperimentResult result;
  result.exp_name = config.exp_name;
  result.config = config_echo(config);
  Provenance& prov = result.provenance;
  prov.code_version = std::string(kCodeVersion);
  prov.detector_version = std::string(anonymize::kDetectorVersion);
  prov.timestamps["started"] = utc_timestamp();
  prov.seeds["classifier_seed"] = config.classifier_seed;
  if (config.seed_override) prov.seeds["override"] = *config.seed_override;

  std::vector<std::unique_ptr<AnonymizerSlot>> slots;
  for (const auto& spec : config.anonymizers) {
    auto slot = std::make_unique<AnonymizerSlot>();
    slot->spec = &spec;
    slot->hash = anonymize::spec_hash(spec);
    prov.anonymizer_specs[spec.name] = anonymize::to_json(spec);
    prov.anonymizer_hashes[spec.name] = slot->hash;
    prov.seeds["anonymizer/" + spec.name] = spec.seed;
    slots.push_back(std::move(slot));
  }

  tasks::RunOptions options;
  options.classifier_seed = config.classifier_seed;
  options.train_with_generations = config.train_with_generations;

  for (const auto& task : config.tasks) {
    if (task.train) prov.dataset_fingerprints[task.name + "/train"] = task.train->fingerprint();
    prov.dataset_fingerprints[task.name + "/test"] = task.test->fingerprint();
    const bool generations =
        task.kind == tasks::TaskKind::kClassification && config.train_with_generations;
    for (const auto& spec : config.anonymizers) {
      result.cache_keys[spec.name + "/" + task.name + "/test"] =
          AnonymizationCache::key(spec, task.test->fingerprint());
      if (generations && task.train && config.train_task_models) {
        result.cache_keys[spec.name + "/" + task.name + "/train"] =
            AnonymizationCache::key(spec, task.train->fingerprint());
      }
    }
    if ((task.kind == tasks::TaskKind::kClassification ||
         task.kind == tasks::TaskKind::kAuthorship)) {
      try {
        result.random_baselines[task.name] =
            tasks::random_baseline(*task.test, task, config.classifier_seed);
      } catch (const std::exception& e) {
        spdlog::warn("task {}: no random baseline: {}", task.name, e.what());
      }
    }
  }

  const std::size_t workers = std::max<std::size_t>(1, config.max_concurrency);
  std::vector<TaskPrep> preps(config.tasks.size());
  parallel_for_each_index(config.tasks.size(), workers, [&](std::size_t t) {
    preps[t] = prepare_task(config, config.tasks[t], options);
  });

  const std::size_t n_tasks = config.tasks.size();
  std::vector<CellOutput> cells(slots.size() * n_tasks);
  parallel_for_each_index(cells.size(), workers, [&](std::size_t i) {
    const std::size_t a = i / n_tasks;
    const std::size_t t = i % n_tasks;
    cells[i] = run_cell(shared, *slots[a], config.tasks[t], preps[t], options);
  });

  for (auto& cell : cells) {
    result.task_cells.push_back(std::move(cell.task_cell));
    for (auto& m : cell.metric_cells) result.metric_cells.push_back(std::move(m));
  }
  prov.timestamps["finished"] = utc_timestamp();

  if (!config.output_dir.empty()) {
    serialize_result(result, config.output_dir / "results.json");
  }

  RunOutcome outcome;
  outcome.result = std::move(result);
  outcome.stats.anonymizer_invocations = shared.invocations;
  outcome.stats.cache_hits = shared.hits;
  outcome.stats.cache_misses = shared.misses;
  return outcome;
}

}  // namespace anonbench::experiment
